#include "geophase/core.hpp"

#include "geophase/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace geophase {

std::size_t SpectralDecomposition::cluster_of(Eigen::Index eigen_index) const {
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const auto& cl = clusters[c];
    if (eigen_index >= cl.first && eigen_index < cl.first + cl.size) return c;
  }
  throw Error(ErrorKind::IndexOutOfRange,
              "eigenvalue index " + std::to_string(eigen_index) +
                  " outside spectrum of dimension " + std::to_string(dim()));
}

ComplexMatrix SpectralDecomposition::cluster_basis(std::size_t cluster) const {
  if (cluster >= clusters.size()) {
    throw Error(ErrorKind::IndexOutOfRange,
                "cluster " + std::to_string(cluster) + " of " +
                    std::to_string(clusters.size()));
  }
  const auto& cl = clusters[cluster];
  return eigenvectors.middleCols(cl.first, cl.size);
}

std::vector<Eigen::Index> SpectralDecomposition::cluster_ranks() const {
  std::vector<Eigen::Index> ranks;
  ranks.reserve(clusters.size());
  for (const auto& cl : clusters) ranks.push_back(cl.size);
  return ranks;
}

double hermiticity_error(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double operator_norm(const HermitianOperator& h) {
  if (h.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

SpectralDecomposition eigh(const HermitianOperator& h, double degeneracy_tol) {
  if (h.rows() == 0 || h.rows() != h.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "eigh needs a non-empty square matrix");
  }
  if (!(degeneracy_tol > 0.0)) {
    throw Error(ErrorKind::DomainError, "degeneracy_tol must be positive");
  }
  const double asym = hermiticity_error(h);
  const double magnitude = std::max(1.0, h.cwiseAbs().maxCoeff());
  if (!(asym < 1e-12 * magnitude)) {
    throw Error(ErrorKind::NonHermitianInput,
                "max |H - H^dagger| = " + std::to_string(asym));
  }

  // Symmetrize so rounding asymmetry in products like (R.J)^2 is not
  // silently discarded by the solver reading one triangle.
  const ComplexMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::DomainError, "eigensolver did not converge");
  }

  SpectralDecomposition dec;
  dec.eigenvalues = es.eigenvalues();
  dec.eigenvectors = es.eigenvectors();
  dec.scale = std::max(1.0, dec.eigenvalues.cwiseAbs().maxCoeff());

  const double gap_tol = degeneracy_tol * dec.scale;
  const Eigen::Index d = dec.eigenvalues.size();
  Eigen::Index start = 0;
  for (Eigen::Index k = 1; k <= d; ++k) {
    if (k == d || dec.eigenvalues(k) - dec.eigenvalues(k - 1) >= gap_tol) {
      Cluster cl;
      cl.first = start;
      cl.size = k - start;
      cl.mean_energy = dec.eigenvalues.segment(start, cl.size).mean();
      dec.clusters.push_back(cl);
      start = k;
    }
  }
  return dec;
}

Complex overlap(const StateVector& a, const StateVector& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "overlap of vectors with sizes " + std::to_string(a.size()) +
                    " and " + std::to_string(b.size()));
  }
  return a.dot(b);
}

HermitianOperator projector_from_cluster(const SpectralDecomposition& dec,
                                         std::size_t cluster) {
  const ComplexMatrix basis = dec.cluster_basis(cluster);
  return basis * basis.adjoint();
}

StateVector normalized(const StateVector& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorKind::DomainError, "cannot normalize a zero or non-finite vector");
  }
  return v / n;
}

double wrap_phase(double angle) {
  double r = std::remainder(angle, 2.0 * kPi);  // [-pi, pi]
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

HermitianOperator sigma_x() {
  HermitianOperator m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

HermitianOperator sigma_y() {
  HermitianOperator m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

HermitianOperator sigma_z() {
  HermitianOperator m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

}  // namespace geophase
