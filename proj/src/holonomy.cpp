#include "geophase/holonomy.hpp"

#include "geophase/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>

namespace geophase {

namespace {

std::vector<double> to_std(const ParameterPoint& r) {
  return {r.data(), r.data() + r.size()};
}

}  // namespace

DegenerateBandFrame degenerate_band_frame(const ParametrizedHamiltonian& h,
                                          const ParamPath& path, std::size_t cluster,
                                          double degeneracy_tol) {
  if (path.dim() != h.param_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "path and model dimensions differ");
  }
  DegenerateBandFrame frame{cluster, path, {}};
  frame.frames.reserve(path.samples().size());
  std::vector<Eigen::Index> ranks;
  for (const auto& r : path.samples()) {
    const auto dec = eigh(h.eval(r), degeneracy_tol);
    if (frame.frames.empty()) {
      ranks = dec.cluster_ranks();
    } else if (dec.cluster_ranks() != ranks) {
      throw Error(ErrorKind::DegeneracyOnPath,
                  "cluster structure changes along the loop", to_std(r));
    }
    if (cluster >= dec.clusters.size()) {
      throw Error(ErrorKind::IndexOutOfRange,
                  "cluster " + std::to_string(cluster) + " of " +
                      std::to_string(dec.clusters.size()),
                  to_std(r));
    }
    frame.frames.push_back(dec.cluster_basis(cluster));
  }
  return frame;
}

ComplexMatrix unitarize(const ComplexMatrix& overlap_matrix) {
  Eigen::JacobiSVD<ComplexMatrix> svd(overlap_matrix,
                                      Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(s.size() - 1) < 1e-10) {
    throw Error(ErrorKind::RankDeficientOverlap,
                "overlap matrix is (nearly) singular; refine the loop");
  }
  return svd.matrixU() * svd.matrixV().adjoint();
}

HolonomyMatrix wilczek_zee_holonomy(const DegenerateBandFrame& frame) {
  if (!frame.path.closed()) {
    throw Error(ErrorKind::NotClosed, "holonomy needs a closed loop");
  }
  const auto& f = frame.frames;
  const std::size_t m = f.size() - 1;
  ComplexMatrix product = ComplexMatrix::Identity(frame.rank(), frame.rank());
  for (std::size_t k = 0; k < m; ++k) {
    const ComplexMatrix& next = (k + 1 == m) ? f.front() : f[k + 1];
    try {
      product = product * unitarize(f[k].adjoint() * next);
    } catch (const Error& e) {
      throw Error(e.kind(), "link " + std::to_string(k) + ": " + e.what(),
                  to_std(frame.path[k]));
    }
  }
  return {product.adjoint()};
}

HolonomyMatrix wilczek_zee_holonomy(const ParametrizedHamiltonian& h,
                                    const ParamPath& loop, std::size_t cluster) {
  if (!loop.closed()) throw Error(ErrorKind::NotClosed, "holonomy needs a closed loop");
  return wilczek_zee_holonomy(degenerate_band_frame(h, loop, cluster));
}

Complex wilson_loop(const HolonomyMatrix& u) { return u.u.trace(); }

std::vector<double> holonomy_phases(const HolonomyMatrix& u) {
  Eigen::ComplexEigenSolver<ComplexMatrix> es(u.u);
  std::vector<double> phases;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    phases.push_back(wrap_phase(std::arg(es.eigenvalues()(i))));
  }
  std::sort(phases.begin(), phases.end());
  return phases;
}

double pancharatnam_chain(const std::vector<StateVector>& states, bool closed) {
  if (states.size() < 2) {
    throw Error(ErrorKind::DomainError, "a chain needs at least two states");
  }
  if (closed) {
    const Complex ends = states.back().dot(states.front());
    const double norms = states.back().norm() * states.front().norm();
    if (std::abs(ends) < (1.0 - 1e-12) * norms) {
      throw Error(ErrorKind::NotClosed, "closed chain must end on its first state");
    }
  }
  Complex product = 1.0;
  const std::size_t links = states.size() - 1;
  for (std::size_t k = 0; k < links; ++k) {
    // A closed chain wraps onto the first state itself.
    const StateVector& next = (closed && k + 1 == links) ? states.front() : states[k + 1];
    const Complex ov = overlap(next, states[k]);
    const double scale = next.norm() * states[k].norm();
    if (std::abs(ov) < 1e-12 * std::max(scale, 1e-300)) {
      throw Error(ErrorKind::ZeroOverlap,
                  "link " + std::to_string(k) + " has vanishing overlap; nothing survives the filter");
    }
    product *= ov / std::abs(ov);
  }
  return wrap_phase(std::arg(product));
}

}  // namespace geophase
