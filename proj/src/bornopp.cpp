#include "geophase/bornopp.hpp"

#include "geophase/errors.hpp"
#include "geophase/geometry.hpp"

#include <cmath>
#include <string>

namespace geophase {

namespace {

std::vector<double> to_std(const ParameterPoint& r) {
  return {r.data(), r.data() + r.size()};
}

HermitianOperator commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

void check_hbar(double hbar) {
  if (!(hbar > 0.0)) throw Error(ErrorKind::DomainError, "hbar must be positive");
}

double resolve_step(double fd_step, const ParameterPoint& r) {
  return fd_step > 0.0 ? fd_step : default_fd_step(r);
}

}  // namespace

ProjectorSet projectors_at(const ParametrizedHamiltonian& h, const ParameterPoint& r,
                           double degeneracy_tol) {
  const auto dec = eigh(h.eval(r), degeneracy_tol);
  ProjectorSet set;
  for (std::size_t c = 0; c < dec.clusters.size(); ++c) {
    set.projectors.push_back(projector_from_cluster(dec, c));
    set.energies.push_back(dec.clusters[c].mean_energy);
    set.ranks.push_back(dec.clusters[c].size);
  }
  return set;
}

ProjectorFamily projector_family(const ParametrizedHamiltonian& h,
                                 const std::vector<ParameterPoint>& points,
                                 double degeneracy_tol) {
  ProjectorFamily fam;
  for (const auto& r : points) {
    auto set = projectors_at(h, r, degeneracy_tol);
    if (fam.points.empty()) {
      fam.cluster_ranks = set.ranks;
    } else if (set.ranks != fam.cluster_ranks) {
      throw Error(ErrorKind::ClusterStructureChanged,
                  "cluster ranks differ from the first point (level crossing)",
                  to_std(r));
    }
    fam.points.push_back(r);
    fam.projectors.push_back(std::move(set.projectors));
  }
  return fam;
}

std::vector<std::vector<HermitianOperator>> projector_derivatives(
    const ParametrizedHamiltonian& h, const ParameterPoint& r, double fd_step,
    DerivativeMode mode) {
  const ProjectorSet base = projectors_at(h, r);
  const std::size_t nc = base.projectors.size();
  std::vector<std::vector<HermitianOperator>> out(r.size());

  std::optional<std::vector<HermitianOperator>> grad;
  if (mode == DerivativeMode::Auto) grad = h.grad(r);

  if (grad) {
    // First-order perturbation of spectral projectors:
    // dPi_j = sum_{l != j} (Pi_j G Pi_l + Pi_l G Pi_j) / (E_j - E_l)
    for (Eigen::Index k = 0; k < r.size(); ++k) {
      const HermitianOperator& g = (*grad)[k];
      for (std::size_t j = 0; j < nc; ++j) {
        HermitianOperator d = HermitianOperator::Zero(g.rows(), g.cols());
        for (std::size_t l = 0; l < nc; ++l) {
          if (l == j) continue;
          const ComplexMatrix cross = base.projectors[j] * g * base.projectors[l];
          d += (cross + cross.adjoint()) / (base.energies[j] - base.energies[l]);
        }
        out[k].push_back(std::move(d));
      }
    }
    return out;
  }

  const double step = resolve_step(fd_step, r);
  for (Eigen::Index k = 0; k < r.size(); ++k) {
    ParameterPoint plus = r, minus = r;
    plus(k) += step;
    minus(k) -= step;
    const ProjectorSet p = projectors_at(h, plus);
    const ProjectorSet m = projectors_at(h, minus);
    if (p.ranks != base.ranks || m.ranks != base.ranks) {
      throw Error(ErrorKind::DegenerateNeighborhood,
                  "cluster structure changes within the difference stencil",
                  to_std(r));
    }
    for (std::size_t j = 0; j < nc; ++j) {
      out[k].push_back((p.projectors[j] - m.projectors[j]) / (2.0 * step));
    }
  }
  return out;
}

std::vector<HermitianOperator> induced_vector_potential(
    const ParametrizedHamiltonian& h, const ParameterPoint& r, double hbar,
    double fd_step, DerivativeMode mode) {
  check_hbar(hbar);
  const ProjectorSet base = projectors_at(h, r);
  const auto dpi = projector_derivatives(h, r, fd_step, mode);
  const Complex coeff(0.0, -0.5 * hbar);
  std::vector<HermitianOperator> a;
  a.reserve(dpi.size());
  for (const auto& dk : dpi) {
    HermitianOperator ak = HermitianOperator::Zero(h.hilbert_dim(), h.hilbert_dim());
    for (std::size_t j = 0; j < dk.size(); ++j) {
      ak += coeff * commutator(dk[j], base.projectors[j]);
    }
    a.push_back(0.5 * (ak + ak.adjoint()));
  }
  return a;
}

GaugeResiduals verify_gauge_conditions(const ParametrizedHamiltonian& h,
                                       const ParameterPoint& r,
                                       const std::vector<HermitianOperator>& a,
                                       double hbar, double fd_step,
                                       DerivativeMode mode) {
  check_hbar(hbar);
  if (static_cast<Eigen::Index>(a.size()) != r.size()) {
    throw Error(ErrorKind::DimensionMismatch, "need one A_k per parameter");
  }
  const ProjectorSet base = projectors_at(h, r);
  const auto dpi = projector_derivatives(h, r, fd_step, mode);
  GaugeResiduals res{0.0, 0.0};
  for (std::size_t k = 0; k < a.size(); ++k) {
    for (std::size_t i = 0; i < base.projectors.size(); ++i) {
      const auto& pi = base.projectors[i];
      const HermitianOperator p_comm = Complex(0.0, -hbar) * dpi[k][i];
      res.commutator = std::max(res.commutator, (p_comm - commutator(a[k], pi)).norm());
      res.diagonal = std::max(res.diagonal, (pi * a[k] * pi).norm());
    }
  }
  return res;
}

HermitianOperator induced_scalar_potential(const ParametrizedHamiltonian& h,
                                           const ParameterPoint& r,
                                           const std::vector<HermitianOperator>& a,
                                           const SlowSector& slow) {
  if (!(slow.mass > 0.0)) throw Error(ErrorKind::DomainError, "slow mass must be positive");
  const ProjectorSet base = projectors_at(h, r);
  const int d = h.hilbert_dim();
  HermitianOperator a2 = HermitianOperator::Zero(d, d);
  for (const auto& ak : a) a2 += ak * ak;
  HermitianOperator s = HermitianOperator::Zero(d, d);
  for (const auto& pi : base.projectors) s += pi * a2 * pi;
  s /= 2.0 * slow.mass;
  return 0.5 * (s + s.adjoint());
}

HermitianOperator field_strength(const ParametrizedHamiltonian& h,
                                 const ParameterPoint& r, int j, int k, double hbar,
                                 double fd_step, CommutatorNormalization norm) {
  check_hbar(hbar);
  if (j < 0 || k < 0 || j >= r.size() || k >= r.size()) {
    throw Error(ErrorKind::IndexOutOfRange, "invalid field-strength plane");
  }
  // Nested finite differences lose precision quickly; widen the outer
  // stencil when A itself comes from differences.
  const bool analytic = h.grad(r).has_value();
  const double step = fd_step > 0.0 ? fd_step
                                    : (analytic ? default_fd_step(r)
                                                : 1e-3 * std::max(1.0, r.norm()));

  auto partial = [&](int dir, int comp) {
    ParameterPoint plus = r, minus = r;
    plus(dir) += step;
    minus(dir) -= step;
    const auto ap = induced_vector_potential(h, plus, hbar);
    const auto am = induced_vector_potential(h, minus, hbar);
    return HermitianOperator((ap[comp] - am[comp]) / (2.0 * step));
  };

  const auto a = induced_vector_potential(h, r, hbar);
  const Complex c = norm == CommutatorNormalization::InverseHbar ? Complex(0.0, 1.0 / hbar)
                                                                 : Complex(0.0, 1.0);
  HermitianOperator f = partial(j, k) - partial(k, j) - c * commutator(a[j], a[k]);
  return 0.5 * (f + f.adjoint());
}

std::vector<HermitianOperator> induced_field(const ParametrizedHamiltonian& h,
                                             const ParameterPoint& r, double hbar,
                                             double fd_step,
                                             CommutatorNormalization norm) {
  if (r.size() != 3) {
    throw Error(ErrorKind::DimensionMismatch, "induced field needs three parameters");
  }
  return {field_strength(h, r, 1, 2, hbar, fd_step, norm),
          field_strength(h, r, 2, 0, hbar, fd_step, norm),
          field_strength(h, r, 0, 1, hbar, fd_step, norm)};
}

double branch_flux_sphere(const ParametrizedHamiltonian& h, std::size_t cluster,
                          double radius, int n_theta, int n_phi, double hbar,
                          CommutatorNormalization norm) {
  if (n_theta < 1 || n_phi < 1 || !(radius > 0.0)) {
    throw Error(ErrorKind::DomainError, "flux grid needs positive sizes and radius");
  }
  const double dtheta = kPi / n_theta;
  const double dphi = 2.0 * kPi / n_phi;
  double flux = 0.0;
  for (int i = 0; i < n_theta; ++i) {
    const double theta = (i + 0.5) * dtheta;
    for (int jj = 0; jj < n_phi; ++jj) {
      const double phi = (jj + 0.5) * dphi;
      const ParameterPoint r = spherical_point(radius, theta, phi);
      const auto b = induced_field(h, r, hbar, 0.0, norm);
      const ParameterPoint n = r / radius;
      const HermitianOperator bn = n(0) * b[0] + n(1) * b[1] + n(2) * b[2];
      const ProjectorSet set = projectors_at(h, r);
      if (cluster >= set.projectors.size()) {
        throw Error(ErrorKind::IndexOutOfRange, "cluster index out of range", to_std(r));
      }
      const double branch =
          (set.projectors[cluster] * bn).trace().real() / static_cast<double>(set.ranks[cluster]);
      flux += branch * radius * radius * std::sin(theta) * dtheta * dphi;
    }
  }
  return flux;
}

std::vector<FieldRow> effective_hamiltonian_report(const ParametrizedHamiltonian& h,
                                                   const SlowSector& slow,
                                                   const std::vector<ParameterPoint>& grid,
                                                   double hbar) {
  const ProjectorFamily fam = projector_family(h, grid);
  std::vector<FieldRow> rows;
  rows.reserve(grid.size());
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const ParameterPoint& r = grid[p];
    FieldRow row;
    row.r = r;
    row.eigenvalues = eigh(h.eval(r)).eigenvalues;
    row.vector_potential = induced_vector_potential(h, r, hbar);
    row.scalar_potential = induced_scalar_potential(h, r, row.vector_potential, slow);
    for (std::size_t c = 0; c < fam.cluster_ranks.size(); ++c) {
      const auto& pi = fam.projectors[p][c];
      row.scalar_per_cluster.push_back((pi * row.scalar_potential * pi).trace().real() /
                                       static_cast<double>(fam.cluster_ranks[c]));
    }
    row.potential = slow.V(r);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace geophase
