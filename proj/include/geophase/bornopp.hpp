#pragma once

#include "geophase/models.hpp"

#include <functional>
#include <vector>

namespace geophase {

/// Projectors onto the eigenvalue clusters of H(R), ascending in energy.
struct ProjectorSet {
  std::vector<HermitianOperator> projectors;
  std::vector<double> energies;  // cluster mean energies
  std::vector<Eigen::Index> ranks;
};

struct ProjectorFamily {
  std::vector<ParameterPoint> points;
  std::vector<std::vector<HermitianOperator>> projectors;  // [point][cluster]
  std::vector<Eigen::Index> cluster_ranks;
};

struct SlowSector {
  double mass = 1.0;
  std::function<double(const ParameterPoint&)> potential;  // V(R); empty means 0

  double V(const ParameterPoint& r) const { return potential ? potential(r) : 0.0; }
};

enum class DerivativeMode {
  Auto,              // analytic from dH/dR when the model provides it
  FiniteDifference,  // central differences of the projectors
};

/// Coefficient of the commutator term in F_jk.
enum class CommutatorNormalization {
  InverseHbar,  // F = dA - dA - (i/hbar)[A_j, A_k]
  Literal,      // F = dA - dA - i[A_j, A_k]
};

ProjectorSet projectors_at(const ParametrizedHamiltonian& h, const ParameterPoint& r,
                           double degeneracy_tol = kDefaultDegeneracyTol);

/// Throws ClusterStructureChanged if the number or ranks of clusters differ
/// between any two points.
ProjectorFamily projector_family(const ParametrizedHamiltonian& h,
                                 const std::vector<ParameterPoint>& points,
                                 double degeneracy_tol = kDefaultDegeneracyTol);

/// dPi_i/dR_k, indexed [k][i]. fd_step <= 0 selects 1e-5 * max(1, |R|).
/// Throws DegenerateNeighborhood when the cluster structure changes within
/// the difference stencil.
std::vector<std::vector<HermitianOperator>> projector_derivatives(
    const ParametrizedHamiltonian& h, const ParameterPoint& r, double fd_step = 0.0,
    DerivativeMode mode = DerivativeMode::Auto);

/// Off-diagonal-gauge induced vector potential
/// A_k = -(i hbar / 2) sum_j [dPi_j/dR_k, Pi_j]. It satisfies
/// [A_k, Pi_i] = -i hbar dPi_i/dR_k and Pi_i A_k Pi_i = 0 for every cluster.
std::vector<HermitianOperator> induced_vector_potential(
    const ParametrizedHamiltonian& h, const ParameterPoint& r, double hbar,
    double fd_step = 0.0, DerivativeMode mode = DerivativeMode::Auto);

struct GaugeResiduals {
  double commutator;  // max_{i,k} |-i hbar dPi_i - [A_k, Pi_i]|_F
  double diagonal;    // max_{i,k} |Pi_i A_k Pi_i|_F
};

GaugeResiduals verify_gauge_conditions(const ParametrizedHamiltonian& h,
                                       const ParameterPoint& r,
                                       const std::vector<HermitianOperator>& a,
                                       double hbar, double fd_step = 0.0,
                                       DerivativeMode mode = DerivativeMode::Auto);

/// (1/2M) sum_i Pi_i (sum_k A_k A_k) Pi_i.
HermitianOperator induced_scalar_potential(const ParametrizedHamiltonian& h,
                                           const ParameterPoint& r,
                                           const std::vector<HermitianOperator>& a,
                                           const SlowSector& slow);

/// F_jk = d_j A_k - d_k A_j - c [A_j, A_k], outer derivatives by central
/// differences.
HermitianOperator field_strength(
    const ParametrizedHamiltonian& h, const ParameterPoint& r, int j, int k,
    double hbar, double fd_step = 0.0,
    CommutatorNormalization norm = CommutatorNormalization::InverseHbar);

/// B_i = (1/2) eps_ijk F_jk for a three-parameter model.
std::vector<HermitianOperator> induced_field(
    const ParametrizedHamiltonian& h, const ParameterPoint& r, double hbar,
    double fd_step = 0.0,
    CommutatorNormalization norm = CommutatorNormalization::InverseHbar);

/// Flux of the cluster-projected field tr(Pi_c B.n) / rank through the sphere
/// |R| = radius, midpoint rule on an n_theta x n_phi grid.
double branch_flux_sphere(const ParametrizedHamiltonian& h, std::size_t cluster,
                          double radius, int n_theta, int n_phi, double hbar,
                          CommutatorNormalization norm = CommutatorNormalization::InverseHbar);

/// Field data a slow-sector solver would consume at one grid point.
struct FieldRow {
  ParameterPoint r;
  Eigen::VectorXd eigenvalues;
  std::vector<HermitianOperator> vector_potential;
  HermitianOperator scalar_potential;
  std::vector<double> scalar_per_cluster;  // tr(Pi_i S Pi_i) / rank_i
  double potential;
};

std::vector<FieldRow> effective_hamiltonian_report(const ParametrizedHamiltonian& h,
                                                   const SlowSector& slow,
                                                   const std::vector<ParameterPoint>& grid,
                                                   double hbar);

}  // namespace geophase
