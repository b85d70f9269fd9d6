#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <vector>

namespace geophase {

using Complex = std::complex<double>;
using StateVector = Eigen::VectorXcd;
using HermitianOperator = Eigen::MatrixXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using ParameterPoint = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDefaultDegeneracyTol = 1e-8;

/// Contiguous run of eigenvalue indices treated as one (possibly degenerate)
/// level.
struct Cluster {
  Eigen::Index first = 0;
  Eigen::Index size = 0;
  double mean_energy = 0.0;
};

struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;   // ascending
  ComplexMatrix eigenvectors;    // column k belongs to eigenvalues(k)
  std::vector<Cluster> clusters; // ascending in energy, covering all indices
  double scale = 1.0;            // max(1, |H|) used for the gap threshold

  Eigen::Index dim() const { return eigenvalues.size(); }
  std::size_t cluster_of(Eigen::Index eigen_index) const;
  /// d x k orthonormal basis of the cluster's eigenspace.
  ComplexMatrix cluster_basis(std::size_t cluster) const;
  std::vector<Eigen::Index> cluster_ranks() const;
};

/// max_ij |M_ij - conj(M_ji)|
double hermiticity_error(const ComplexMatrix& m);

/// Spectral norm of a Hermitian matrix (largest |eigenvalue|).
double operator_norm(const HermitianOperator& h);

/// Dense Hermitian eigensolve. Eigenvalues whose consecutive gaps fall below
/// degeneracy_tol * max(1, |H|) are chained into one cluster. Throws
/// NonHermitianInput when |H - H^dagger| exceeds 1e-12 * max(1, |H|).
SpectralDecomposition eigh(const HermitianOperator& h,
                           double degeneracy_tol = kDefaultDegeneracyTol);

/// <a|b>, conjugate-linear in a.
Complex overlap(const StateVector& a, const StateVector& b);

HermitianOperator projector_from_cluster(const SpectralDecomposition& dec,
                                         std::size_t cluster);

/// Unit-norm copy; throws DomainError for the zero vector.
StateVector normalized(const StateVector& v);

/// Maps an angle onto (-pi, pi].
double wrap_phase(double angle);

/// Pauli matrices.
HermitianOperator sigma_x();
HermitianOperator sigma_y();
HermitianOperator sigma_z();

}  // namespace geophase
