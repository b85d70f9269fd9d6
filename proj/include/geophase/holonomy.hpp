#pragma once

#include "geophase/geometry.hpp"
#include "geophase/models.hpp"

#include <vector>

namespace geophase {

/// Orthonormal basis (d x k) of one eigenvalue cluster at each path sample.
struct DegenerateBandFrame {
  std::size_t band_cluster = 0;
  ParamPath path;
  std::vector<ComplexMatrix> frames;

  Eigen::Index rank() const { return frames.front().cols(); }
};

/// k x k unitary describing how a degenerate level's states mix after a loop.
/// Depends on the basis chosen at the loop's base point: under a change g of
/// that basis it transforms to g^dagger U g, so only its trace and spectrum
/// are physical.
struct HolonomyMatrix {
  ComplexMatrix u;
};

DegenerateBandFrame degenerate_band_frame(const ParametrizedHamiltonian& h,
                                          const ParamPath& path, std::size_t cluster,
                                          double degeneracy_tol = kDefaultDegeneracyTol);

/// Nearest unitary in Frobenius norm (polar factor via SVD). Throws
/// RankDeficientOverlap when the smallest singular value is below 1e-10.
ComplexMatrix unitarize(const ComplexMatrix& overlap_matrix);

/// Discrete parallel transport around a closed loop. With link overlaps
/// (O_k)_mn = <e_k^m|e_{k+1}^n> (the last link closing onto the first frame
/// itself) and W_k = unitarize(O_k), returns U = (W_0 W_1 ... W_{M-1})^dagger:
/// the matrix taking initial-frame coefficients to the transported ones.
/// For a single state this is exp(i gamma) with gamma the Berry phase.
HolonomyMatrix wilczek_zee_holonomy(const DegenerateBandFrame& frame);

HolonomyMatrix wilczek_zee_holonomy(const ParametrizedHamiltonian& h,
                                    const ParamPath& loop, std::size_t cluster);

Complex wilson_loop(const HolonomyMatrix& u);

/// Eigenphases of U in (-pi, pi], ascending.
std::vector<double> holonomy_phases(const HolonomyMatrix& u);

/// Phase picked up by the component that survives successive projections
/// onto states[1], states[2], ...: arg prod_k <psi_{k+1}|psi_k>. A closed chain
/// repeats its first state at the end and then measures the geometric
/// (Pancharatnam) phase; projections are instantaneous, so there is no
/// dynamical part.
double pancharatnam_chain(const std::vector<StateVector>& states, bool closed);

}  // namespace geophase
