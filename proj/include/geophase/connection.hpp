#pragma once

#include "geophase/geometry.hpp"
#include "geophase/models.hpp"

#include <functional>
#include <vector>

namespace geophase {

/// Eigenvectors of one nondegenerate band along a path, each phase-aligned so
/// its overlap with the previous sample is real and positive. On a closed path
/// the last state is NOT forced back onto the first; the mismatch is the
/// holonomy.
struct SmoothBandFrame {
  int band_index = 0;
  ParamPath path;
  std::vector<StateVector> states;
  std::vector<double> energies;
};

/// Real phase Lambda(R) in radians; states pick up exp(i Lambda(R)).
using GaugeTransform = std::function<double(const ParameterPoint&)>;

/// band indexes eigenvalues in ascending order. Throws DegeneracyOnPath when
/// the band shares its cluster with another eigenvalue at any sample.
SmoothBandFrame band_frame(const ParametrizedHamiltonian& h,
                           const ParamPath& path, int band,
                           double degeneracy_tol = kDefaultDegeneracyTol);

struct SphericalConnection {
  double a_theta;
  double a_phi;
};

/// Monopole-gauge Berry connection of the positive spin-1/2 eigenstate:
/// (0, (cos theta - 1) / 2). Undefined at the poles.
SphericalConnection berry_connection_spin_half(double theta, double phi);

/// Gauge-invariant discrete loop integral of the Berry connection,
/// -arg prod_k <v_k|v_{k+1}> with the closing vector taken to be v_0 itself.
/// Returned in (-pi, pi].
double loop_phase(const SmoothBandFrame& frame);

SmoothBandFrame apply_gauge(const SmoothBandFrame& frame, const GaugeTransform& g);

/// loop_phase of a square of side h centred at `center` in the (k, l)
/// coordinate plane, traversed counterclockwise, divided by h^2.
double berry_curvature_plaquette(const ParametrizedHamiltonian& h, int band,
                                 const ParameterPoint& center, int k, int l,
                                 double side);

/// Sum of plaquette loop phases over a (theta, phi) grid covering the sphere
/// |R| = radius. For a band touching a degeneracy inside the sphere this is
/// 2 pi times a (signed, half-integer-weighted) monopole charge.
double berry_flux_sphere(const ParametrizedHamiltonian& h, int band,
                         double radius, int n_theta, int n_phi);

}  // namespace geophase
