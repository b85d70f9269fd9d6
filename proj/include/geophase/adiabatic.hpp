#pragma once

#include "geophase/connection.hpp"
#include "geophase/geometry.hpp"
#include "geophase/models.hpp"

#include <functional>
#include <span>
#include <vector>

namespace geophase {

/// Phases reported in (-pi, pi]; geometric = total - dynamical (mod 2 pi).
struct PhaseReport {
  double total_phase = 0.0;
  double dynamical_phase = 0.0;
  double geometric_phase = 0.0;
  double fidelity = 0.0;
  double cyclicity = 0.0;
};

struct TracePoint {
  double t;
  StateVector state;
};

struct IntegrationResult {
  StateVector psi_final;
  std::vector<TracePoint> trace;  // one entry per path sample
  double max_drift = 0.0;         // largest single-step |norm - 1| before renormalizing
};

/// Time-dependent Hamiltonian H(t).
using Protocol = std::function<HermitianOperator(double)>;

/// max(20, ceil(200 * T * |H|_max / (hbar * M))): keeps |H| dt / hbar <= 0.005.
int default_steps_per_segment(const ParametrizedHamiltonian& h,
                              const ParamPath& path, double total_time,
                              double hbar);

/// Classical RK4 for i hbar dpsi/dt = H(t) psi, with H interpolated linearly
/// in time between consecutive path samples (each segment lasts T / M).
/// Renormalizes after each step; throws StepTooLarge if a step moves the norm
/// by more than 1e-6.
IntegrationResult integrate_schedule(const ParametrizedHamiltonian& h,
                                     const EvolutionSchedule& sched,
                                     const StateVector& psi0, double hbar);

/// Splits the phase acquired along the schedule into -(1/hbar) int E dt and
/// the remainder. psi0 must lie on `band` at the first sample.
PhaseReport phase_decomposition(const ParametrizedHamiltonian& h,
                                const EvolutionSchedule& sched, int band,
                                const StateVector& psi0, double hbar);

struct SweepRow {
  double total_time;
  double fidelity;
  double geometric_phase;
  double geometric_phase_error;  // |wrap(geometric - loop_phase)|
};

/// One phase_decomposition per total time over the same closed path.
/// steps_per_segment <= 0 selects the default for each T.
std::vector<SweepRow> adiabatic_sweep(const ParametrizedHamiltonian& h,
                                      const ParamPath& path, int band,
                                      const StateVector& psi0, double hbar,
                                      std::span<const double> total_times,
                                      int steps_per_segment = 0);

/// Aharonov-Anandan phase of a cyclic evolution under H(t), t in [0, T].
/// Throws NotCyclic unless |<psi(T)|psi(0)>| > 1 - 1e-6.
PhaseReport aa_phase(const Protocol& protocol, double total_time,
                     const StateVector& psi0, double hbar, int steps);

/// The piecewise-linear H(t) that integrate_schedule follows.
Protocol schedule_protocol(const ParametrizedHamiltonian& h, const ParamPath& path,
                           double total_time);

/// Composite Simpson over equally spaced samples; an odd interval count ends
/// with a 3/8-rule panel, a single interval falls back to the trapezoid.
double simpson(std::span<const double> f, double spacing);

}  // namespace geophase
