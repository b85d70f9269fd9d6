#include "geophase/adiabatic.hpp"

#include "geophase/errors.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>

namespace geophase {

namespace {

constexpr double kMaxStepDrift = 1e-6;

std::vector<double> to_std(const ParameterPoint& r) {
  return {r.data(), r.data() + r.size()};
}

// One RK4 step of dpsi/dt = -i/hbar (h0 + s(t) dh) psi with s linear in t.
struct LinearStepper {
  const HermitianOperator& h0;
  const HermitianOperator& dh;
  double rate;  // ds/dt
  Complex coeff;  // -i / hbar

  StateVector deriv(const StateVector& psi, double s) const {
    return coeff * (h0 * psi + s * (dh * psi));
  }

  void step(StateVector& psi, double s, double dt) const {
    const double ds = rate * dt;
    const StateVector k1 = deriv(psi, s);
    const StateVector k2 = deriv(psi + 0.5 * dt * k1, s + 0.5 * ds);
    const StateVector k3 = deriv(psi + 0.5 * dt * k2, s + 0.5 * ds);
    const StateVector k4 = deriv(psi + dt * k3, s + ds);
    psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
};

double renormalize(StateVector& psi) {
  const double n = psi.norm();
  psi /= n;
  return std::abs(n - 1.0);
}

StateVector checked_state(const StateVector& psi0, int dim) {
  if (psi0.size() != dim) {
    throw Error(ErrorKind::DimensionMismatch,
                "initial state has dimension " + std::to_string(psi0.size()) +
                    ", Hamiltonian " + std::to_string(dim));
  }
  return normalized(psi0);
}

}  // namespace

double simpson(std::span<const double> f, double spacing) {
  const std::size_t n = f.size();
  if (n < 2) return 0.0;
  const std::size_t intervals = n - 1;
  if (intervals == 1) return 0.5 * spacing * (f[0] + f[1]);
  std::size_t even = intervals % 2 == 0 ? intervals : intervals - 3;
  double sum = 0.0;
  if (even > 0) {
    double acc = f[0] + f[even];
    for (std::size_t k = 1; k < even; ++k) acc += (k % 2 == 1 ? 4.0 : 2.0) * f[k];
    sum += acc * spacing / 3.0;
  }
  if (even != intervals) {
    const std::size_t s = even;
    sum += 3.0 * spacing / 8.0 * (f[s] + 3.0 * f[s + 1] + 3.0 * f[s + 2] + f[s + 3]);
  }
  return sum;
}

int default_steps_per_segment(const ParametrizedHamiltonian& h,
                              const ParamPath& path, double total_time,
                              double hbar) {
  double hmax = 0.0;
  for (const auto& r : path.samples()) hmax = std::max(hmax, operator_norm(h.eval(r)));
  const double m = static_cast<double>(path.segments());
  const double steps = std::ceil(200.0 * total_time * hmax / (hbar * m));
  return static_cast<int>(std::max(20.0, std::min(steps, 1e9)));
}

IntegrationResult integrate_schedule(const ParametrizedHamiltonian& h,
                                     const EvolutionSchedule& sched,
                                     const StateVector& psi0, double hbar) {
  if (!(hbar > 0.0)) throw Error(ErrorKind::DomainError, "hbar must be positive");
  if (sched.path.dim() != h.param_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "schedule path and model dimensions differ");
  }
  const auto& pts = sched.path.samples();
  const std::size_t m = sched.path.segments();
  const double seg_time = sched.total_time / static_cast<double>(m);
  const int n = sched.steps_per_segment;
  const double dt = seg_time / n;
  const Complex coeff(0.0, -1.0 / hbar);

  IntegrationResult out;
  StateVector psi = checked_state(psi0, h.hilbert_dim());
  out.trace.reserve(m + 1);
  out.trace.push_back({0.0, psi});

  HermitianOperator h_start = h.eval(pts[0]);
  for (std::size_t k = 0; k < m; ++k) {
    HermitianOperator h_end = h.eval(pts[k + 1]);
    const HermitianOperator dh = h_end - h_start;
    const LinearStepper stepper{h_start, dh, 1.0 / seg_time, coeff};
    for (int j = 0; j < n; ++j) {
      stepper.step(psi, static_cast<double>(j) / n, dt);
      const double drift = renormalize(psi);
      out.max_drift = std::max(out.max_drift, drift);
      if (drift > kMaxStepDrift) {
        throw Error(ErrorKind::StepTooLarge,
                    "single-step norm drift " + std::to_string(drift) +
                        "; increase steps_per_segment",
                    to_std(pts[k]));
      }
    }
    out.trace.push_back({seg_time * static_cast<double>(k + 1), psi});
    h_start = std::move(h_end);
  }
  out.psi_final = psi;
  return out;
}

PhaseReport phase_decomposition(const ParametrizedHamiltonian& h,
                                const EvolutionSchedule& sched, int band,
                                const StateVector& psi0, double hbar) {
  const SmoothBandFrame frame = band_frame(h, sched.path, band);
  const StateVector start = checked_state(psi0, h.hilbert_dim());
  const Complex start_ov = frame.states.front().dot(start);
  if (std::abs(start_ov) < 1.0 - 1e-9) {
    throw Error(ErrorKind::NotOnBand,
                "initial state overlap with band " + std::to_string(band) +
                    " is " + std::to_string(std::abs(start_ov)),
                to_std(sched.path[0]));
  }

  // Energies at samples and at segment midpoints of the interpolated H, so
  // the quadrature sees the same Hamiltonian the integrator does.
  const auto& pts = sched.path.samples();
  const std::size_t m = sched.path.segments();
  std::vector<double> energies;
  energies.reserve(2 * m + 1);
  energies.push_back(frame.energies.front());
  for (std::size_t k = 0; k < m; ++k) {
    const HermitianOperator mid = 0.5 * (h.eval(pts[k]) + h.eval(pts[k + 1]));
    const auto dec = eigh(mid);
    if (dec.clusters[dec.cluster_of(band)].size != 1) {
      throw Error(ErrorKind::DegeneracyOnPath, "band degenerate between samples",
                  to_std(0.5 * (pts[k] + pts[k + 1])));
    }
    energies.push_back(dec.eigenvalues(band));
    energies.push_back(frame.energies[k + 1]);
  }
  const double spacing = sched.total_time / static_cast<double>(2 * m);

  const IntegrationResult run = integrate_schedule(h, sched, start, hbar);
  const StateVector& ref = sched.path.closed() ? frame.states.front() : frame.states.back();
  const Complex end_ov = ref.dot(run.psi_final);

  PhaseReport rep;
  rep.total_phase = wrap_phase(std::arg(end_ov) - std::arg(start_ov));
  rep.dynamical_phase = wrap_phase(-simpson(energies, spacing) / hbar);
  rep.geometric_phase = wrap_phase(rep.total_phase - rep.dynamical_phase);
  rep.fidelity = std::norm(end_ov);
  rep.cyclicity = std::abs(start.dot(run.psi_final));
  return rep;
}

std::vector<SweepRow> adiabatic_sweep(const ParametrizedHamiltonian& h,
                                      const ParamPath& path, int band,
                                      const StateVector& psi0, double hbar,
                                      std::span<const double> total_times,
                                      int steps_per_segment) {
  if (total_times.empty()) {
    throw Error(ErrorKind::DomainError, "sweep needs at least one total time");
  }
  for (double t : total_times) {
    if (!(t > 0.0)) throw Error(ErrorKind::DomainError, "sweep times must be positive");
  }
  const double reference = loop_phase(band_frame(h, path, band));

  std::vector<std::future<SweepRow>> jobs;
  for (double t : total_times) {
    jobs.push_back(std::async(std::launch::async, [&, t] {
      const int steps = steps_per_segment > 0
                            ? steps_per_segment
                            : default_steps_per_segment(h, path, t, hbar);
      const auto rep =
          phase_decomposition(h, EvolutionSchedule(path, t, steps), band, psi0, hbar);
      return SweepRow{t, rep.fidelity, rep.geometric_phase,
                      std::abs(wrap_phase(rep.geometric_phase - reference))};
    }));
  }
  std::vector<SweepRow> rows;
  rows.reserve(jobs.size());
  for (auto& j : jobs) rows.push_back(j.get());
  return rows;
}

PhaseReport aa_phase(const Protocol& protocol, double total_time,
                     const StateVector& psi0, double hbar, int steps) {
  if (!(hbar > 0.0)) throw Error(ErrorKind::DomainError, "hbar must be positive");
  if (!(total_time > 0.0)) throw Error(ErrorKind::DomainError, "total time must be positive");
  if (steps < 1) throw Error(ErrorKind::DomainError, "steps must be >= 1");

  HermitianOperator h_now = protocol(0.0);
  const StateVector start = checked_state(psi0, static_cast<int>(h_now.rows()));
  StateVector psi = start;
  const double dt = total_time / steps;
  const Complex coeff(0.0, -1.0 / hbar);

  std::vector<double> expectation;
  expectation.reserve(static_cast<std::size_t>(steps) + 1);
  expectation.push_back(psi.dot(h_now * psi).real());

  for (int j = 0; j < steps; ++j) {
    const double t = j * dt;
    const HermitianOperator h_mid = protocol(t + 0.5 * dt);
    HermitianOperator h_next = protocol(t + dt);
    const StateVector k1 = coeff * (h_now * psi);
    const StateVector k2 = coeff * (h_mid * (psi + 0.5 * dt * k1));
    const StateVector k3 = coeff * (h_mid * (psi + 0.5 * dt * k2));
    const StateVector k4 = coeff * (h_next * (psi + dt * k3));
    psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double drift = renormalize(psi);
    if (drift > kMaxStepDrift) {
      throw Error(ErrorKind::StepTooLarge,
                  "single-step norm drift " + std::to_string(drift) + " at t = " +
                      std::to_string(t));
    }
    expectation.push_back(psi.dot(h_next * psi).real());
    h_now = std::move(h_next);
  }

  const Complex ov = start.dot(psi);
  PhaseReport rep;
  rep.cyclicity = std::abs(ov);
  if (!(rep.cyclicity > 1.0 - 1e-6)) {
    throw Error(ErrorKind::NotCyclic,
                "evolution is not cyclic: 1 - |<psi(T)|psi(0)>| = " +
                    std::to_string(1.0 - rep.cyclicity));
  }
  rep.total_phase = wrap_phase(std::arg(ov));
  rep.dynamical_phase = wrap_phase(-simpson(expectation, dt) / hbar);
  rep.geometric_phase = wrap_phase(rep.total_phase - rep.dynamical_phase);
  rep.fidelity = std::norm(ov);
  return rep;
}

Protocol schedule_protocol(const ParametrizedHamiltonian& h, const ParamPath& path,
                           double total_time) {
  if (!(total_time > 0.0)) throw Error(ErrorKind::DomainError, "total time must be positive");
  std::vector<HermitianOperator> samples;
  samples.reserve(path.samples().size());
  for (const auto& r : path.samples()) samples.push_back(h.eval(r));
  const double m = static_cast<double>(path.segments());
  return [samples = std::move(samples), m, total_time](double t) {
    const double s = std::clamp(t / total_time, 0.0, 1.0) * m;
    const auto k = std::min(static_cast<std::size_t>(s), samples.size() - 2);
    const double frac = s - static_cast<double>(k);
    return HermitianOperator(samples[k] + frac * (samples[k + 1] - samples[k]));
  };
}

}  // namespace geophase
