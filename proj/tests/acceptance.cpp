// Acceptance checks. Prints one PASS/FAIL line per criterion; with arguments,
// runs only the named criteria. Exit status is nonzero if any selected check fails.

#include "geophase/adiabatic.hpp"
#include "geophase/bornopp.hpp"
#include "geophase/connection.hpp"
#include "geophase/errors.hpp"
#include "geophase/geometry.hpp"
#include "geophase/holonomy.hpp"
#include "test_support.hpp"

#include <Eigen/Geometry>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace geophase;
using namespace geophase::testing;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  std::string id;
  std::string title;
  std::function<Outcome()> run;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c);
  return buf;
}

ParameterPoint vec3(double x, double y, double z) {
  ParameterPoint r(3);
  r << x, y, z;
  return r;
}

Outcome solid_angle_law() {
  double worst = 0.0, worst_cap = 0.0;
  for (double theta : {kPi / 6.0, kPi / 3.0, kPi / 2.0, 2.0 * kPi / 3.0}) {
    const ParamPath loop = cone_loop(theta, 2000);
    const SpinHalfModel model(1.0);
    const double gamma = loop_phase(band_frame(model, loop, 1));
    const double omega = solid_angle(loop);
    worst = std::max(worst, phase_distance(gamma, -0.5 * omega));
    // Cap oracle, compared mod 4 pi.
    const double cap = 2.0 * kPi * (1.0 - std::cos(theta));
    worst_cap = std::max(worst_cap, 2.0 * phase_distance(0.5 * omega, 0.5 * cap));
  }
  return {worst < 1e-4 && worst_cap < 1e-4,
          fmt("max |gamma + Omega/2| = %.3g, max |Omega - cap| = %.3g", worst, worst_cap)};
}

Outcome adiabatic_theorem() {
  const SpinHalfModel model(1.0);
  const ParamPath loop = cone_loop(kPi / 3.0, 1000);
  const StateVector psi0 = band_frame(model, loop, 1).states.front();
  const std::vector<double> times = {1e2, 1e3};
  const auto rows = adiabatic_sweep(model, loop, 1, psi0, 1.0, times);
  const double s0 = (1.0 - rows[0].fidelity) * 1e4;
  const double s1 = (1.0 - rows[1].fidelity) * 1e6;
  const double ratio = std::max(s0 / s1, s1 / s0);
  const bool pass = rows[0].fidelity >= 1.0 - 1e-2 && rows[1].fidelity >= 1.0 - 1e-4 &&
                    ratio < 3.0;
  return {pass, fmt("1-F = %.3g (T=1e2), %.3g (T=1e3); (1-F)T^2 ratio %.3g",
                    1.0 - rows[0].fidelity, 1.0 - rows[1].fidelity, ratio)};
}

Outcome phase_decomposition_check() {
  const SpinHalfModel model(1.0);
  const ParamPath loop = cone_loop(kPi / 3.0, 2000);
  double err[2];
  for (int dir = 0; dir < 2; ++dir) {
    const ParamPath path = dir == 0 ? loop : loop.reversed();
    const StateVector psi0 = band_frame(model, path, 1).states.front();
    const int steps = default_steps_per_segment(model, path, 1e4, 1.0);
    const auto rep = phase_decomposition(model, EvolutionSchedule(path, 1e4, steps), 1, psi0, 1.0);
    err[dir] = phase_distance(rep.geometric_phase, dir == 0 ? -kPi / 2.0 : kPi / 2.0);
  }
  return {err[0] < 1e-2 && err[1] < 1e-2,
          fmt("|gamma + pi/2| = %.3g, reversed |gamma - pi/2| = %.3g", err[0], err[1])};
}

// Closed loop with a wobbling polar angle, rotated randomly.
ParamPath random_loop(std::size_t m) {
  const double theta0 = uniform(0.3, 2.8);
  const double amp = uniform(0.0, 0.25);
  const int lobes = static_cast<int>(uniform(1.0, 5.0));
  const double radius = uniform(0.5, 2.0);
  const Eigen::Matrix3d rot =
      Eigen::Quaterniond(gaussian(), gaussian(), gaussian(), gaussian()).normalized()
          .toRotationMatrix();
  std::vector<ParameterPoint> pts;
  for (std::size_t k = 0; k < m; ++k) {
    const double phi = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(m);
    const double theta = theta0 + amp * std::sin(lobes * phi);
    pts.push_back(rot * spherical_point(radius, theta, phi));
  }
  pts.push_back(pts.front());
  return ParamPath(std::move(pts), true);
}

Outcome gauge_invariance() {
  const SpinHalfModel model(1.0);
  double worst = 0.0;
  for (int n = 0; n < 100; ++n) {
    const ParamPath loop = random_loop(200);
    const auto frame = band_frame(model, loop, n % 2);
    Eigen::Vector3d kvec[3];
    double amp[3], shift[3];
    for (int j = 0; j < 3; ++j) {
      kvec[j] = Eigen::Vector3d(gaussian(), gaussian(), gaussian()) * 2.0;
      amp[j] = uniform(-5.0, 5.0);
      shift[j] = uniform(0.0, 2.0 * kPi);
    }
    const GaugeTransform lambda = [&](const ParameterPoint& r) {
      double s = 0.0;
      for (int j = 0; j < 3; ++j) s += amp[j] * std::sin(kvec[j].dot(r) + shift[j]);
      return s;
    };
    worst = std::max(worst, phase_distance(loop_phase(apply_gauge(frame, lambda)),
                                           loop_phase(frame)));
  }
  return {worst < 1e-9, fmt("max loop-phase change = %.3g over 100 loops", worst)};
}

Outcome born_oppenheimer_conditions() {
  const SpinHalfModel spin(1.0);
  const QuadrupoleModel quad;
  double spin_res = 0.0, quad_res = 0.0, closed = 0.0;
  const double hbar = 1.0;
  for (int n = 0; n < 100; ++n) {
    const ParameterPoint r = random_point(0.3, 3.0);
    const auto a = induced_vector_potential(spin, r, hbar);
    const auto rs = verify_gauge_conditions(spin, r, a, hbar);
    spin_res = std::max({spin_res, rs.commutator, rs.diagonal});
    const auto rq = verify_gauge_conditions(quad, r, induced_vector_potential(quad, r, hbar), hbar);
    quad_res = std::max({quad_res, rq.commutator, rq.diagonal});

    const double c = hbar / (2.0 * r.squaredNorm());
    const HermitianOperator expected[3] = {c * (r(1) * sigma_z() - r(2) * sigma_y()),
                                           c * (r(2) * sigma_x() - r(0) * sigma_z()),
                                           c * (r(0) * sigma_y() - r(1) * sigma_x())};
    for (int k = 0; k < 3; ++k) {
      closed = std::max(closed, (a[k] - expected[k]).cwiseAbs().maxCoeff());
    }
  }
  return {spin_res < 1e-8 && quad_res < 1e-7 && closed < 1e-8,
          fmt("residual spin %.3g, quadrupole %.3g; max entry vs hbar(R x sigma)/2R^2 %.3g",
              spin_res, quad_res, closed)};
}

// Worst relative error of the branch-projected field against -+hbar R / 2R^3.
double branch_field_error(CommutatorNormalization norm, double hbar) {
  const SpinHalfModel spin(1.0);
  double worst = 0.0;
  for (int n = 0; n < 20; ++n) {
    const ParameterPoint r = random_point(0.5, 2.0);
    const auto b = induced_field(spin, r, hbar, 0.0, norm);
    const auto set = projectors_at(spin, r);
    for (int c = 0; c < 2; ++c) {
      // Lower branch (c = 0) carries +hbar R / 2R^3, upper branch the opposite.
      const double sign = c == 0 ? 1.0 : -1.0;
      const Eigen::Vector3d expected = sign * hbar * r / (2.0 * std::pow(r.norm(), 3));
      Eigen::Vector3d got;
      for (int k = 0; k < 3; ++k) got(k) = (set.projectors[c] * b[k]).trace().real();
      worst = std::max(worst, (got - expected).norm() / expected.norm());
    }
  }
  return worst;
}

Outcome monopole_field() {
  const double hbar = 0.7;  // hbar != 1 separates the two normalizations
  const double err_inv = branch_field_error(CommutatorNormalization::InverseHbar, hbar);
  const double err_lit = branch_field_error(CommutatorNormalization::Literal, hbar);
  const bool inverse_selected = err_inv < 1e-5 && !(err_lit < 1e-5);
  const auto norm = err_inv <= err_lit ? CommutatorNormalization::InverseHbar
                                       : CommutatorNormalization::Literal;
  const double lower = branch_flux_sphere(SpinHalfModel(1.0), 0, 1.0, 40, 80, hbar, norm);
  const double upper = branch_flux_sphere(SpinHalfModel(1.0), 1, 1.0, 40, 80, hbar, norm);
  const double target = 2.0 * kPi * hbar;
  const double flux_err = std::max(std::abs(lower - target), std::abs(upper + target)) / target;
  std::ostringstream os;
  os << fmt("branch B rel. error %.3g (-i/hbar) vs %.3g (literal -i); ", err_inv, err_lit)
     << fmt("flux rel. error %.3g; selected ", flux_err)
     << (norm == CommutatorNormalization::InverseHbar ? "-i/hbar" : "-i");
  return {inverse_selected && err_inv < 1e-5 && flux_err < 1e-2, os.str()};
}

Outcome non_abelian_holonomy() {
  const QuadrupoleModel quad;
  const double theta = kPi / 3.0;
  const auto coarse = wilczek_zee_holonomy(quad, cone_loop(theta, 4000), 0);
  const auto fine = wilczek_zee_holonomy(quad, cone_loop(theta, 8000), 0);
  double unitarity = 0.0;
  for (const auto* u : {&coarse, &fine}) {
    unitarity = std::max(unitarity,
                         (u->u.adjoint() * u->u - ComplexMatrix::Identity(2, 2)).norm());
  }
  const double convergence = std::abs(wilson_loop(coarse) - wilson_loop(fine));

  const ParamPath loop = random_loop(400);
  const DegenerateBandFrame frame = degenerate_band_frame(quad, loop, 1);
  const Complex w0 = wilson_loop(wilczek_zee_holonomy(frame));
  double gauge = 0.0;
  for (int run = 0; run < 50; ++run) {
    DegenerateBandFrame regauged = frame;
    for (std::size_t k = 1; k + 1 < regauged.frames.size(); ++k) {
      regauged.frames[k] = regauged.frames[k] * random_unitary(2);
    }
    const auto u = wilczek_zee_holonomy(regauged);
    gauge = std::max(gauge, std::abs(wilson_loop(u) - w0));
    unitarity = std::max(unitarity, (u.u.adjoint() * u.u - ComplexMatrix::Identity(2, 2)).norm());
  }

  const SpinHalfModel spin(1.0);
  double abelian = 0.0;
  for (int n = 0; n < 10; ++n) {
    const ParamPath l = random_loop(500);
    const double lp = loop_phase(band_frame(spin, l, 1));
    const auto u = wilczek_zee_holonomy(spin, l, 1);
    abelian = std::max(abelian, phase_distance(std::arg(u.u(0, 0)), lp));
  }
  std::ostringstream os;
  os << fmt("unitarity %.3g, Wilson-loop regauge %.3g, ", unitarity, gauge)
     << fmt("|tr U(4000) - tr U(8000)| %.3g, abelian vs loop_phase %.3g", convergence, abelian);
  return {unitarity < 1e-8 && gauge < 1e-8 && convergence < 1e-4 && abelian < 1e-6, os.str()};
}

Outcome aharonov_anandan() {
  const HermitianOperator hz = sigma_z();
  const Protocol precession = [hz](double) { return hz; };
  double worst = 0.0;
  for (double theta : {kPi / 6.0, kPi / 3.0, kPi / 2.0}) {
    // One precession period of H = sigma_z with hbar = 1.
    const auto rep = aa_phase(precession, kPi, spin_half_eigenstate(theta, 0.0), 1.0, 20000);
    worst = std::max(worst, phase_distance(rep.geometric_phase, -kPi * (1.0 - std::cos(theta))));
  }
  const SpinHalfModel model(1.0);
  const ParamPath loop = cone_loop(kPi / 3.0, 1000);
  const double t = 1e4;
  const StateVector psi0 = band_frame(model, loop, 1).states.front();
  const int per_seg = default_steps_per_segment(model, loop, t, 1.0);
  const auto adiabatic = phase_decomposition(model, EvolutionSchedule(loop, t, per_seg), 1, psi0, 1.0);
  const auto aa = aa_phase(schedule_protocol(model, loop, t), t, psi0, 1.0,
                           per_seg * static_cast<int>(loop.segments()));
  const double agree = phase_distance(aa.geometric_phase, adiabatic.geometric_phase);
  return {worst < 1e-4 && agree < 2e-2,
          fmt("precession max error %.3g; adiabatic protocol |aa - decomposition| %.3g", worst,
              agree)};
}

Outcome pancharatnam_triangle() {
  const StateVector z = spin_half_eigenstate(0.0, 0.0);
  const StateVector x = spin_half_eigenstate(kPi / 2.0, 0.0);
  const StateVector y = spin_half_eigenstate(kPi / 2.0, kPi / 2.0);
  const double chain = pancharatnam_chain({z, x, y, z}, true);
  // Exact: <z|x><x|y><y|z> = (1 + i) / 4.
  const double err = std::abs(chain - kPi / 4.0);
  return {err < 1e-12, fmt("z->x->y->z chain = %.17g, target +pi/4 = %.17g", chain, kPi / 4.0)};
}

Outcome pancharatnam_refinement() {
  const SpinHalfModel model(1.0);
  double worst = 0.0;
  for (double theta : {kPi / 6.0, kPi / 3.0, 2.0 * kPi / 3.0}) {
    const auto frame = band_frame(model, cone_loop(theta, 2000), 1);
    worst = std::max(worst, phase_distance(pancharatnam_chain(frame.states, true), loop_phase(frame)));
  }
  const auto frame = band_frame(model, random_loop(2000), 0);
  worst = std::max(worst, phase_distance(pancharatnam_chain(frame.states, true), loop_phase(frame)));
  return {worst < 1e-4, fmt("max |chain - loop_phase| at 2000 links = %.3g", worst)};
}

Outcome chern_count() {
  const SpinHalfModel model(1.0);
  const double flux = berry_flux_sphere(model, 1, 1.0, 40, 80);
  return {std::abs(flux + 2.0 * kPi) < 1e-2, fmt("upper-band plaquette flux = %.9f", flux)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {"1", "solid-angle law", solid_angle_law},
      {"2", "adiabatic theorem", adiabatic_theorem},
      {"3", "phase decomposition", phase_decomposition_check},
      {"4", "gauge invariance", gauge_invariance},
      {"5", "Born-Oppenheimer gauge conditions", born_oppenheimer_conditions},
      {"6", "monopole field", monopole_field},
      {"7", "non-abelian holonomy", non_abelian_holonomy},
      {"8", "Aharonov-Anandan phase", aharonov_anandan},
      {"9a", "Pancharatnam z->x->y->z = +pi/4", pancharatnam_triangle},
      {"9b", "Pancharatnam refinement to loop_phase", pancharatnam_refinement},
      {"10", "Chern-type count", chern_count},
  };

  std::vector<std::string> selected(argv + 1, argv + argc);
  int failures = 0, ran = 0;
  for (const auto& c : criteria) {
    if (!selected.empty()) {
      bool wanted = false;
      for (const auto& s : selected) wanted = wanted || s == c.id;
      if (!wanted) continue;
    }
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("threw: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  criterion %-3s %-40s %s (%.1fs)\n", out.pass ? "PASS" : "FAIL",
                c.id.c_str(), c.title.c_str(), out.detail.c_str(), secs);
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criterion matched\n");
    return 2;
  }
  std::printf("%d/%d criteria passed\n", ran - failures, ran);
  return failures == 0 ? 0 : 1;
}
