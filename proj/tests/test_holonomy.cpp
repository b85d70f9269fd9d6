#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "geophase/connection.hpp"
#include "geophase/errors.hpp"
#include "geophase/holonomy.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace geophase;
using namespace geophase::testing;

namespace {

double unitarity_error(const ComplexMatrix& u) {
  return (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).norm();
}

// Wilson loop of the (R.J)^2 cluster {m, -m} around a cone of half-angle theta,
// from parallel transport in the frame rotating with R:
// U ~ -exp(2 pi i K), K = (cos(theta) J_z + sin(theta) J_x) restricted to the
// cluster, the -1 from exp(-2 pi i J_z) on half-integer spin.
double quadrupole_trace_oracle(int cluster, double theta) {
  if (cluster == 0) {
    // m = +-1/2 block: [[c/2, s], [s, -c/2]], <1/2|J_x|-1/2> = 1.
    const double lambda = std::sqrt(0.25 * std::cos(theta) * std::cos(theta) +
                                    std::sin(theta) * std::sin(theta));
    return -2.0 * std::cos(2.0 * kPi * lambda);
  }
  // m = +-3/2 block: J_x does not connect +3/2 and -3/2.
  return -2.0 * std::cos(3.0 * kPi * std::cos(theta));
}

}  // namespace

TEST_CASE("unitarize returns the polar factor") {
  for (int n = 0; n < 20; ++n) {
    const ComplexMatrix u = random_unitary(3);
    const HermitianOperator p = random_hermitian(3);
    // u * (positive definite) has polar factor u.
    const ComplexMatrix pos = p * p + 0.5 * ComplexMatrix::Identity(3, 3);
    CHECK((unitarize(u * pos) - u).norm() < 1e-10);
  }
  ComplexMatrix singular = ComplexMatrix::Zero(2, 2);
  singular(0, 0) = 1.0;
  try {
    unitarize(singular);
    FAIL("expected RankDeficientOverlap");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RankDeficientOverlap);
  }
}

TEST_CASE("abelian holonomy is exp(i gamma)") {
  const SpinHalfModel model(1.0);
  const ParamPath loop = cone_loop(kPi / 3.0, 2000);
  const auto u = wilczek_zee_holonomy(model, loop, 1);
  REQUIRE(u.u.rows() == 1);
  CHECK(std::abs(u.u(0, 0) - std::polar(1.0, -kPi / 2.0)) < 1e-5);
  for (int n = 0; n < 10; ++n) {
    const ParamPath cone = cone_loop(uniform(0.2, 2.8), 500);
    const double lp = loop_phase(band_frame(model, cone, 0));
    const auto w = wilczek_zee_holonomy(model, cone, 0);
    CHECK(phase_distance(std::arg(w.u(0, 0)), lp) < 1e-6);
  }
}

TEST_CASE("point loop has trivial holonomy") {
  const QuadrupoleModel quad;
  const auto u = wilczek_zee_holonomy(quad, standard_loop(LoopKind::Point, 8), 0);
  CHECK((u.u - ComplexMatrix::Identity(2, 2)).norm() < 1e-12);
  CHECK(std::abs(wilson_loop(u) - Complex(2.0, 0.0)) < 1e-12);
}

TEST_CASE("quadrupole holonomy matches the rotating-frame trace") {
  const QuadrupoleModel quad;
  for (double theta : {kPi / 6.0, kPi / 3.0, 0.4 * kPi}) {
    const ParamPath loop = cone_loop(theta, 4000);
    for (int cluster : {0, 1}) {
      const auto u = wilczek_zee_holonomy(quad, loop, cluster);
      REQUIRE(u.u.rows() == 2);
      CHECK(unitarity_error(u.u) < 1e-8);
      const Complex w = wilson_loop(u);
      CHECK(std::abs(w.real() - quadrupole_trace_oracle(cluster, theta)) < 1e-4);
      CHECK(std::abs(w.imag()) < 1e-4);
    }
  }
}

TEST_CASE("quadrupole holonomy self-converges and stays unitary") {
  const QuadrupoleModel quad;
  const double theta = kPi / 3.0;
  const auto coarse = wilczek_zee_holonomy(quad, cone_loop(theta, 4000), 0);
  const auto fine = wilczek_zee_holonomy(quad, cone_loop(theta, 8000), 0);
  CHECK(std::abs(wilson_loop(coarse) - wilson_loop(fine)) < 1e-4);
  CHECK(unitarity_error(fine.u) < 1e-8);
  const auto phases = holonomy_phases(fine);
  REQUIRE(phases.size() == 2);
  CHECK(phases[0] <= phases[1]);
}

TEST_CASE("holonomy is gauge covariant") {
  const QuadrupoleModel quad;
  const ParamPath loop = cone_loop(1.1, 300);
  const DegenerateBandFrame frame = degenerate_band_frame(quad, loop, 0);
  const auto base = wilczek_zee_holonomy(frame);
  const Complex w0 = wilson_loop(base);
  for (int run = 0; run < 50; ++run) {
    DegenerateBandFrame regauged = frame;
    for (std::size_t k = 1; k + 1 < regauged.frames.size(); ++k) {
      regauged.frames[k] = regauged.frames[k] * random_unitary(2);
    }
    const auto u = wilczek_zee_holonomy(regauged);
    CHECK((u.u - base.u).norm() < 1e-8);

    // A base-point change conjugates U and keeps the trace.
    const ComplexMatrix g = random_unitary(2);
    regauged.frames.front() = frame.frames.front() * g;
    regauged.frames.back() = frame.frames.back() * g;
    const auto ug = wilczek_zee_holonomy(regauged);
    CHECK(std::abs(wilson_loop(ug) - w0) < 1e-8);
    CHECK((ug.u - g.adjoint() * base.u * g).norm() < 1e-8);
  }
}

TEST_CASE("holonomy errors") {
  const QuadrupoleModel quad;
  const ParamPath open(std::vector<ParameterPoint>{spherical_point(1, 0.3, 0.0),
                                                   spherical_point(1, 0.3, 1.0)},
                       false);
  CHECK_THROWS_AS(wilczek_zee_holonomy(quad, open, 0), Error);
  CHECK_THROWS_AS(wilczek_zee_holonomy(quad, cone_loop(0.5, 20), 2), Error);

  // A loop through the origin changes the cluster structure.
  std::vector<ParameterPoint> pts;
  for (double x : {1.0, 0.0, -1.0}) pts.push_back(spherical_point(1.0, 0.0, 0.0) * x);
  pts.push_back(pts.front());
  try {
    degenerate_band_frame(SpinHalfModel(1.0), ParamPath(pts, true), 0);
    FAIL("expected DegeneracyOnPath");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegeneracyOnPath);
  }
}

TEST_CASE("Pancharatnam chain z -> x -> y -> z") {
  const StateVector z = spin_half_eigenstate(0.0, 0.0);
  const StateVector x = spin_half_eigenstate(kPi / 2.0, 0.0);
  const StateVector y = spin_half_eigenstate(kPi / 2.0, kPi / 2.0);
  // Exact overlaps: <x|z> = <y|x> = <z|y> = 1/sqrt2 up to phases 1, e^{-i pi/4}, 1.
  const double chain = pancharatnam_chain({z, x, y, z}, true);
  CHECK(std::abs(chain - (-kPi / 4.0)) < 1e-12);
  // Filtering the other way round gives the opposite sign.
  CHECK(std::abs(pancharatnam_chain({z, y, x, z}, true) - kPi / 4.0) < 1e-12);
  // Identity chain.
  CHECK(std::abs(pancharatnam_chain({z, z, z}, true)) < 1e-15);
  // Insensitive to the phases of the individual states.
  const double shifted = pancharatnam_chain(
      {std::polar(1.0, 0.3) * z, std::polar(1.0, -1.2) * x, std::polar(1.0, 2.0) * y, z}, true);
  CHECK(std::abs(shifted - chain) < 1e-12);
}

TEST_CASE("Pancharatnam chain errors") {
  const StateVector up = spin_half_eigenstate(0.0, 0.0);
  const StateVector down = spin_half_eigenstate(kPi, 0.0);
  const StateVector x = spin_half_eigenstate(kPi / 2.0, 0.0);
  try {
    pancharatnam_chain({up, down, up}, true);
    FAIL("expected ZeroOverlap");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroOverlap);
  }
  try {
    pancharatnam_chain({up, x}, true);
    FAIL("expected NotClosed");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotClosed);
  }
  CHECK_THROWS_AS(pancharatnam_chain({up}, false), Error);
  CHECK(std::abs(pancharatnam_chain({up, x}, false)) < 1e-15);
}

TEST_CASE("refined eigenstate chains converge to the loop phase") {
  const SpinHalfModel model(1.0);
  for (double theta : {kPi / 6.0, kPi / 3.0, 2.0 * kPi / 3.0}) {
    const ParamPath loop = cone_loop(theta, 2000);
    const auto frame = band_frame(model, loop, 1);
    const double expected = -kPi * (1.0 - std::cos(theta));
    CHECK(phase_distance(pancharatnam_chain(frame.states, true), loop_phase(frame)) < 1e-12);
    CHECK(phase_distance(pancharatnam_chain(frame.states, true), expected) < 1e-4);
  }
}
