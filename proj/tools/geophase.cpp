#include "geophase/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>

namespace {

constexpr const char* kColumns = R"(CSV columns per command:
  loop-phase    M,geometric_phase[,solid_angle]
  adiabatic     T,fidelity,geometric_phase,geometric_phase_error        (T_list sweep)
                T,total_phase,dynamical_phase,geometric_phase,fidelity,cyclicity  (single T)
  aa-phase      T,total_phase,dynamical_phase,geometric_phase,fidelity,cyclicity
  bo-fields     R0..,E0..,A<k>_<r><c>_re,A<k>_<r><c>_im..,S_<r><c>_re,S_<r><c>_im..,scalar_c<i>..,V
  holonomy      eigenphase (one row per eigenvalue of U)
  pancharatnam  phase
Angles in radians. Exit codes: 0 success, 1 computation error, 2 invalid config.)";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometric phases of parameterized quantum systems"};
  app.footer(kColumns);
  app.require_subcommand(1);

  std::string config;
  std::string out_dir = ".";
  geophase::ScenarioOverrides ov;
  std::size_t m = 0;
  double t = 0.0, hbar = 0.0;
  std::uint64_t seed = 0;

  for (const char* name :
       {"loop-phase", "adiabatic", "aa-phase", "bo-fields", "holonomy", "pancharatnam"}) {
    auto* sub = app.add_subcommand(name, std::string("run a ") + name + " scenario");
    sub->add_option("--config", config, "scenario JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--M", m, "override path segment count");
    sub->add_option("--T", t, "override total time");
    sub->add_option("--hbar", hbar, "override hbar");
    sub->add_option("--seed", seed, "seed recorded in the output");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto* sub = app.get_subcommands().front();
  if (sub->count("--M")) ov.segments = m;
  if (sub->count("--T")) ov.total_time = t;
  if (sub->count("--hbar")) ov.hbar = hbar;
  if (sub->count("--seed")) ov.seed = seed;
  return geophase::run_scenario(config, out_dir, ov, sub->get_name());
}
