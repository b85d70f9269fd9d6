#pragma once

#include "geophase/models.hpp"
#include "geophase/geometry.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>

namespace geophase {

/// Command-line overrides applied on top of the config file.
struct ScenarioOverrides {
  std::optional<std::size_t> segments;  // --M
  std::optional<double> total_time;     // --T
  std::optional<double> hbar;           // --hbar
  std::optional<std::uint64_t> seed;    // --seed
};

/// A validated scenario. Construction rejects unknown keys, wrong types and
/// out-of-range values with ConfigInvalid.
class ScenarioConfig {
 public:
  static ScenarioConfig from_json(const nlohmann::json& doc,
                                  const std::filesystem::path& base_dir = {},
                                  const ScenarioOverrides& overrides = {});
  static ScenarioConfig from_file(const std::filesystem::path& file,
                                  const ScenarioOverrides& overrides = {});

  const std::string& command() const { return command_; }
  const nlohmann::json& doc() const { return doc_; }
  const std::filesystem::path& base_dir() const { return base_dir_; }
  const ScenarioOverrides& overrides() const { return overrides_; }
  bool wants_json() const { return output_ != "csv"; }
  bool wants_csv() const { return output_ != "json"; }

 private:
  std::string command_;
  std::string output_ = "both";
  nlohmann::json doc_;
  std::filesystem::path base_dir_;
  ScenarioOverrides overrides_;
};

struct ScenarioResult {
  nlohmann::json json;
  std::string csv;  // header row plus data rows
};

/// Executes a validated scenario. Module failures propagate as Error.
ScenarioResult execute(const ScenarioConfig& config);

/// Runs and writes <out>/<command>.json and/or .csv (atomically). On failure
/// writes <out>/error.json. Returns 0 on success, 1 for computation errors,
/// 2 for invalid configuration.
int run_scenario(const std::filesystem::path& config_file,
                 const std::filesystem::path& out_dir,
                 const ScenarioOverrides& overrides = {},
                 const std::string& command = {});

/// printf("%.17g"): round-trips every double.
std::string format_double(double x);

/// Loads a model=file table: a JSON list of {"R": [...], "H": [[re, im], ...]}
/// with H row-major.
SampledModel load_sampled_model(const std::filesystem::path& file);

}  // namespace geophase
