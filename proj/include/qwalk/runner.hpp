#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "qwalk/cqed.hpp"

namespace qwalk::runner {

using json = nlohmann::json;

inline constexpr const char* kArtifactVersion = "0.4.1";

/// Bad configuration. `fields` names every offending entry.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(const std::string& what, std::vector<std::string> fields);
  const std::vector<std::string>& fields() const noexcept { return fields_; }

 private:
  std::vector<std::string> fields_;
};

/// A module failed while running a validated config.
class SimulationError : public std::runtime_error {
 public:
  SimulationError(const std::string& module, const std::string& what);
  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

/// Top-level keys: command, params, rng_seed (default 0), output (default
/// "out"), tol (default 1e-10). Unknown keys are rejected here; unknown
/// params are rejected by run().
struct ExperimentConfig {
  std::string command;
  json params = json::object();
  std::uint64_t rng_seed = 0;
  std::string output = "out";
  double tol = 1e-10;

  static ExperimentConfig from_json(const json& j);
  json to_json() const;
};

struct CsvTable {
  std::string name;  // file stem
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string render() const;
};

struct ResultRecord {
  json config;
  json scalars = json::object();
  std::vector<CsvTable> tables;
  double wall_clock_s = 0.0;

  /// Everything except the wall-clock field.
  json payload() const;
  json to_json() const;
};

std::vector<std::string> commands();

/// Documented defaults for a command's params.
json default_params(const std::string& command);

ResultRecord run(const ExperimentConfig& config);

/// Cartesian product over grid axes. Each axis is an array of values or
/// {"from", "to", "points"}. Points are evaluated by `workers` threads; each
/// record is written to `point_dir` (if not empty) as soon as it completes.
std::vector<ResultRecord> sweep(const ExperimentConfig& base, const json& grid, int workers,
                                const std::filesystem::path& point_dir = {});

/// result.json plus one CSV per table. Files are written to a temporary
/// name first and renamed into place.
void write_outputs(const ResultRecord& record, const std::filesystem::path& dir);

cqed::LatticeSpec lattice_from_json(const json& j);
json lattice_to_json(const cqed::LatticeSpec& spec);

/// Built-in lattice presets "transmon-star" and "transmon-star-literal" at a given g / 2 pi in MHz.
cqed::LatticeSpec lattice_preset(const std::string& name, double g_mhz, int local_dim = 3);

/// Shortest decimal that round-trips.
std::string format_number(double v);

}  // namespace qwalk::runner
