#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqw/ensembles.hpp"
#include "cqw/lattice.hpp"
#include "cqw/propagators.hpp"

namespace cqw {

/// Invalid experiment configuration. `key()` is the dotted path of the
/// offending entry ("disorder.offdiag_strength", "lattice", ...).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

enum class Experiment { Ballistic, Disorder, BoundarySweep, Classical, Dephasing };

const char* experiment_name(Experiment e);

struct LatticeConfig {
  std::size_t n_sites = 101;
  // A single entry means "uniform"; otherwise one value per bond / site.
  std::vector<double> coupling{1.0};
  std::vector<double> beta{0.0};
  Boundary boundary = Boundary::Open;
  DiagConvention diag_convention = DiagConvention::BetaAsGiven;

  LatticeSpec to_spec() const;
  bool operator==(const LatticeConfig&) const = default;
};

struct ZGridConfig {
  double start = 0.0;
  double stop = 10.0;
  std::size_t steps = 100;

  ZGrid to_grid() const { return ZGrid::linspace(start, stop, steps); }
  bool operator==(const ZGridConfig&) const = default;
};

struct BoundarySweepConfig {
  std::size_t first_input = 0;
  std::size_t last_input = 20;
  bool log_scale = false;
  bool operator==(const BoundarySweepConfig&) const = default;
};

struct OutputConfig {
  std::string directory = "out";
  bool csv = true;
  bool json = true;
  bool pgm = true;
  bool operator==(const OutputConfig&) const = default;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::Ballistic;
  LatticeConfig lattice;
  InitialStateSpec initial_state = SingleSite{50};
  ZGridConfig zgrid;
  Method method = Method::Eigen;
  double tol = 1e-12;
  std::optional<DisorderSpec> disorder;
  std::optional<DephasingSpec> dephasing;
  BoundarySweepConfig boundary_sweep;
  double classical_gamma = 1.0;
  std::size_t n_realizations = 1;
  std::uint64_t master_seed = 0;
  OutputConfig output;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Strict parse of a configuration document: unknown keys and range
/// violations throw ConfigError; absent optional entries take their
/// defaults. A top-level "provenance" object (as written to run.json) is
/// accepted and ignored.
ExperimentConfig parse_config(const nlohmann::json& doc);

/// Canonical resolved form; parse_config(to_json(c)) == c.
nlohmann::json to_json(const ExperimentConfig& config);

/// Reads a YAML (or JSON, being a YAML subset) document into JSON values.
nlohmann::json load_document(const std::filesystem::path& path);

/// load_document + parse_config.
ExperimentConfig validate_config(const std::filesystem::path& path);

}  // namespace cqw
