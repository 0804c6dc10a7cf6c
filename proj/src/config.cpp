#include "cqw/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <regex>
#include <set>

#include <yaml-cpp/yaml.h>

namespace cqw {

using nlohmann::json;

namespace {

// Strict view of one JSON object: every key must be consumed before done().
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected a mapping");
  }

  std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  bool has(const std::string& key) const { return node_.contains(key); }

  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  Section section(const std::string& key) {
    const json* v = find(key);
    if (v == nullptr) throw ConfigError(key_path(key), "required block is missing");
    return Section(*v, key_path(key));
  }

  double number(const std::string& key, double fallback) {
    const json* v = find(key);
    if (v == nullptr) return fallback;
    if (!v->is_number()) throw ConfigError(key_path(key), "expected a number");
    const double x = v->get<double>();
    if (!std::isfinite(x)) throw ConfigError(key_path(key), "must be finite");
    return x;
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    const json* v = find(key);
    if (v == nullptr) return fallback;
    if (v->is_number_unsigned()) return v->get<std::uint64_t>();
    if (v->is_number_integer()) {
      if (v->get<std::int64_t>() < 0) throw ConfigError(key_path(key), "must be >= 0");
      return static_cast<std::uint64_t>(v->get<std::int64_t>());
    }
    if (v->is_number_float()) {
      const double x = v->get<double>();
      if (x >= 0.0 && x == std::floor(x) && x < 0x1.0p63) return static_cast<std::uint64_t>(x);
    }
    throw ConfigError(key_path(key), "expected a nonnegative integer");
  }

  bool boolean(const std::string& key, bool fallback) {
    const json* v = find(key);
    if (v == nullptr) return fallback;
    if (!v->is_boolean()) throw ConfigError(key_path(key), "expected true or false");
    return v->get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    const json* v = find(key);
    if (v == nullptr) return fallback;
    if (!v->is_string()) throw ConfigError(key_path(key), "expected a string");
    return v->get<std::string>();
  }

  // Scalar, or list of numbers.
  std::vector<double> number_or_list(const std::string& key, std::vector<double> fallback) {
    const json* v = find(key);
    if (v == nullptr) return fallback;
    if (v->is_number()) return {v->get<double>()};
    if (!v->is_array() || v->empty()) throw ConfigError(key_path(key), "expected a number or a nonempty list");
    std::vector<double> out;
    for (const auto& x : *v) {
      if (!x.is_number()) throw ConfigError(key_path(key), "list entries must be numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  void done() const {
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.contains(key)) throw ConfigError(key_path(key), "unknown key");
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename Enum, std::size_t N>
Enum parse_enum(const std::string& key, const std::string& value, const std::pair<const char*, Enum> (&table)[N]) {
  std::string options;
  for (const auto& [name, e] : table) {
    if (value == name) return e;
    options += options.empty() ? name : std::string(", ") + name;
  }
  throw ConfigError(key, "unknown value '" + value + "' (expected one of: " + options + ")");
}

constexpr std::pair<const char*, Experiment> kExperiments[] = {{"ballistic", Experiment::Ballistic},
                                                               {"disorder", Experiment::Disorder},
                                                               {"boundary_sweep", Experiment::BoundarySweep},
                                                               {"classical", Experiment::Classical},
                                                               {"dephasing", Experiment::Dephasing}};
constexpr std::pair<const char*, Boundary> kBoundaries[] = {{"open", Boundary::Open}, {"periodic", Boundary::Periodic}};
constexpr std::pair<const char*, DiagConvention> kConventions[] = {
    {"beta_as_given", DiagConvention::BetaAsGiven}, {"minus_degree_gamma", DiagConvention::MinusDegreeGamma}};
constexpr std::pair<const char*, Method> kMethods[] = {{"eigen", Method::Eigen}, {"chebyshev", Method::Chebyshev}};

template <typename Enum, std::size_t N>
const char* enum_name(Enum e, const std::pair<const char*, Enum> (&table)[N]) {
  for (const auto& [name, value] : table) {
    if (value == e) return name;
  }
  return "?";
}

json list_or_scalar(const std::vector<double>& v) {
  if (v.size() == 1) return v[0];
  return json(v);
}

std::size_t site_index(Section& s, const std::string& key, std::size_t fallback, std::size_t n_sites) {
  const auto v = s.unsigned_integer(key, fallback);
  if (v >= n_sites) {
    throw ConfigError(s.key_path(key), "site " + std::to_string(v) + " outside [0, " + std::to_string(n_sites) + ")");
  }
  return static_cast<std::size_t>(v);
}

LatticeConfig parse_lattice(Section& root) {
  LatticeConfig cfg;
  if (!root.has("lattice")) {
    root.find("lattice");
    return cfg;
  }
  Section s = root.section("lattice");
  cfg.n_sites = s.unsigned_integer("n_sites", cfg.n_sites);
  cfg.coupling = s.number_or_list("coupling", cfg.coupling);
  cfg.beta = s.number_or_list("beta", cfg.beta);
  cfg.boundary = parse_enum(s.key_path("boundary"), s.string("boundary", "open"), kBoundaries);
  cfg.diag_convention =
      parse_enum(s.key_path("diag_convention"), s.string("diag_convention", "beta_as_given"), kConventions);
  s.done();
  try {
    cfg.to_spec().validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("lattice", e.what());
  }
  return cfg;
}

InitialStateSpec parse_initial_state(Section& root, std::size_t n_sites) {
  const std::size_t center = n_sites / 2;
  if (!root.has("initial_state")) {
    root.find("initial_state");
    return SingleSite{center};
  }
  Section s = root.section("initial_state");
  const std::string kind = s.string("kind", "single_site");
  InitialStateSpec out;
  if (kind == "single_site") {
    out = SingleSite{site_index(s, "site", center, n_sites)};
  } else if (kind == "two_site") {
    const json* sites = s.find("sites");
    TwoSite pair{center, center + 1 < n_sites ? center + 1 : center - 1, 0.0};
    if (sites != nullptr) {
      auto is_index = [](const json& x) { return x.is_number_integer() && x.get<std::int64_t>() >= 0; };
      if (!sites->is_array() || sites->size() != 2 || !is_index((*sites)[0]) || !is_index((*sites)[1])) {
        throw ConfigError(s.key_path("sites"), "expected a list of two site indices");
      }
      pair.first = (*sites)[0].get<std::size_t>();
      pair.second = (*sites)[1].get<std::size_t>();
    }
    if (pair.first >= n_sites || pair.second >= n_sites) {
      throw ConfigError(s.key_path("sites"), "site outside [0, " + std::to_string(n_sites) + ")");
    }
    if (pair.first == pair.second) throw ConfigError(s.key_path("sites"), "sites must differ");
    pair.relative_phase = s.number("relative_phase", 0.0);
    out = pair;
  } else if (kind == "gaussian_beam") {
    GaussianBeam beam{static_cast<double>(center), 3.0, 0.0};
    beam.center = s.number("center", beam.center);
    beam.width_sites = s.number("width", beam.width_sites);
    beam.tilt_phase_per_site = s.number("tilt", 0.0);
    if (!(beam.width_sites > 0.0)) throw ConfigError(s.key_path("width"), "must be > 0");
    if (beam.center < 0.0 || beam.center > static_cast<double>(n_sites - 1)) {
      throw ConfigError(s.key_path("center"), "outside the lattice");
    }
    out = beam;
  } else {
    throw ConfigError(s.key_path("kind"),
                      "unknown value '" + kind + "' (expected one of: single_site, two_site, gaussian_beam)");
  }
  s.done();
  return out;
}

ZGridConfig parse_zgrid(Section& root, double default_stop) {
  ZGridConfig cfg;
  cfg.stop = default_stop;
  if (!root.has("zgrid")) {
    root.find("zgrid");
    return cfg;
  }
  Section s = root.section("zgrid");
  cfg.start = s.number("start", cfg.start);
  cfg.stop = s.number("stop", cfg.stop);
  cfg.steps = s.unsigned_integer("steps", cfg.steps);
  s.done();
  if (cfg.start < 0.0) throw ConfigError("zgrid.start", "must be >= 0");
  if (cfg.steps < 1) throw ConfigError("zgrid.steps", "must be >= 1");
  if (!(cfg.stop > cfg.start)) throw ConfigError("zgrid.stop", "must be greater than zgrid.start");
  return cfg;
}

void reject_block(Section& root, const std::string& key, Experiment e) {
  if (root.has(key)) {
    throw ConfigError(key, std::string("block is not used by experiment '") + experiment_name(e) + "'");
  }
  root.find(key);
}

}  // namespace

const char* experiment_name(Experiment e) { return enum_name(e, kExperiments); }

LatticeSpec LatticeConfig::to_spec() const {
  LatticeSpec spec;
  spec.n_sites = n_sites;
  spec.boundary = boundary;
  spec.diag_convention = diag_convention;
  const std::size_t n_bonds = boundary == Boundary::Periodic ? n_sites : (n_sites > 0 ? n_sites - 1 : 0);
  spec.coupling = coupling.size() == 1 ? std::vector<double>(n_bonds, coupling[0]) : coupling;
  if (beta.size() == 1) {
    if (beta[0] != 0.0) spec.beta.assign(n_sites, beta[0]);
  } else {
    spec.beta = beta;
  }
  return spec;
}

ExperimentConfig parse_config(const json& doc) {
  Section root(doc, "");
  ExperimentConfig cfg;

  const json* exp = root.find("experiment");
  if (exp == nullptr) throw ConfigError("experiment", "required key is missing");
  if (!exp->is_string()) throw ConfigError("experiment", "expected a string");
  cfg.experiment = parse_enum("experiment", exp->get<std::string>(), kExperiments);

  cfg.lattice = parse_lattice(root);
  const std::size_t n = cfg.lattice.n_sites;
  cfg.initial_state = parse_initial_state(root, n);
  cfg.zgrid = parse_zgrid(root, cfg.experiment == Experiment::BoundarySweep ? 8.0 : 10.0);

  if (root.has("propagator")) {
    Section s = root.section("propagator");
    cfg.method = parse_enum(s.key_path("method"), s.string("method", "eigen"), kMethods);
    cfg.tol = s.number("tol", cfg.tol);
    s.done();
    if (!(cfg.tol > 0.0 && cfg.tol <= 1e-4)) throw ConfigError("propagator.tol", "must lie in (0, 1e-4]");
  } else {
    root.find("propagator");
  }

  if (cfg.experiment == Experiment::Disorder) {
    Section s = root.section("disorder");
    DisorderSpec d;
    d.offdiag_strength = s.number("offdiag_strength", 0.0);
    d.diag_strength = s.number("diag_strength", 0.0);
    s.done();
    if (!(d.offdiag_strength >= 0.0 && d.offdiag_strength < 1.0)) {
      throw ConfigError("disorder.offdiag_strength", "must satisfy 0 <= w < 1 (couplings stay positive)");
    }
    if (d.diag_strength < 0.0) throw ConfigError("disorder.diag_strength", "must be >= 0");
    cfg.disorder = d;
  } else {
    reject_block(root, "disorder", cfg.experiment);
  }

  if (cfg.experiment == Experiment::Dephasing) {
    Section s = root.section("dephasing");
    DephasingSpec d;
    d.segment_length = s.number("segment_length", 0.5);
    d.phase_strength = s.number("phase_strength", 0.0);
    s.done();
    if (!(d.segment_length > 0.0)) throw ConfigError("dephasing.segment_length", "must be > 0");
    if (d.phase_strength < 0.0) throw ConfigError("dephasing.phase_strength", "must be >= 0");
    cfg.dephasing = d;
  } else {
    reject_block(root, "dephasing", cfg.experiment);
  }

  if (cfg.experiment == Experiment::BoundarySweep) {
    if (root.has("boundary_sweep")) {
      Section s = root.section("boundary_sweep");
      cfg.boundary_sweep.first_input = s.unsigned_integer("first_input", cfg.boundary_sweep.first_input);
      cfg.boundary_sweep.last_input = s.unsigned_integer("last_input", cfg.boundary_sweep.last_input);
      cfg.boundary_sweep.log_scale = s.boolean("log_scale", false);
      s.done();
    } else {
      root.find("boundary_sweep");
    }
    const auto& b = cfg.boundary_sweep;
    if (b.first_input > b.last_input) throw ConfigError("boundary_sweep.first_input", "must be <= last_input");
    if (b.last_input >= n) {
      throw ConfigError("boundary_sweep.last_input", "site outside [0, " + std::to_string(n) + ")");
    }
    if (cfg.lattice.boundary != Boundary::Open) {
      throw ConfigError("lattice.boundary", "boundary_sweep needs an open lattice (the wall is the chain end)");
    }
  } else {
    reject_block(root, "boundary_sweep", cfg.experiment);
  }

  if (cfg.experiment == Experiment::Classical) {
    cfg.classical_gamma = cfg.lattice.to_spec().mean_coupling();
    if (root.has("classical")) {
      Section s = root.section("classical");
      cfg.classical_gamma = s.number("gamma", cfg.classical_gamma);
      s.done();
    } else {
      root.find("classical");
    }
    if (!(cfg.classical_gamma > 0.0)) throw ConfigError("classical.gamma", "must be > 0");
    if (!std::holds_alternative<SingleSite>(cfg.initial_state)) {
      throw ConfigError("initial_state.kind", "classical walk starts from a single site");
    }
  } else {
    reject_block(root, "classical", cfg.experiment);
  }

  cfg.n_realizations = root.unsigned_integer("n_realizations", 1);
  if (cfg.n_realizations < 1) throw ConfigError("n_realizations", "must be >= 1");
  cfg.master_seed = root.unsigned_integer("master_seed", 0);

  if (root.has("output")) {
    Section s = root.section("output");
    cfg.output.directory = s.string("directory", cfg.output.directory);
    if (const json* formats = s.find("formats"); formats != nullptr) {
      if (!formats->is_array()) throw ConfigError("output.formats", "expected a list");
      cfg.output.csv = cfg.output.json = cfg.output.pgm = false;
      for (const auto& f : *formats) {
        const std::string name = f.is_string() ? f.get<std::string>() : "";
        if (name == "csv") cfg.output.csv = true;
        else if (name == "json") cfg.output.json = true;
        else if (name == "pgm") cfg.output.pgm = true;
        else throw ConfigError("output.formats", "unknown format '" + name + "' (expected csv, json, pgm)");
      }
    }
    s.done();
    if (cfg.output.directory.empty()) throw ConfigError("output.directory", "must not be empty");
  } else {
    root.find("output");
  }

  if (root.has("provenance") && !root.find("provenance")->is_object()) {
    throw ConfigError("provenance", "expected a mapping");
  }
  root.find("provenance");
  root.done();
  return cfg;
}

json to_json(const ExperimentConfig& cfg) {
  json out;
  out["experiment"] = experiment_name(cfg.experiment);
  out["lattice"] = {{"n_sites", cfg.lattice.n_sites},
                    {"coupling", list_or_scalar(cfg.lattice.coupling)},
                    {"beta", list_or_scalar(cfg.lattice.beta)},
                    {"boundary", enum_name(cfg.lattice.boundary, kBoundaries)},
                    {"diag_convention", enum_name(cfg.lattice.diag_convention, kConventions)}};
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SingleSite>) {
          out["initial_state"] = {{"kind", "single_site"}, {"site", s.site}};
        } else if constexpr (std::is_same_v<T, TwoSite>) {
          out["initial_state"] = {
              {"kind", "two_site"}, {"sites", {s.first, s.second}}, {"relative_phase", s.relative_phase}};
        } else {
          out["initial_state"] = {{"kind", "gaussian_beam"},
                                  {"center", s.center},
                                  {"width", s.width_sites},
                                  {"tilt", s.tilt_phase_per_site}};
        }
      },
      cfg.initial_state);
  out["zgrid"] = {{"start", cfg.zgrid.start}, {"stop", cfg.zgrid.stop}, {"steps", cfg.zgrid.steps}};
  out["propagator"] = {{"method", enum_name(cfg.method, kMethods)}, {"tol", cfg.tol}};
  if (cfg.disorder) {
    out["disorder"] = {{"offdiag_strength", cfg.disorder->offdiag_strength},
                       {"diag_strength", cfg.disorder->diag_strength}};
  }
  if (cfg.dephasing) {
    out["dephasing"] = {{"segment_length", cfg.dephasing->segment_length},
                        {"phase_strength", cfg.dephasing->phase_strength}};
  }
  if (cfg.experiment == Experiment::BoundarySweep) {
    out["boundary_sweep"] = {{"first_input", cfg.boundary_sweep.first_input},
                             {"last_input", cfg.boundary_sweep.last_input},
                             {"log_scale", cfg.boundary_sweep.log_scale}};
  }
  if (cfg.experiment == Experiment::Classical) out["classical"] = {{"gamma", cfg.classical_gamma}};
  out["n_realizations"] = cfg.n_realizations;
  out["master_seed"] = cfg.master_seed;
  json formats = json::array();
  if (cfg.output.csv) formats.push_back("csv");
  if (cfg.output.json) formats.push_back("json");
  if (cfg.output.pgm) formats.push_back("pgm");
  out["output"] = {{"directory", cfg.output.directory}, {"formats", formats}};
  return out;
}

namespace {

json scalar_to_json(const YAML::Node& node) {
  const std::string& text = node.Scalar();
  if (node.Tag() == "!") return text;  // quoted
  static const std::regex kInt(R"([-+]?[0-9]+)");
  static const std::regex kFloat(R"([-+]?(\.[0-9]+|[0-9]+(\.[0-9]*)?)([eE][-+]?[0-9]+)?)");
  if (text == "true" || text == "True" || text == "TRUE") return true;
  if (text == "false" || text == "False" || text == "FALSE") return false;
  if (text.empty() || text == "~" || text == "null" || text == "Null" || text == "NULL") return nullptr;
  if (std::regex_match(text, kInt)) {
    try {
      if (text[0] == '-') return std::stoll(text);
      return std::stoull(text[0] == '+' ? text.substr(1) : text);
    } catch (const std::out_of_range&) {
      return std::stod(text);
    }
  }
  if (std::regex_match(text, kFloat)) return std::stod(text);
  return text;
}

json yaml_to_json(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined: return nullptr;
    case YAML::NodeType::Scalar: return scalar_to_json(node);
    case YAML::NodeType::Sequence: {
      json arr = json::array();
      for (const auto& item : node) arr.push_back(yaml_to_json(item));
      return arr;
    }
    case YAML::NodeType::Map: {
      json obj = json::object();
      for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (obj.contains(key)) throw ConfigError(key, "duplicate key");
        obj[key] = yaml_to_json(kv.second);
      }
      return obj;
    }
  }
  return nullptr;
}

}  // namespace

json load_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot read " + path.string());
  try {
    return yaml_to_json(YAML::Load(in));
  } catch (const YAML::Exception& e) {
    throw ConfigError("<file>", std::string("parse error: ") + e.what());
  }
}

ExperimentConfig validate_config(const std::filesystem::path& path) { return parse_config(load_document(path)); }

}  // namespace cqw
