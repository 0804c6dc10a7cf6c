#include "cqw/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "cqw/ensembles.hpp"
#include "cqw/observables.hpp"
#include "cqw/oracles.hpp"
#include "cqw/propagators.hpp"

namespace cqw {

namespace {

// Per-z records of one experiment, ready for serialization.
struct Series {
  std::vector<double> z;
  std::vector<std::vector<double>> intensity;
  std::vector<std::vector<double>> sem;  // empty unless ensemble
  std::vector<double> variance;
  std::vector<double> participation;
  std::vector<double> norm_error;
};

void push_single(Series& s, double z, std::vector<double> probs, double norm_squared) {
  s.z.push_back(z);
  s.variance.push_back(spread_variance(probs));
  s.participation.push_back(participation_ratio(probs));
  s.norm_error.push_back(std::abs(norm_squared - 1.0));
  s.intensity.push_back(std::move(probs));
}

Series from_snapshots(const Snapshots& snaps) {
  Series s;
  for (std::size_t i = 0; i < snaps.states.size(); ++i) {
    push_single(s, snaps.zgrid[i], intensity(snaps.states[i]).probs, snaps.states[i].norm_squared());
  }
  return s;
}

Series from_ensemble(EnsembleStats stats) {
  Series s;
  s.z = stats.zgrid.values();
  s.intensity = std::move(stats.mean_intensity);
  s.sem = std::move(stats.sem_intensity);
  s.variance = std::move(stats.mean_variance);
  s.participation = std::move(stats.mean_participation);
  s.norm_error = std::move(stats.max_norm_error);
  return s;
}

void check_rows(const std::vector<std::vector<double>>& rows, double tol, const char* what) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double total = std::accumulate(rows[i].begin(), rows[i].end(), 0.0);
    if (!(std::abs(total - 1.0) <= tol)) {
      throw NumericalError(std::string(what) + " row " + std::to_string(i) + " sums to " + format_number(total) +
                           ", outside 1 +- " + format_number(tol));
    }
  }
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path) : out_(path, std::ios::binary), path_(path) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
  }
  void header(const std::string& first, std::size_t n_sites) {
    out_ << first;
    for (std::size_t j = 0; j < n_sites; ++j) out_ << ",site_" << j;
    out_ << '\n';
  }
  void header(std::initializer_list<const char*> names) {
    bool first = true;
    for (const char* n : names) {
      out_ << (first ? "" : ",") << n;
      first = false;
    }
    out_ << '\n';
  }
  template <typename Key>
  void row(const Key& key, const std::vector<double>& values) {
    write_key(key);
    for (const double v : values) out_ << ',' << format_number(v);
    out_ << '\n';
  }
  void close() {
    out_.close();
    if (!out_) throw std::runtime_error("failed writing " + path_.string());
  }

 private:
  void write_key(double z) { out_ << format_number(z); }
  void write_key(std::size_t site) { out_ << site; }

  std::ofstream out_;
  std::filesystem::path path_;
};

void write_series(const Series& s, double tau_scale, const std::filesystem::path& dir, RunSummary& summary) {
  const std::size_t n_sites = s.intensity.empty() ? 0 : s.intensity.front().size();
  {
    CsvWriter w(dir / "intensity.csv");
    w.header("z", n_sites);
    for (std::size_t i = 0; i < s.z.size(); ++i) w.row(s.z[i], s.intensity[i]);
    w.close();
    summary.files.push_back(dir / "intensity.csv");
  }
  if (!s.sem.empty()) {
    CsvWriter w(dir / "intensity_sem.csv");
    w.header("z", n_sites);
    for (std::size_t i = 0; i < s.z.size(); ++i) w.row(s.z[i], s.sem[i]);
    w.close();
    summary.files.push_back(dir / "intensity_sem.csv");
  }
  CsvWriter w(dir / "observables.csv");
  w.header({"z", "tau", "variance", "participation_ratio", "norm_error"});
  for (std::size_t i = 0; i < s.z.size(); ++i) {
    w.row(s.z[i], {tau_scale * s.z[i], s.variance[i], s.participation[i], s.norm_error[i]});
  }
  w.close();
  summary.files.push_back(dir / "observables.csv");
}

void write_pgm(const std::filesystem::path& path, const std::vector<std::vector<double>>& rows, bool log_scale,
               std::size_t first_input) {
  const std::size_t height = rows.size();
  const std::size_t width = rows.empty() ? 0 : rows.front().size();
  double peak = 0.0;
  for (const auto& r : rows) peak = std::max(peak, *std::max_element(r.begin(), r.end()));
  constexpr double kLogFloor = 1e-6;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "P5\n# cqw carpet: rows = input sites " << first_input << ".." << first_input + height - 1
      << ", columns = output sites, " << (log_scale ? "scale = log10, floor 1e-6" : "scale = linear")
      << ", normalized to max " << format_number(peak) << "\n"
      << width << ' ' << height << "\n255\n";
  for (const auto& r : rows) {
    for (const double p : r) {
      double level = 0.0;
      if (peak > 0.0) {
        const double rel = p / peak;
        level = log_scale ? (std::log10(std::max(rel, kLogFloor)) - std::log10(kLogFloor)) / -std::log10(kLogFloor)
                          : rel;
      }
      out.put(static_cast<char>(static_cast<unsigned char>(std::lround(std::clamp(level, 0.0, 1.0) * 255.0))));
    }
  }
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

Snapshots evolve_single(const ExperimentConfig& cfg, const Hamiltonian& h, const WaveFunction& psi0,
                        const ZGrid& grid) {
  return evolve(h, psi0, grid, EnsembleOptions{cfg.method, cfg.tol, 1});
}

}  // namespace

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

RunSummary run_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
  RunSummary summary;
  summary.output_dir = options.output_dir.value_or(std::filesystem::path(cfg.output.directory));
  std::filesystem::create_directories(summary.output_dir);
  const auto& dir = summary.output_dir;

  const LatticeSpec lattice = cfg.lattice.to_spec();
  const ZGrid grid = cfg.zgrid.to_grid();
  const EnsembleOptions ensemble_opts{cfg.method, cfg.tol, options.workers};
  const double single_tol = cfg.method == Method::Chebyshev ? std::max(1e-8, 10.0 * cfg.tol) : 1e-8;
  double tau_scale = lattice.mean_coupling();

  Series series;
  double row_tol = single_tol;
  std::vector<std::vector<double>> carpet;

  switch (cfg.experiment) {
    case Experiment::Ballistic: {
      const auto h = build_hamiltonian(lattice);
      series = from_snapshots(evolve_single(cfg, h, make_initial_state(cfg.initial_state, lattice.n_sites), grid));
      break;
    }
    case Experiment::Disorder: {
      series = from_ensemble(
          run_ensemble(lattice, *cfg.disorder, cfg.initial_state, grid, cfg.n_realizations, cfg.master_seed,
                       ensemble_opts));
      row_tol = 1e-6;
      break;
    }
    case Experiment::Dephasing: {
      series = from_ensemble(evolve_dephasing(lattice, *cfg.dephasing, cfg.initial_state, grid, cfg.n_realizations,
                                              cfg.master_seed, ensemble_opts));
      row_tol = 1e-6;
      break;
    }
    case Experiment::Classical: {
      const auto j0 = std::get<SingleSite>(cfg.initial_state).site;
      tau_scale = cfg.classical_gamma;
      for (const double t : grid.values()) {
        auto dist = classical_ctrw_distribution(j0, cfg.classical_gamma, t, lattice.n_sites);
        const double total = dist.total();
        push_single(series, t, std::move(dist.probs), total);
      }
      break;
    }
    case Experiment::BoundarySweep: {
      const auto h = build_hamiltonian(lattice);
      const auto& sweep = cfg.boundary_sweep;
      const ZGrid final_z({grid.back()});
      std::optional<SpectralDecomposition> spectrum;
      if (cfg.method == Method::Eigen) spectrum = decompose(h);
      auto run = [&](std::size_t site, const ZGrid& g) {
        const auto psi0 = make_initial_state(SingleSite{site}, lattice.n_sites);
        return spectrum ? evolve_eigen(*spectrum, psi0, g) : evolve_single(cfg, h, psi0, g);
      };
      for (std::size_t site = sweep.first_input; site <= sweep.last_input; ++site) {
        carpet.push_back(intensity(run(site, final_z).states.front()).probs);
      }
      series = from_snapshots(run(sweep.first_input, grid));
      check_rows(carpet, single_tol, "carpet");
      break;
    }
  }
  check_rows(series.intensity, row_tol, "intensity");

  if (cfg.output.csv) {
    write_series(series, tau_scale, dir, summary);
    if (!carpet.empty()) {
      CsvWriter w(dir / "carpet.csv");
      w.header("input_site", lattice.n_sites);
      for (std::size_t i = 0; i < carpet.size(); ++i) w.row(cfg.boundary_sweep.first_input + i, carpet[i]);
      w.close();
      summary.files.push_back(dir / "carpet.csv");
    }
  }
  if (cfg.output.pgm && !carpet.empty()) {
    write_pgm(dir / "carpet.pgm", carpet, cfg.boundary_sweep.log_scale, cfg.boundary_sweep.first_input);
    summary.files.push_back(dir / "carpet.pgm");
  }
  if (cfg.output.json) {
    auto doc = to_json(cfg);
    doc["provenance"] = {{"library", "cqw"},
                         {"version", kLibraryVersion},
                         {"tau_per_z", tau_scale},
                         {"number_format", "%.16e"}};
    std::ofstream out(dir / "run.json", std::ios::binary);
    out << doc.dump(2) << '\n';
    if (!out) throw std::runtime_error("failed writing " + (dir / "run.json").string());
    summary.files.push_back(dir / "run.json");
  }
  return summary;
}

}  // namespace cqw
