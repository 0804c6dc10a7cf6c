#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cqw/config.hpp"

namespace cqw {

inline constexpr const char* kLibraryVersion = CQW_VERSION;

struct RunOptions {
  unsigned workers = 0;                               // 0: default_worker_count()
  std::optional<std::filesystem::path> output_dir;    // overrides output.directory
};

struct RunSummary {
  std::filesystem::path output_dir;
  std::vector<std::filesystem::path> files;
};

/// Runs one experiment and writes its artifacts:
///  intensity.csv     z, site_0 .. site_{N-1}          (ensemble mean for disorder/dephasing)
///  intensity_sem.csv standard error of the mean       (disorder/dephasing only)
///  observables.csv   z, tau, variance, participation_ratio, norm_error
///  carpet.csv        input_site, site_0 .. at the final z (boundary_sweep)
///  carpet.pgm        8-bit heatmap of carpet.csv      (boundary_sweep)
///  run.json          resolved config + provenance
/// Throws NumericalError when an intensity row misses unit sum (1e-8 for
/// single evolutions, 1e-6 for ensemble means) or a propagator fails.
RunSummary run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Fixed 17-significant-digit decimal used in every CSV cell.
std::string format_number(double x);

}  // namespace cqw
