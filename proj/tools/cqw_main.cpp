#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cqw/config.hpp"
#include "cqw/experiment.hpp"
#include "cqw/observables.hpp"
#include "cqw/oracles.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct OracleArgs {
  std::size_t site = 50;
  double rate = 1.0;
  double z = 5.0;
  std::size_t n_sites = 101;
};

void add_oracle_options(CLI::App* cmd, OracleArgs& args, const char* rate_name) {
  cmd->add_option("--site", args.site, "Source site j0")->capture_default_str();
  cmd->add_option(rate_name, args.rate, "Coupling / hopping rate")->capture_default_str();
  cmd->add_option("--z,--t", args.z, "Propagation distance (time)")->capture_default_str();
  cmd->add_option("--sites", args.n_sites, "Window size in sites")->capture_default_str();
}

void print_amplitudes(const cqw::WaveFunction& psi) {
  std::cout << "site,re,im,intensity\n";
  const auto probs = cqw::intensity(psi).probs;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const auto a = psi.amps[static_cast<Eigen::Index>(j)];
    std::cout << j << ',' << cqw::format_number(a.real()) << ',' << cqw::format_number(a.imag()) << ','
              << cqw::format_number(probs[j]) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous-time quantum walks on 1D waveguide lattices"};
  app.set_version_flag("--version", cqw::kLibraryVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> output_dir;
  unsigned workers = 0;
  auto* simulate = app.add_subcommand("simulate", "Run the experiment described by a config file");
  simulate->add_option("config", config_path, "YAML config (or a previous run.json)")->required();
  simulate->add_option("-o,--output", output_dir, "Override output.directory");
  simulate->add_option("-j,--workers", workers, "Worker threads (default: CQW_WORKERS or all cores)");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a config and print its resolved form");
  validate->add_option("config", validate_path, "YAML config (or a previous run.json)")->required();

  auto* oracle = app.add_subcommand("oracle", "Dump a closed-form reference solution as CSV");
  oracle->require_subcommand(1);
  OracleArgs bessel_args, image_args, ctrw_args;
  bessel_args.n_sites = 101;
  auto* bessel = oracle->add_subcommand("bessel", "Free infinite-chain walk from a single site");
  add_oracle_options(bessel, bessel_args, "--coupling");
  image_args.site = 0;
  image_args.z = 2.0;
  auto* images = oracle->add_subcommand("images", "Walk next to a reflecting chain end (method of images)");
  add_oracle_options(images, image_args, "--coupling");
  auto* ctrw = oracle->add_subcommand("ctrw", "Classical continuous-time random walk");
  add_oracle_options(ctrw, ctrw_args, "--gamma");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*simulate) {
      const auto cfg = cqw::validate_config(config_path);
      cqw::RunOptions opts;
      opts.workers = workers;
      if (output_dir) opts.output_dir = *output_dir;
      const auto summary = cqw::run_experiment(cfg, opts);
      for (const auto& f : summary.files) std::cout << f.string() << '\n';
    } else if (*validate) {
      std::cout << cqw::to_json(cqw::validate_config(validate_path)).dump(2) << '\n';
    } else if (*bessel) {
      print_amplitudes(cqw::bessel_free_state(bessel_args.site, bessel_args.rate, bessel_args.z, bessel_args.n_sites));
    } else if (*images) {
      print_amplitudes(
          cqw::image_boundary_state(image_args.site, image_args.rate, image_args.z, image_args.n_sites));
    } else if (*ctrw) {
      const auto dist = cqw::classical_ctrw_distribution(ctrw_args.site, ctrw_args.rate, ctrw_args.z, ctrw_args.n_sites);
      std::cout << "site,probability\n";
      for (std::size_t j = 0; j < dist.size(); ++j) std::cout << j << ',' << cqw::format_number(dist.probs[j]) << '\n';
    }
  } catch (const cqw::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const cqw::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
