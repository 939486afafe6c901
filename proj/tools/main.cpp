#include <CLI11.hpp>

#include <exception>
#include <iostream>
#include <string>

#include "cityind/pipeline.hpp"
#include "cityind/util.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

struct CommonOpts {
  std::string manifest_path;
  std::string region;
  std::string out_dir;
  int jobs = 0;
  std::string log_level;  // CLI flag overrides the manifest's setting
};

cityind::RunManifest load_manifest(const CommonOpts& opts) {
  cityind::RunManifest m = cityind::RunManifest::load(opts.manifest_path);
  if (!opts.out_dir.empty()) m.out_dir = opts.out_dir;
  if (opts.jobs > 0) m.jobs = opts.jobs;
  if (opts.log_level.empty()) cityind::set_log_level(m.log_level);
  return m;
}

void add_common(CLI::App* cmd, CommonOpts& opts, bool needs_region) {
  cmd->add_option("--config", opts.manifest_path, "Run manifest (JSON)")->required();
  if (needs_region)
    cmd->add_option("--region", opts.region, "Region name from the manifest")->required();
  cmd->add_option("--out", opts.out_dir, "Output directory (overrides manifest)");
  cmd->add_option("--jobs", opts.jobs, "Worker threads (results are identical for any value)");
  cmd->add_option("--log-level", opts.log_level, "error|warn|info|debug");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial indicators of urban design and transport features from open data"};
  app.require_subcommand(1);

  CommonOpts opts;
  CLI::App* validate = app.add_subcommand("validate", "Audit inputs for every region");
  add_common(validate, opts, false);
  CLI::App* analyze = app.add_subcommand("analyze", "Run the full pipeline for one region");
  add_common(analyze, opts, true);
  CLI::App* compare = app.add_subcommand("compare", "Pool analyzed regions and recompute between-city scores");
  add_common(compare, opts, false);
  CLI::App* gtfs = app.add_subcommand("gtfs-headways", "Standalone stop headway analysis for one region");
  add_common(gtfs, opts, true);
  CLI::App* version = app.add_subcommand("version", "Print version");

  CLI11_PARSE(app, argc, argv);

  if (version->parsed()) {
    std::cout << "cityind " << kVersion << "\n";
    return 0;
  }

  if (!opts.log_level.empty()) {
    auto level = cityind::parse_log_level(opts.log_level);
    if (!level) {
      std::cerr << "unknown log level: " << opts.log_level << "\n";
      return 1;
    }
    cityind::set_log_level(*level);
  }

  try {
    if (validate->parsed()) {
      cityind::RunManifest m = load_manifest(opts);
      return cityind::cmd_validate(m, std::cout);
    }
    if (analyze->parsed()) {
      cityind::RunManifest m = load_manifest(opts);
      auto written = cityind::cmd_analyze(m, opts.region);
      for (const auto& p : written) std::cout << p << "\n";
      return 0;
    }
    if (compare->parsed()) {
      cityind::RunManifest m = load_manifest(opts);
      auto written = cityind::cmd_compare(m);
      for (const auto& p : written) std::cout << p << "\n";
      return 0;
    }
    if (gtfs->parsed()) {
      cityind::RunManifest m = load_manifest(opts);
      auto written = cityind::cmd_gtfs_headways(m, opts.region);
      for (const auto& p : written) std::cout << p << "\n";
      return 0;
    }
  } catch (const cityind::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
