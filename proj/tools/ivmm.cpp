#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ivmm/bench.hpp"
#include "ivmm/config.hpp"
#include "ivmm/errors.hpp"
#include "ivmm/fileio.hpp"
#include "ivmm/netbuild.hpp"
#include "ivmm/osm.hpp"
#include "ivmm/pipeline.hpp"
#include "ivmm/synth.hpp"
#include "ivmm/trajectory_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;          // config or IO problem
constexpr int kExitPartialFailure = 2; // batch finished, some trajectories failed

struct SharedFlags {
  std::optional<std::string> config_path;
  std::optional<std::string> asset;
  std::optional<std::string> trajectories;
  std::optional<std::string> out;
  std::optional<std::string> maxdist;  // number or "unbounded"
  std::optional<double> alpha;
  std::optional<int> k;
  std::optional<double> beta;
  std::optional<double> sigma;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
};

void add_shared_flags(CLI::App *cmd, SharedFlags *flags) {
  cmd->add_option("--config", flags->config_path, "key=value settings file");
  cmd->add_option("--asset", flags->asset, "road network asset file");
  cmd->add_option("--trajectories", flags->trajectories, "trajectory CSV file");
  cmd->add_option("--out", flags->out, "output directory");
  cmd->add_option("--maxdist", flags->maxdist,
                  "voting window radius in meters, or 'unbounded'");
  cmd->add_option("--alpha", flags->alpha, "candidate search radius in meters");
  cmd->add_option("--k", flags->k, "candidates kept per ping");
  cmd->add_option("--beta", flags->beta, "vote distance-weight scale in meters");
  cmd->add_option("--sigma", flags->sigma, "observation noise sigma in meters");
  cmd->add_option("--seed", flags->seed, "random seed");
  cmd->add_option("--workers", flags->workers, "concurrent trajectories");
}

ivmm::Config resolve_config(const SharedFlags &flags) {
  ivmm::Config cfg;
  if (flags.config_path) cfg = ivmm::load_config(*flags.config_path, cfg);
  if (flags.asset) cfg.asset_path = *flags.asset;
  if (flags.trajectories) cfg.trajectories_path = *flags.trajectories;
  if (flags.out) cfg.out_dir = *flags.out;
  if (flags.maxdist) {
    if (*flags.maxdist == "unbounded") {
      cfg.maxdist_m.reset();
    } else {
      // Reuse the config parser so the flag accepts exactly what the file does.
      cfg = ivmm::parse_config_text("maxdist=" + *flags.maxdist, cfg);
    }
  }
  if (flags.alpha) cfg.alpha_m = *flags.alpha;
  if (flags.k) cfg.k = *flags.k;
  if (flags.beta) cfg.beta_m = *flags.beta;
  if (flags.sigma) cfg.sigma_m = *flags.sigma;
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.workers) cfg.workers = *flags.workers;
  ivmm::validate_config(cfg);
  return cfg;
}

int run_build_asset(const std::string &input, const std::string &out,
                    const std::string &bbox_text,
                    const std::string &regions_path) {
  std::optional<ivmm::BoundingBox> bbox;
  if (!bbox_text.empty()) {
    double v[4];
    if (std::sscanf(bbox_text.c_str(), "%lf,%lf,%lf,%lf", &v[0], &v[1], &v[2],
                    &v[3]) != 4) {
      throw ivmm::ConfigError("bbox must be minlat,minlon,maxlat,maxlon");
    }
    bbox = ivmm::BoundingBox{{v[0], v[1]}, {v[2], v[3]}};
  }

  const ivmm::OsmExtract extract = ivmm::parse_extract(input, bbox);

  ivmm::SplitStats split_stats;
  std::vector<ivmm::RoadPiece> pieces =
      ivmm::build_pieces(extract, &split_stats);

  ivmm::ImputeStats impute_stats;
  if (!regions_path.empty()) {
    const auto regions = ivmm::read_region_map(regions_path);
    ivmm::impute_maxspeed(
        pieces,
        [&regions](const ivmm::RoadPiece &p) {
          auto it = regions.find(p.way_id);
          return it == regions.end() ? std::string() : it->second;
        },
        &impute_stats);
  } else {
    ivmm::impute_maxspeed(pieces, &impute_stats);
  }
  ivmm::apply_oneway_defaults(pieces);
  ivmm::write_asset(out, pieces);

  std::cout << "ways kept: " << extract.ways.size()
            << ", dropped: " << extract.dropped_ways << "\n"
            << "pieces: " << pieces.size()
            << " (degenerate skipped: " << split_stats.degenerate_pieces << ")\n"
            << "maxspeed tagged: " << impute_stats.tagged
            << ", imputed from region: " << impute_stats.from_region
            << ", from class: " << impute_stats.from_class
            << ", from default: " << impute_stats.from_default << "\n"
            << "asset written: " << out << "\n";
  return kExitOk;
}

int run_match(const SharedFlags &flags) {
  const ivmm::Config cfg = resolve_config(flags);
  if (cfg.out_dir.empty()) {
    throw ivmm::ConfigError("match needs --out (or out= in the config)");
  }

  const ivmm::BatchResult batch = ivmm::run_batch(cfg);

  std::cout << "trajectories matched: "
            << (batch.reports.size() - batch.failures) << "/"
            << batch.reports.size();
  if (!batch.dropped.empty()) {
    std::cout << " (dropped while loading: " << batch.dropped.size() << ")";
  }
  std::cout << "\n" << ivmm::summary_table(batch);
  return batch.failures > 0 ? kExitPartialFailure : kExitOk;
}

int run_synth(const ivmm::SynthParams &params, const std::string &out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  const ivmm::SynthResult result = ivmm::generate_synthetic(params);
  const std::string asset_path = (fs::path(out_dir) / "network.asset").string();
  const std::string traj_path =
      (fs::path(out_dir) / "trajectories.csv").string();
  const std::string truth_path = (fs::path(out_dir) / "truth.tsv").string();

  ivmm::write_asset(asset_path, result.pieces);
  ivmm::write_trajectories(traj_path, result.trajectories);
  ivmm::write_truth(truth_path, result.truths);

  std::cout << "pieces: " << result.pieces.size()
            << "\ntrajectories: " << result.trajectories.size()
            << "\nasset: " << asset_path << "\ntrajectories file: " << traj_path
            << "\ntruth: " << truth_path << "\n";
  return kExitOk;
}

int run_bench_cmd(const SharedFlags &flags) {
  const ivmm::Config cfg = resolve_config(flags);
  if (cfg.asset_path.empty() || cfg.trajectories_path.empty()) {
    throw ivmm::ConfigError("bench needs --asset and --trajectories");
  }

  const ivmm::RoadNetwork net =
      ivmm::build_graph(ivmm::read_asset(cfg.asset_path));
  const ivmm::LoadResult loaded = ivmm::load_trajectories(
      cfg.trajectories_path, cfg.split_gap_s, cfg.minpings);

  const ivmm::BenchResult result =
      ivmm::run_bench(net, loaded.trajectories, cfg,
                      ivmm::default_bench_settings());

  const std::string table = ivmm::bench_table(result);
  const std::string slopes = ivmm::slope_table(result);
  if (!cfg.out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    ivmm::write_file_atomic((fs::path(cfg.out_dir) / "bench.tsv").string(),
                            table);
    ivmm::write_file_atomic((fs::path(cfg.out_dir) / "slopes.tsv").string(),
                            slopes);
  }
  std::cout << table << slopes;
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"GPS trajectory map matching over an OSM-derived road network"};
  app.require_subcommand(1);

  auto *build_cmd =
      app.add_subcommand("build-asset", "turn an OSM XML extract into an asset");
  std::string build_input, build_out, build_bbox, build_regions;
  build_cmd->add_option("--input", build_input, "OSM XML file")->required();
  build_cmd->add_option("--out", build_out, "asset file to write")->required();
  build_cmd->add_option("--bbox", build_bbox,
                        "clip box minlat,minlon,maxlat,maxlon");
  build_cmd->add_option("--regions", build_regions,
                        "way_id<TAB>region file for speed imputation");

  auto *match_cmd =
      app.add_subcommand("match", "match a trajectory batch against an asset");
  SharedFlags match_flags;
  add_shared_flags(match_cmd, &match_flags);

  auto *synth_cmd = app.add_subcommand(
      "synth", "generate a synthetic grid network and trajectories");
  ivmm::SynthParams synth_params;
  std::string synth_out;
  synth_cmd->add_option("--out", synth_out, "output directory")->required();
  synth_cmd->add_option("--rows", synth_params.rows, "grid node rows");
  synth_cmd->add_option("--cols", synth_params.cols, "grid node columns");
  synth_cmd->add_option("--spacing", synth_params.spacing_m,
                        "grid spacing in meters");
  synth_cmd->add_option("--trajectories", synth_params.n_trajectories,
                        "number of trajectories");
  synth_cmd->add_option("--pings", synth_params.pings_per_trajectory,
                        "pings per trajectory");
  synth_cmd->add_option("--interval", synth_params.interval_s,
                        "sampling interval in seconds");
  synth_cmd->add_option("--noise", synth_params.noise_sigma_m,
                        "positional noise sigma in meters");
  synth_cmd->add_option("--seed", synth_params.seed, "random seed");
  synth_cmd->add_flag("--forward-march", synth_params.forward_march,
                      "routes sweep east and never revisit a column");

  auto *bench_cmd = app.add_subcommand(
      "bench", "time the matcher across the maxdist settings grid");
  SharedFlags bench_flags;
  add_shared_flags(bench_cmd, &bench_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitError;
  }

  try {
    if (app.got_subcommand(build_cmd)) {
      return run_build_asset(build_input, build_out, build_bbox, build_regions);
    }
    if (app.got_subcommand(match_cmd)) {
      return run_match(match_flags);
    }
    if (app.got_subcommand(synth_cmd)) {
      return run_synth(synth_params, synth_out);
    }
    if (app.got_subcommand(bench_cmd)) {
      return run_bench_cmd(bench_flags);
    }
  } catch (const ivmm::Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
