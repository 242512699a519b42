#include "ivmm/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <thread>

#include "ivmm/errors.hpp"
#include "ivmm/fileio.hpp"
#include "ivmm/geojson.hpp"
#include "ivmm/metrics.hpp"
#include "ivmm/netbuild.hpp"

namespace ivmm {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::string sanitize_for_filename(const std::string &s) {
  std::string out;
  out.reserve(s.size());
  for (char ch : s) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                    (ch >= '0' && ch <= '9') || ch == '-' || ch == '_';
    out.push_back(ok ? ch : '_');
  }
  return out.empty() ? "trajectory" : out;
}

std::string one_line(const std::string &s) {
  std::string out = s;
  for (char &ch : out) {
    if (ch == '\t' || ch == '\n' || ch == '\r') ch = ' ';
  }
  return out;
}

void append_stats_row(std::string &out, const char *name,
                      const std::vector<double> &values) {
  if (values.empty()) return;
  const SummaryStats s = summarize(values);
  out += name;
  for (double v : {s.mean, s.std_dev, s.min, s.q1, s.median, s.q3, s.max}) {
    out += '\t';
    out += format_double(v);
  }
  out += '\n';
}

}  // namespace

MatchOutcome match_trajectory(const RoadNetwork &net, const SpatialIndex &index,
                              const Trajectory &traj, const Config &cfg) {
  const auto start = std::chrono::steady_clock::now();

  std::vector<std::vector<Candidate>> per_ping;
  per_ping.reserve(traj.pings.size());
  for (const Ping &ping : traj.pings) {
    per_ping.push_back(
        generate_candidates(net, index, ping, cfg.alpha_m, cfg.k));
  }

  MatchOutcome out;
  out.trellis =
      build_trellis(traj, per_ping, net, cfg.st_params(), cfg.minpings);

  const auto voting_start = std::chrono::steady_clock::now();
  out.tally = run_voting(out.trellis, cfg.voting_params(), &out.stats);
  out.voting_s = seconds_since(voting_start);

  out.selection = select_final(out.trellis, out.tally);
  out.route = impute_route(net, out.trellis, out.selection);
  out.full_s = seconds_since(start);
  return out;
}

BatchResult run_batch(const RoadNetwork &net,
                      const std::vector<Trajectory> &trajectories,
                      const Config &cfg) {
  validate_config(cfg);
  const SpatialIndex index = build_index(net, cfg.alpha_m);

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
  }

  BatchResult batch;
  batch.reports.resize(trajectories.size());

  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= trajectories.size()) return;
      const Trajectory &traj = trajectories[i];

      TrajectoryReport report;
      report.index = static_cast<int>(i);
      report.device_id = traj.device_id;
      report.pings = static_cast<int>(traj.pings.size());
      try {
        const MatchOutcome outcome = match_trajectory(net, index, traj, cfg);
        report.ok = true;
        report.matched = outcome.trellis.size();
        report.breaks = outcome.trellis.break_count();
        report.gaps = outcome.route.gap_count;
        report.route_length_m = outcome.route.total_length;
        report.relaxations = outcome.stats.relaxations;
        report.voting_s = outcome.voting_s;
        report.full_s = outcome.full_s;

        std::vector<double> dists =
            selected_candidate_distances(outcome.trellis, outcome.selection);
        std::sort(dists.begin(), dists.end());
        report.median_candidate_dist_m = quantile(dists, 0.5);

        try {
          const LengthVariation lv =
              path_length_variation(outcome.trellis, outcome.selection);
          report.raw_length_m = lv.raw;
          report.matched_length_m = lv.matched;
          report.length_variation_rel = lv.rel_diff;
        } catch (const ZeroLengthRaw &) {
          // Stationary trajectory; the relative figure stays 0.
        }

        if (!cfg.out_dir.empty()) {
          const std::string name = sanitize_for_filename(traj.device_id) + "-" +
                                   std::to_string(i) + ".geojson";
          const std::string path =
              (std::filesystem::path(cfg.out_dir) / name).string();
          write_file_atomic(path,
                            route_geojson(traj, outcome.trellis, outcome.route));
          report.output_path = path;
        }
      } catch (const Error &e) {
        report.ok = false;
        report.error = e.what();
      }
      batch.reports[i] = std::move(report);
    }
  };

  const int nworkers =
      std::max(1, std::min<int>(cfg.workers,
                                static_cast<int>(trajectories.size())));
  if (nworkers <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(nworkers);
    for (int w = 0; w < nworkers; ++w) threads.emplace_back(worker);
    for (auto &t : threads) t.join();
  }

  for (const auto &report : batch.reports) {
    if (!report.ok) ++batch.failures;
  }

  if (!cfg.out_dir.empty()) {
    const auto dir = std::filesystem::path(cfg.out_dir);
    write_file_atomic((dir / "report.tsv").string(), report_table(batch));
    write_file_atomic((dir / "summary.tsv").string(), summary_table(batch));
  }
  return batch;
}

BatchResult run_batch(const Config &cfg) {
  validate_config(cfg);
  if (cfg.asset_path.empty()) throw ConfigError("asset path is required");
  if (cfg.trajectories_path.empty()) {
    throw ConfigError("trajectories path is required");
  }

  const RoadNetwork net = build_graph(read_asset(cfg.asset_path));
  LoadResult loaded =
      load_trajectories(cfg.trajectories_path, cfg.split_gap_s, cfg.minpings);

  BatchResult batch = run_batch(net, loaded.trajectories, cfg);
  batch.dropped = std::move(loaded.dropped);
  return batch;
}

std::string report_table(const BatchResult &batch) {
  std::string out =
      "index\tdevice_id\tstatus\terror\tpings\tmatched\tbreaks\tgaps\t"
      "raw_length_m\tmatched_length_m\troute_length_m\tlength_variation_rel\t"
      "median_candidate_dist_m\trelaxations\tvoting_s\tfull_s\toutput\n";
  for (const auto &r : batch.reports) {
    out += std::to_string(r.index);
    out += '\t';
    out += r.device_id;
    out += '\t';
    out += r.ok ? "ok" : "error";
    out += '\t';
    out += one_line(r.error);
    out += '\t';
    out += std::to_string(r.pings);
    out += '\t';
    out += std::to_string(r.matched);
    out += '\t';
    out += std::to_string(r.breaks);
    out += '\t';
    out += std::to_string(r.gaps);
    out += '\t';
    out += format_double(r.raw_length_m);
    out += '\t';
    out += format_double(r.matched_length_m);
    out += '\t';
    out += format_double(r.route_length_m);
    out += '\t';
    out += format_double(r.length_variation_rel);
    out += '\t';
    out += format_double(r.median_candidate_dist_m);
    out += '\t';
    out += std::to_string(r.relaxations);
    out += '\t';
    out += format_double(r.voting_s);
    out += '\t';
    out += format_double(r.full_s);
    out += '\t';
    out += r.output_path;
    out += '\n';
  }
  for (const auto &d : batch.dropped) {
    out += "-\t";
    out += d.device_id;
    out += "\tdropped\t";
    out += one_line(d.reason);
    out += '\t';
    out += std::to_string(d.pings);
    out += "\t0\t0\t0\t0\t0\t0\t0\t0\t0\t0\t0\t\n";
  }
  return out;
}

std::string summary_table(const BatchResult &batch) {
  std::vector<double> full_s, voting_s, relax, cand_dist, length_var, route_len;
  for (const auto &r : batch.reports) {
    if (!r.ok) continue;
    full_s.push_back(r.full_s);
    voting_s.push_back(r.voting_s);
    relax.push_back(static_cast<double>(r.relaxations));
    cand_dist.push_back(r.median_candidate_dist_m);
    length_var.push_back(r.length_variation_rel);
    route_len.push_back(r.route_length_m);
  }

  std::string out = "metric\tavg\tstd\tmin\tq1\tmedian\tq3\tmax\n";
  append_stats_row(out, "full_s", full_s);
  append_stats_row(out, "voting_s", voting_s);
  append_stats_row(out, "relaxations", relax);
  append_stats_row(out, "median_candidate_dist_m", cand_dist);
  append_stats_row(out, "length_variation_rel", length_var);
  append_stats_row(out, "route_length_m", route_len);
  return out;
}

}  // namespace ivmm
