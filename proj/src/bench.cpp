#include "ivmm/bench.hpp"

#include <cmath>

#include "ivmm/errors.hpp"
#include "ivmm/fileio.hpp"
#include "ivmm/metrics.hpp"

namespace ivmm {

std::vector<BenchSetting> default_bench_settings() {
  return {{"maxdist-1000", 1000.0},
          {"maxdist-2500", 2500.0},
          {"maxdist-4000", 4000.0},
          {"maxdist-5500", 5500.0},
          {"unbounded", std::nullopt}};
}

double ols_slope(const std::vector<double> &x, const std::vector<double> &y) {
  if (x.size() != y.size()) throw Error("slope inputs differ in length");
  if (x.size() < 2) throw EmptyInput("slope needs at least two points");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());

  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  if (den == 0.0) throw Error("slope undefined: all x values identical");
  return num / den;
}

BenchResult run_bench(const RoadNetwork &net,
                      const std::vector<Trajectory> &trajectories,
                      const Config &base,
                      const std::vector<BenchSetting> &settings) {
  BenchResult result;
  result.runs.reserve(settings.size());

  for (const auto &setting : settings) {
    Config cfg = base;
    cfg.maxdist_m = setting.maxdist_m;
    cfg.workers = 1;
    cfg.out_dir.clear();

    const BatchResult batch = run_batch(net, trajectories, cfg);

    BenchRun run;
    run.label = setting.label;
    run.maxdist_m = setting.maxdist_m;
    for (const auto &report : batch.reports) {
      if (!report.ok) continue;
      run.pings.push_back(report.pings);
      run.voting_s.push_back(report.voting_s);
      run.full_s.push_back(report.full_s);
      run.relaxations.push_back(static_cast<double>(report.relaxations));
    }

    std::vector<double> log_n, log_t, log_r;
    for (std::size_t i = 0; i < run.pings.size(); ++i) {
      if (run.voting_s[i] <= 0.0 || run.relaxations[i] <= 0.0) continue;
      log_n.push_back(std::log(static_cast<double>(run.pings[i])));
      log_t.push_back(std::log(run.voting_s[i]));
      log_r.push_back(std::log(run.relaxations[i]));
    }
    bool has_spread = false;
    for (double v : log_n) has_spread = has_spread || v != log_n.front();
    if (log_n.size() >= 2 && has_spread) {
      run.slope_voting_time = ols_slope(log_n, log_t);
      run.slope_relaxations = ols_slope(log_n, log_r);
    }
    result.runs.push_back(std::move(run));
  }
  return result;
}

namespace {

void append_phase_row(std::string &out, const std::string &label,
                      const char *phase, const std::vector<double> &values) {
  if (values.empty()) return;
  const SummaryStats s = summarize(values);
  out += label;
  out += '\t';
  out += phase;
  for (double v : {s.mean, s.std_dev, s.min, s.q1, s.median, s.q3, s.max}) {
    out += '\t';
    out += format_double(v);
  }
  out += '\n';
}

}  // namespace

std::string bench_table(const BenchResult &result) {
  std::string out = "setting\tphase\tavg\tstd\tmin\tq1\tmedian\tq3\tmax\n";
  for (const auto &run : result.runs) {
    append_phase_row(out, run.label, "full", run.full_s);
    append_phase_row(out, run.label, "voting", run.voting_s);
    append_phase_row(out, run.label, "relaxations", run.relaxations);
  }
  return out;
}

std::string slope_table(const BenchResult &result) {
  std::string out = "setting\tslope_voting_time\tslope_relaxations\tpoints\n";
  for (const auto &run : result.runs) {
    out += run.label;
    out += '\t';
    out += format_double(run.slope_voting_time);
    out += '\t';
    out += format_double(run.slope_relaxations);
    out += '\t';
    out += std::to_string(run.pings.size());
    out += '\n';
  }
  return out;
}

}  // namespace ivmm
