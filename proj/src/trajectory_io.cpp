#include "ivmm/trajectory_io.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "ivmm/errors.hpp"
#include "ivmm/fileio.hpp"

namespace ivmm {

namespace {

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string &line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

double row_double(const std::string &field, int line, const char *what) {
  errno = 0;
  char *end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (field.empty() || end != field.c_str() + field.size() || errno == ERANGE) {
    throw MalformedRow("line " + std::to_string(line) + ": bad " + what +
                       " value '" + field + "'");
  }
  return v;
}

struct RawRow {
  double lat = 0.0;
  double lon = 0.0;
  double t = 0.0;
  std::optional<double> speed;
  std::optional<double> accuracy;
};

}  // namespace

LoadResult parse_trajectories_text(const std::string &text, double split_gap_s,
                                   int minpings) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw MalformedInput("trajectory file is empty");
  }

  const auto header = split_csv(line);
  static const char *const kColumns[] = {"device_id", "lat", "lon",
                                         "timestamp_s", "speed_mps",
                                         "accuracy_m"};
  if (header.size() < 4 || header.size() > 6) {
    throw MalformedInput("line 1: expected 4 to 6 header columns, got " +
                         std::to_string(header.size()));
  }
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] != kColumns[i]) {
      throw MalformedInput("line 1: header column " + std::to_string(i + 1) +
                           " must be '" + kColumns[i] + "', got '" + header[i] +
                           "'");
    }
  }
  const std::size_t ncols = header.size();

  std::vector<std::pair<std::string, std::vector<RawRow>>> devices;
  std::unordered_map<std::string, std::size_t> device_slot;

  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != ncols) {
      throw MalformedRow("line " + std::to_string(lineno) + ": expected " +
                         std::to_string(ncols) + " fields, got " +
                         std::to_string(fields.size()));
    }
    if (fields[0].empty()) {
      throw MalformedRow("line " + std::to_string(lineno) + ": empty device_id");
    }

    RawRow row;
    row.lat = row_double(fields[1], lineno, "lat");
    row.lon = row_double(fields[2], lineno, "lon");
    row.t = row_double(fields[3], lineno, "timestamp_s");
    if (ncols > 4 && !fields[4].empty()) {
      row.speed = row_double(fields[4], lineno, "speed_mps");
    }
    if (ncols > 5 && !fields[5].empty()) {
      row.accuracy = row_double(fields[5], lineno, "accuracy_m");
    }

    auto [it, fresh] = device_slot.try_emplace(fields[0], devices.size());
    if (fresh) devices.emplace_back(fields[0], std::vector<RawRow>{});
    devices[it->second].second.push_back(row);
  }

  LoadResult result;
  for (auto &[device_id, rows] : devices) {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const RawRow &a, const RawRow &b) { return a.t < b.t; });
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i].t == rows[i - 1].t) {
        throw NonMonotonicTimestamps("device " + device_id +
                                     " has two fixes at timestamp " +
                                     format_double(rows[i].t));
      }
    }

    std::size_t begin = 0;
    for (std::size_t i = 1; i <= rows.size(); ++i) {
      const bool over_gap =
          i < rows.size() && rows[i].t - rows[i - 1].t > split_gap_s;
      if (i < rows.size() && !over_gap) continue;

      const auto count = static_cast<int>(i - begin);
      if (count < minpings) {
        result.dropped.push_back({device_id, count,
                                  "fewer than " + std::to_string(minpings) +
                                      " pings"});
      } else {
        Trajectory traj;
        traj.device_id = device_id;
        traj.pings.reserve(count);
        for (std::size_t j = begin; j < i; ++j) {
          Ping p;
          p.index = static_cast<int>(j - begin);
          p.point = GeoPoint{rows[j].lat, rows[j].lon};
          p.timestamp_s = rows[j].t;
          p.speed_mps = rows[j].speed;
          p.accuracy_m = rows[j].accuracy;
          traj.pings.push_back(p);
        }
        result.trajectories.push_back(std::move(traj));
      }
      begin = i;
    }
  }
  return result;
}

LoadResult load_trajectories(const std::string &path, double split_gap_s,
                             int minpings) {
  return parse_trajectories_text(read_file(path), split_gap_s, minpings);
}

std::string serialize_trajectories(const std::vector<Trajectory> &trajectories) {
  bool any_speed = false;
  bool any_accuracy = false;
  for (const auto &traj : trajectories) {
    for (const auto &p : traj.pings) {
      any_speed = any_speed || p.speed_mps.has_value();
      any_accuracy = any_accuracy || p.accuracy_m.has_value();
    }
  }
  // Column layout is positional, so accuracy forces the speed column too.
  any_speed = any_speed || any_accuracy;

  std::string out = "device_id,lat,lon,timestamp_s";
  if (any_speed) out += ",speed_mps";
  if (any_accuracy) out += ",accuracy_m";
  out += '\n';

  for (const auto &traj : trajectories) {
    for (const auto &p : traj.pings) {
      out += traj.device_id;
      out += ',';
      out += format_double(p.point.lat);
      out += ',';
      out += format_double(p.point.lon);
      out += ',';
      out += format_double(p.timestamp_s);
      if (any_speed) {
        out += ',';
        if (p.speed_mps) out += format_double(*p.speed_mps);
      }
      if (any_accuracy) {
        out += ',';
        if (p.accuracy_m) out += format_double(*p.accuracy_m);
      }
      out += '\n';
    }
  }
  return out;
}

void write_trajectories(const std::string &path,
                        const std::vector<Trajectory> &trajectories) {
  write_file_atomic(path, serialize_trajectories(trajectories));
}

}  // namespace ivmm
