#include "ivmm/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ivmm/errors.hpp"

namespace ivmm {

namespace {

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(int line, const std::string &what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

double to_double(const std::string &v, int line) {
  errno = 0;
  char *end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size() || v.empty() || errno == ERANGE) {
    bad(line, "expected a number, got '" + v + "'");
  }
  return x;
}

int to_int(const std::string &v, int line) {
  const double x = to_double(v, line);
  const int i = static_cast<int>(x);
  if (static_cast<double>(i) != x) bad(line, "expected an integer, got '" + v + "'");
  return i;
}

std::uint64_t to_u64(const std::string &v, int line) {
  errno = 0;
  char *end = nullptr;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || v.empty() || errno == ERANGE) {
    bad(line, "expected an unsigned integer, got '" + v + "'");
  }
  return x;
}

}  // namespace

Config parse_config_text(const std::string &text, Config base) {
  Config cfg = std::move(base);
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) bad(line, "expected key=value");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (key.empty()) bad(line, "empty key");

    if (key == "alpha") {
      cfg.alpha_m = to_double(val, line);
    } else if (key == "k") {
      cfg.k = to_int(val, line);
    } else if (key == "mu") {
      cfg.mu_m = to_double(val, line);
    } else if (key == "sigma") {
      cfg.sigma_m = to_double(val, line);
    } else if (key == "beta") {
      cfg.beta_m = to_double(val, line);
    } else if (key == "maxdist") {
      if (val == "unbounded") {
        cfg.maxdist_m.reset();
      } else {
        cfg.maxdist_m = to_double(val, line);
      }
    } else if (key == "minpings") {
      cfg.minpings = to_int(val, line);
    } else if (key == "split_gap_s") {
      cfg.split_gap_s = to_double(val, line);
    } else if (key == "noise_sigma_m") {
      cfg.noise_sigma_m = to_double(val, line);
    } else if (key == "workers") {
      cfg.workers = to_int(val, line);
    } else if (key == "seed") {
      cfg.seed = to_u64(val, line);
    } else if (key == "asset") {
      cfg.asset_path = val;
    } else if (key == "trajectories") {
      cfg.trajectories_path = val;
    } else if (key == "out") {
      cfg.out_dir = val;
    } else {
      bad(line, "unknown key '" + key + "'");
    }
  }
  return cfg;
}

Config load_config(const std::string &path, Config base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), std::move(base));
}

void validate_config(const Config &cfg) {
  if (cfg.alpha_m <= 0.0) throw ConfigError("alpha must be positive");
  if (cfg.k < 1) throw ConfigError("k must be at least 1");
  if (cfg.sigma_m <= 0.0) throw ConfigError("sigma must be positive");
  if (cfg.beta_m <= 0.0) throw ConfigError("beta must be positive");
  if (cfg.maxdist_m && *cfg.maxdist_m <= 0.0) {
    throw ConfigError("maxdist must be positive or 'unbounded'");
  }
  if (cfg.minpings < 2) throw ConfigError("minpings must be at least 2");
  if (cfg.split_gap_s <= 0.0) throw ConfigError("split_gap_s must be positive");
  if (cfg.noise_sigma_m < 0.0) throw ConfigError("noise_sigma_m must not be negative");
  if (cfg.workers < 1) throw ConfigError("workers must be at least 1");
}

}  // namespace ivmm
