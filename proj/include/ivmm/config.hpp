#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ivmm/stmatch.hpp"
#include "ivmm/voting.hpp"

namespace ivmm {

/// Matching and pipeline settings. File values load first, command-line
/// flags override afterwards.
struct Config {
  double alpha_m = 100.0;  ///< candidate search radius
  int k = 5;               ///< candidates kept per ping
  double mu_m = 0.0;       ///< observation noise mean
  double sigma_m = 20.0;   ///< observation noise standard deviation
  double beta_m = 2000.0;  ///< vote distance-weight scale
  std::optional<double> maxdist_m;  ///< voting window radius; empty = unbounded
  int minpings = 2;
  double split_gap_s = 300.0;       ///< trajectory split threshold
  double noise_sigma_m = 10.0;      ///< synthetic positional noise
  int workers = 1;
  std::uint64_t seed = 42;
  std::string asset_path;
  std::string trajectories_path;
  std::string out_dir;

  StParams st_params() const {
    StParams p;
    p.mu_m = mu_m;
    p.sigma_m = sigma_m;
    return p;
  }

  VotingParams voting_params() const {
    VotingParams p;
    p.beta_m = beta_m;
    p.maxdist_m = maxdist_m;
    return p;
  }
};

/**
 * Parses flat key=value lines. Blank lines and lines starting with # are
 * skipped; values may quote nothing (everything after the first = belongs to
 * the value, trimmed). Unknown keys and unparseable values raise ConfigError
 * with the offending line number. maxdist accepts a number or "unbounded".
 */
Config parse_config_text(const std::string &text, Config base = Config{});

/// Reads and parses a config file; ConfigError when unreadable.
Config load_config(const std::string &path, Config base = Config{});

/// Range checks every numeric field; throws ConfigError on violation.
void validate_config(const Config &cfg);

}  // namespace ivmm
