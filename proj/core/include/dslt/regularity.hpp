#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dslt/fbm.hpp"

namespace dslt {

enum class IncrementVariable { Time, Space };

std::string to_string(IncrementVariable v);

struct HolderFit {
  std::string variable;  // "time" or "space"
  std::vector<double> lags;
  int moment_order = 2;
  std::vector<double> moments;  // per-lag Monte Carlo moment of the increment
  double slope = 0.0;           // exponent estimate: log-log slope / order
  double r_squared = 0.0;
};

// Least-squares fit of log E[(Delta)^n] against log(lag); the returned slope
// is divided by the moment order, so it estimates the Hölder exponent.
HolderFit holder_fit(const std::vector<std::vector<double>>& samples,
                     std::span<const double> lags, int order, IncrementVariable variable);

// For each path, the functional differences ahat(t + h) - ahat(t) (time) or
// ahat_t(y + h e_1) - ahat_t(y) (space) at the requested lags, re-using the
// same path so the differences are coherent. Lags snap to the grid for the
// time variable; pass `snapped` to observe the effective values.
std::vector<std::vector<double>> increment_samples(const ModelConfig& cfg,
                                                   IncrementVariable variable,
                                                   std::span<const double> lags,
                                                   int n_paths, int n_steps,
                                                   std::uint64_t seed,
                                                   std::vector<double>* snapped = nullptr);

}  // namespace dslt
