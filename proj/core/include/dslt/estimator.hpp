#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dslt/fbm.hpp"

namespace dslt {

struct DsltSample {
  double value = 0.0;
  int n_steps = 0;
  std::vector<double> y;
};

// One realization of the mollified DSLT at offset y: the trapezoidal Riemann
// sum of (-1)^|k| f_eps^(k)(B_s - B_r - y) over the open simplex 0 < r < s < t
// (grid cells with l == j are excluded, boundary nodes carry weight 1/2).
// `path` is one path from a batch, layout [node][coord].
DsltSample dslt_pathwise(std::span<const double> path, int n_steps, double dt,
                         const ModelConfig& cfg, std::span<const double> y);

DsltSample dslt_pathwise(const PathBatch& batch, int path_index, const ModelConfig& cfg,
                         std::span<const double> y);

struct McEstimate {
  double mean = 0.0;
  double variance = 0.0;   // sample variance of the independent statistics
  double std_error = 0.0;  // sqrt(variance / n_samples)
  std::int64_t n_samples = 0;  // independent (antithetic-collapsed) samples
  std::uint64_t seed = 0;
};

struct McMomentOptions {
  bool antithetic = true;  // pair every path with its negation
};

// Monte Carlo estimate of E[(ahat^(k)_{t,eps}(y))^order]. With antithetic
// pairing each independent sample is the average of the pair statistics, so
// odd-symmetric error modes cancel exactly. Accumulation is a fixed-order
// pairwise reduction: results do not depend on the thread count.
McEstimate mc_moment(const ModelConfig& cfg, std::span<const double> y, int order,
                     int n_paths, int n_steps, std::uint64_t seed,
                     const McMomentOptions& opt = {});

// Per-sample values behind mc_moment (one per independent path or antithetic
// pair), for CSV emission and distributional diagnostics.
std::vector<double> dslt_samples(const ModelConfig& cfg, std::span<const double> y,
                                 int n_samples, int n_steps, std::uint64_t seed);

// Deterministic pairwise (tree) summation with compensated leaves.
double pairwise_sum(std::span<const double> values);

}  // namespace dslt
