#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace dslt {

// Full problem statement: Hurst index, dimension, derivative multi-index,
// horizon and mollification parameter.
struct ModelConfig {
  double H = 0.5;
  int d = 1;
  std::vector<int> k = {1};  // per-coordinate derivative orders, size d
  double t = 1.0;
  double epsilon = 0.1;

  int order() const;      // |k| = sum of entries
  int odd_count() const;  // # = number of odd entries

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// Covariance of one coordinate of fBm: (t^2H + s^2H - |t-s|^2H) / 2.
double fbm_covariance(double s, double t, double H);

// Autocovariance of unit-spacing fractional Gaussian noise at integer lag.
double fgn_autocovariance(std::int64_t lag, double H);

struct PathBatch {
  int n_paths = 0;
  int n_steps = 0;
  int d = 1;
  double dt = 0.0;
  double H = 0.5;
  std::uint64_t seed = 0;
  // layout: [path][node][coord], node 0 is the origin
  std::vector<double> values;

  double at(int path, int node, int coord) const {
    return values[(static_cast<std::size_t>(path) * (n_steps + 1) + node) * d + coord];
  }
  std::span<const double> path(int p) const {
    return std::span<const double>(values).subspan(
        static_cast<std::size_t>(p) * (n_steps + 1) * d,
        static_cast<std::size_t>(n_steps + 1) * d);
  }
};

enum class SamplerMethod { Auto, Circulant, Cholesky };

// Exact sampler for d-dimensional fBm on the uniform grid {j*t/n_steps}.
// Increments come from circulant embedding of the fGn covariance (FFT,
// O(N log N)); if the embedding has an eigenvalue below -1e-10 the sampler
// falls back to a Cholesky factor of the full increment covariance.
// sample_path() is reentrant: path `i` is drawn from substream (seed, i).
class FbmSampler {
 public:
  FbmSampler(double H, int n_steps, double dt, SamplerMethod method = SamplerMethod::Auto);
  ~FbmSampler();
  FbmSampler(const FbmSampler&) = delete;
  FbmSampler& operator=(const FbmSampler&) = delete;

  // Writes (n_steps+1)*d values, layout [node][coord]; node 0 = 0.
  void sample_path(std::uint64_t seed, std::uint64_t path_index, int d,
                   std::span<double> out) const;

  SamplerMethod active_method() const;
  int n_steps() const;
  double dt() const;
  double hurst() const;

  // Diagnostics for the factor-reconstruction tests.
  // Circulant: embedding eigenvalues (size 2*n_steps); reconstructing the
  // increment covariance from them must reproduce fgn_autocovariance * dt^2H.
  const std::vector<double>& embedding_eigenvalues() const;
  // Increment covariance Cov(X_j, X_k) implied by the active factorization.
  double factor_increment_covariance(int j, int k) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

PathBatch sample_paths(const ModelConfig& cfg, int n_steps, int n_paths,
                       std::uint64_t seed, SamplerMethod method = SamplerMethod::Auto);

// Empirical two-sided local-nondeterminism ratios
//   Var(sum x_i (B_{s_i} - B_{s_{i-1}})) / sum x_i^2 (s_i - s_{i-1})^2H
// over random partitions of (0,1] and random coefficients. The variance in
// the numerator is computed exactly from fbm_covariance, not simulated.
struct NondeterminismReport {
  int n = 0;
  double H = 0.5;
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  int n_trials = 0;
};

NondeterminismReport nondeterminism_ratios(double H, int n, int n_trials, std::uint64_t seed);

}  // namespace dslt
