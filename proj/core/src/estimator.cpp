#include "dslt/estimator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dslt/kernels.hpp"

namespace dslt {

namespace {

double boundary_weight(int idx, int n) { return (idx == 0 || idx == n) ? 0.5 : 1.0; }

}  // namespace

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kLeaf = 32;
  if (values.size() <= kLeaf) {
    // compensated (Kahan) leaf
    double sum = 0.0, comp = 0.0;
    for (double v : values) {
      const double y = v - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
    return sum;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

DsltSample dslt_pathwise(std::span<const double> path, int n_steps, double dt,
                         const ModelConfig& cfg, std::span<const double> y) {
  cfg.validate();
  if (static_cast<int>(y.size()) != cfg.d)
    throw std::invalid_argument("y must have dimension d");
  if (path.size() != static_cast<std::size_t>(n_steps + 1) * cfg.d)
    throw std::invalid_argument("path span size does not match n_steps and d");
  if (std::abs(n_steps * dt - cfg.t) > 1e-9 * std::max(1.0, cfg.t))
    throw std::invalid_argument("path grid horizon does not match cfg.t");

  const MollifiedKernel kernel(cfg.epsilon, cfg.k);
  const int d = cfg.d;
  const double sign = (cfg.order() % 2 == 0) ? 1.0 : -1.0;
  const double dt2 = dt * dt;

  double sum = 0.0, comp = 0.0;
  std::vector<double> dx(d);
  for (int l = 1; l <= n_steps; ++l) {
    const double wl = boundary_weight(l, n_steps) * dt2;
    const double* bl = path.data() + static_cast<std::size_t>(l) * d;
    for (int j = 0; j < l; ++j) {
      const double* bj = path.data() + static_cast<std::size_t>(j) * d;
      for (int c = 0; c < d; ++c) dx[c] = bl[c] - bj[c] - y[c];
      const double term = wl * boundary_weight(j, n_steps) * kernel(dx);
      const double yk = term - comp;
      const double t = sum + yk;
      comp = (t - sum) - yk;
      sum = t;
    }
  }

  DsltSample out;
  out.value = sign * sum;
  out.n_steps = n_steps;
  out.y.assign(y.begin(), y.end());
  return out;
}

DsltSample dslt_pathwise(const PathBatch& batch, int path_index, const ModelConfig& cfg,
                         std::span<const double> y) {
  if (path_index < 0 || path_index >= batch.n_paths)
    throw std::invalid_argument("path index out of range");
  if (batch.d != cfg.d) throw std::invalid_argument("batch dimension does not match cfg.d");
  return dslt_pathwise(batch.path(path_index), batch.n_steps, batch.dt, cfg, y);
}

namespace {

struct PairValues {
  double plus = 0.0;
  double minus = 0.0;
};

// Values of the functional on a path and its negation. At y = 0 the negated
// path gives exactly (-1)^|k| times the value (sign covariance), so the second
// evaluation is free there.
std::vector<PairValues> sample_pair_values(const ModelConfig& cfg, std::span<const double> y,
                                           int n_pairs, int n_steps, std::uint64_t seed,
                                           bool need_minus) {
  const double dt = cfg.t / n_steps;
  const FbmSampler sampler(cfg.H, n_steps, dt);
  const std::size_t stride = static_cast<std::size_t>(n_steps + 1) * cfg.d;
  bool y_zero = true;
  for (double yi : y) y_zero = y_zero && (yi == 0.0);
  const double parity = (cfg.order() % 2 == 0) ? 1.0 : -1.0;

  std::vector<PairValues> values(n_pairs);
#pragma omp parallel
  {
    std::vector<double> path(stride);
    std::vector<double> neg(need_minus && !y_zero ? stride : 0);
#pragma omp for schedule(dynamic, 4)
    for (int i = 0; i < n_pairs; ++i) {
      sampler.sample_path(seed, static_cast<std::uint64_t>(i), cfg.d, path);
      const double vp = dslt_pathwise(path, n_steps, dt, cfg, y).value;
      double vm = 0.0;
      if (need_minus) {
        if (y_zero) {
          vm = parity * vp;
        } else {
          for (std::size_t j = 0; j < stride; ++j) neg[j] = -path[j];
          vm = dslt_pathwise(neg, n_steps, dt, cfg, y).value;
        }
      }
      values[i] = PairValues{vp, vm};
    }
  }
  return values;
}

}  // namespace

McEstimate mc_moment(const ModelConfig& cfg, std::span<const double> y, int order,
                     int n_paths, int n_steps, std::uint64_t seed,
                     const McMomentOptions& opt) {
  cfg.validate();
  if (order < 1 || order > 6)
    throw std::invalid_argument("moment order must be in [1,6], got " + std::to_string(order));
  if (n_paths < 2) throw std::invalid_argument("n_paths must be >= 2");
  if (opt.antithetic && n_paths % 2 != 0)
    throw std::invalid_argument("antithetic sampling needs an even n_paths");

  const int n_pairs = opt.antithetic ? n_paths / 2 : n_paths;
  const auto pairs = sample_pair_values(cfg, y, n_pairs, n_steps, seed, opt.antithetic);

  std::vector<double> stats(n_pairs);
  for (int i = 0; i < n_pairs; ++i) {
    double m = std::pow(pairs[i].plus, order);
    if (opt.antithetic) m = 0.5 * (m + std::pow(pairs[i].minus, order));
    stats[i] = m;
  }

  McEstimate out;
  out.n_samples = n_pairs;
  out.seed = seed;
  out.mean = pairwise_sum(stats) / n_pairs;
  std::vector<double> sq(n_pairs);
  for (int i = 0; i < n_pairs; ++i) {
    const double dev = stats[i] - out.mean;
    sq[i] = dev * dev;
  }
  out.variance = (n_pairs > 1) ? pairwise_sum(sq) / (n_pairs - 1) : 0.0;
  out.std_error = std::sqrt(out.variance / n_pairs);
  return out;
}

std::vector<double> dslt_samples(const ModelConfig& cfg, std::span<const double> y,
                                 int n_samples, int n_steps, std::uint64_t seed) {
  cfg.validate();
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  const auto pairs = sample_pair_values(cfg, y, n_samples, n_steps, seed, false);
  std::vector<double> out(n_samples);
  for (int i = 0; i < n_samples; ++i) out[i] = pairs[i].plus;
  return out;
}

}  // namespace dslt
