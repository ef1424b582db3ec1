#include "dslt/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dslt/estimator.hpp"
#include "dslt/kernels.hpp"

namespace dslt {

std::string to_string(IncrementVariable v) {
  return v == IncrementVariable::Time ? "time" : "space";
}

namespace {

// ahat over the sub-triangles {0 < r < s < m*dt} for every horizon index in
// `indices` (ascending), one O(n^2) sweep per path. The right-edge trapezoid
// factor belongs to the current horizon, so the l = m row enters with half
// weight via the correction term.
std::vector<double> dslt_at_horizons(std::span<const double> path, double dt,
                                     const ModelConfig& cfg, std::span<const int> indices) {
  const MollifiedKernel kernel(cfg.epsilon, cfg.k);
  const int d = cfg.d;
  const double sign = (cfg.order() % 2 == 0) ? 1.0 : -1.0;
  const double dt2 = dt * dt;
  const int max_idx = indices.back();

  std::vector<double> out(indices.size());
  std::vector<double> dx(d);
  double cum = 0.0, comp = 0.0;
  std::size_t next = 0;
  for (int l = 1; l <= max_idx && next < indices.size(); ++l) {
    const double* bl = path.data() + static_cast<std::size_t>(l) * d;
    double row = 0.0, row_comp = 0.0;
    for (int j = 0; j < l; ++j) {
      const double* bj = path.data() + static_cast<std::size_t>(j) * d;
      for (int c = 0; c < d; ++c) dx[c] = bl[c] - bj[c];
      const double term = (j == 0 ? 0.5 : 1.0) * dt2 * kernel(dx);
      const double y = term - row_comp;
      const double t = row + y;
      row_comp = (t - row) - y;
      row = t;
    }
    const double y = row - comp;
    const double t = cum + y;
    comp = (t - cum) - y;
    cum = t;
    while (next < indices.size() && indices[next] == l) {
      out[next] = sign * (cum - 0.5 * row);
      ++next;
    }
  }
  // horizon index 0 (empty triangle) and any duplicates of it
  for (std::size_t i = 0; i < indices.size(); ++i)
    if (indices[i] == 0) out[i] = 0.0;
  return out;
}

}  // namespace

std::vector<std::vector<double>> increment_samples(const ModelConfig& cfg,
                                                   IncrementVariable variable,
                                                   std::span<const double> lags,
                                                   int n_paths, int n_steps,
                                                   std::uint64_t seed,
                                                   std::vector<double>* snapped) {
  cfg.validate();
  if (lags.empty()) throw std::invalid_argument("lags must be nonempty");
  for (std::size_t i = 0; i < lags.size(); ++i) {
    if (!(lags[i] > 0.0)) throw std::invalid_argument("lags must be positive");
    if (i > 0 && !(lags[i] > lags[i - 1]))
      throw std::invalid_argument("lags must be strictly increasing");
  }
  if (n_paths < 1) throw std::invalid_argument("n_paths must be >= 1");
  if (n_steps < 2) throw std::invalid_argument("n_steps must be >= 2");

  const double dt = cfg.t / n_steps;
  std::vector<std::vector<double>> samples(n_paths, std::vector<double>(lags.size()));

  if (variable == IncrementVariable::Time) {
    std::vector<int> lag_idx(lags.size());
    for (std::size_t i = 0; i < lags.size(); ++i) {
      lag_idx[i] = std::max<int>(1, static_cast<int>(std::llround(lags[i] / dt)));
      if (i > 0 && lag_idx[i] <= lag_idx[i - 1])
        throw std::invalid_argument("time lags collapse on this grid; refine n_steps");
    }
    if (snapped) {
      snapped->resize(lags.size());
      for (std::size_t i = 0; i < lags.size(); ++i) (*snapped)[i] = lag_idx[i] * dt;
    }

    const int n_total = n_steps + lag_idx.back();
    std::vector<int> horizons{n_steps};
    for (int li : lag_idx) horizons.push_back(n_steps + li);

    const FbmSampler sampler(cfg.H, n_total, dt);
    const std::size_t stride = static_cast<std::size_t>(n_total + 1) * cfg.d;
#pragma omp parallel
    {
      std::vector<double> path(stride);
#pragma omp for schedule(dynamic, 4)
      for (int p = 0; p < n_paths; ++p) {
        sampler.sample_path(seed, static_cast<std::uint64_t>(p), cfg.d, path);
        const std::vector<double> alphas = dslt_at_horizons(path, dt, cfg, horizons);
        for (std::size_t i = 0; i < lags.size(); ++i)
          samples[p][i] = alphas[i + 1] - alphas[0];
      }
    }
  } else {
    if (snapped) snapped->assign(lags.begin(), lags.end());
    const FbmSampler sampler(cfg.H, n_steps, dt);
    const std::size_t stride = static_cast<std::size_t>(n_steps + 1) * cfg.d;
#pragma omp parallel
    {
      std::vector<double> path(stride);
      std::vector<double> y(cfg.d, 0.0);
#pragma omp for schedule(dynamic, 4)
      for (int p = 0; p < n_paths; ++p) {
        sampler.sample_path(seed, static_cast<std::uint64_t>(p), cfg.d, path);
        std::fill(y.begin(), y.end(), 0.0);
        const double base = dslt_pathwise(path, n_steps, dt, cfg, y).value;
        for (std::size_t i = 0; i < lags.size(); ++i) {
          y[0] = lags[i];  // first coordinate axis; the functional is isotropic
          samples[p][i] = dslt_pathwise(path, n_steps, dt, cfg, y).value - base;
        }
      }
    }
  }
  return samples;
}

HolderFit holder_fit(const std::vector<std::vector<double>>& samples,
                     std::span<const double> lags, int order, IncrementVariable variable) {
  if (lags.size() < 4) throw std::invalid_argument("holder_fit needs at least 4 lags");
  if (samples.size() < 100) throw std::invalid_argument("holder_fit needs at least 100 paths");
  if (order < 1) throw std::invalid_argument("moment order must be >= 1");
  for (const auto& row : samples)
    if (row.size() != lags.size())
      throw std::invalid_argument("sample row width does not match lag count");

  HolderFit fit;
  fit.variable = to_string(variable);
  fit.lags.assign(lags.begin(), lags.end());
  fit.moment_order = order;

  const std::size_t n_paths = samples.size();
  fit.moments.resize(lags.size());
  std::vector<double> tmp(n_paths);
  for (std::size_t j = 0; j < lags.size(); ++j) {
    for (std::size_t p = 0; p < n_paths; ++p) tmp[p] = std::pow(samples[p][j], order);
    fit.moments[j] = pairwise_sum(tmp) / static_cast<double>(n_paths);
    if (!(fit.moments[j] > 0.0))
      throw std::runtime_error("degenerate moment at lag " + std::to_string(lags[j]) +
                               ": nonpositive value " + std::to_string(fit.moments[j]));
  }

  // least squares of log(moment) on log(lag)
  const std::size_t n = lags.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double x = std::log(lags[j]);
    const double y = std::log(fit.moments[j]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::runtime_error("degenerate lag design");
  const double slope_raw = (n * sxy - sx * sy) / denom;
  fit.slope = slope_raw / order;

  const double mean_y = sy / n;
  double ss_res = 0.0, ss_tot = 0.0;
  const double intercept = (sy - slope_raw * sx) / n;
  for (std::size_t j = 0; j < n; ++j) {
    const double x = std::log(lags[j]);
    const double y = std::log(fit.moments[j]);
    const double yhat = intercept + slope_raw * x;
    ss_res += (y - yhat) * (y - yhat);
    ss_tot += (y - mean_y) * (y - mean_y);
  }
  fit.r_squared = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace dslt
