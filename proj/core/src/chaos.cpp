#include "dslt/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dslt/estimator.hpp"
#include "dslt/quadrature.hpp"

namespace dslt {

double beta_q(int q) {
  if (q < 1) throw std::invalid_argument("q must be >= 1");
  return 1.0 / (std::pow(2.0, q - 0.5) * std::tgamma(static_cast<double>(q)) * std::sqrt(M_PI));
}

double mu_chaos(double x, double u1, double u2, double H) {
  if (x < 0.0 || u1 < 0.0 || u2 < 0.0)
    throw std::invalid_argument("mu_chaos arguments must be nonnegative");
  const double p = 2.0 * H;
  return 0.5 * (std::pow(x + u2, p) - std::pow(std::abs(x + u2 - u1), p) - std::pow(x, p) +
                std::pow(std::abs(x - u1), p));
}

double g_q(int q, double eps, double x, double u1, double u2, double H) {
  if (q < 1) throw std::invalid_argument("q must be >= 1");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
  const double p = 2.0 * H;
  const double mu = mu_chaos(x, u1, u2, H);
  return std::pow(eps + std::pow(u1, p), -0.5 - q) *
         std::pow(eps + std::pow(u2, p), -0.5 - q) * std::pow(mu, 2 * q - 1);
}

namespace {

// Gap coordinates -> (x, u1, u2) of the pairing G_{eps, r2-r1}(s1-r1, s2-r2)
// for each interleaving, r1 <= r2 labeling.
void gaps_to_pairing(RegionCase region, double a, double b, double c, double& x,
                     double& u1, double& u2) {
  switch (region) {
    case RegionCase::D1: x = a; u1 = a + b; u2 = b + c; break;
    case RegionCase::D2: x = a; u1 = a + b + c; u2 = b; break;
    case RegionCase::D3: x = a + b; u1 = a; u2 = c; break;
  }
}

QuadResult chaos_region_quadrature(RegionCase region, double eps, double t, double H,
                                   double rel_tol, std::size_t budget) {
  const double gamma = 3.0;
  const double b1 = beta_q(1);
  const double norm = b1 * b1;

  auto integrand = [&](double u, double v, double w) -> double {
    const double a = t * std::pow(u, gamma);
    const double b = t * std::pow(v, gamma);
    const double c = t * std::pow(w, gamma);
    const double base = t - a - b - c;
    if (base <= 0.0) return 0.0;
    const double jac = t * t * t * gamma * gamma * gamma * std::pow(u * v * w, gamma - 1.0);
    double x, u1, u2;
    gaps_to_pairing(region, a, b, c, x, u1, u2);
    return norm * base * g_q(1, eps, x, u1, u2, H) * jac;
  };

  QuadOptions qopt;
  qopt.rel_tol = rel_tol;
  qopt.max_evals = budget;
  const CubatureResult res = integrate_unit_cube3(integrand, qopt);

  QuadResult out;
  out.value = res.value;
  out.abs_error_estimate = res.abs_error;
  out.n_evals = res.n_evals;
  out.region = to_string(region);
  return out;
}

}  // namespace

FirstChaosResult first_chaos_variance(double eps, double t, double H, double rel_tol,
                                      std::size_t max_evals) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
  if (!(t >= 0.0)) throw std::invalid_argument("t must be >= 0");
  FirstChaosResult out;
  if (t == 0.0) {
    out.d1.region = "D1";
    out.d2.region = "D2";
    out.d3.region = "D3";
    out.total.region = "total";
    out.converged = true;
    return out;
  }
  const std::size_t budget = max_evals / 3;
  out.d1 = chaos_region_quadrature(RegionCase::D1, eps, t, H, rel_tol, budget);
  out.d2 = chaos_region_quadrature(RegionCase::D2, eps, t, H, rel_tol, budget);
  out.d3 = chaos_region_quadrature(RegionCase::D3, eps, t, H, rel_tol, budget);
  out.total.region = "total";
  out.total.value = 2.0 * (out.d1.value + out.d2.value + out.d3.value);
  out.total.abs_error_estimate =
      2.0 * (out.d1.abs_error_estimate + out.d2.abs_error_estimate +
             out.d3.abs_error_estimate);
  out.total.n_evals = out.d1.n_evals + out.d2.n_evals + out.d3.n_evals;
  out.converged = out.total.abs_error_estimate <=
                  std::max(rel_tol * std::abs(out.total.value), 1e-300);
  return out;
}

double sigma_squared(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("t must be > 0");
  // B(2, 1/3) = 1 / ((1/3)(1/3 + 1)) = 9/4
  return std::pow(t, 4.0 / 3.0) * (9.0 / 4.0) / (8.0 * M_PI);
}

double sigma_squared_loggamma(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("t must be > 0");
  const double log_beta = std::lgamma(2.0) + std::lgamma(1.0 / 3.0) - std::lgamma(7.0 / 3.0);
  return std::pow(t, 4.0 / 3.0) * std::exp(log_beta) / (8.0 * M_PI);
}

double limit_integral_check(double M) {
  if (!(M > 1.0)) throw std::invalid_argument("M must be > 1");
  auto f = [](double a) { return a * std::pow(1.0 + std::pow(a, 4.0 / 3.0), -1.5); };
  double j = integrate_1d(f, 0.0, 1.0, 1e-12);
  // log substitution keeps the adaptive rule cheap out to huge M
  j += integrate_1d([&](double y) { const double a = std::exp(y); return a * f(a); },
                    0.0, std::log(M), 1e-12);
  const double log_inv_eps = (4.0 / 3.0) * std::log(M);
  const double r = j / log_inv_eps;
  return r * r;
}

CltReport clt_experiment(double t, std::span<const double> eps_ladder, int n_paths,
                         int n_steps, std::uint64_t seed, const CltOptions& opt) {
  if (eps_ladder.empty()) throw std::invalid_argument("eps ladder must be nonempty");
  for (std::size_t i = 1; i < eps_ladder.size(); ++i)
    if (!(eps_ladder[i] < eps_ladder[i - 1]))
      throw std::invalid_argument("eps ladder must be strictly decreasing");
  if (n_paths < 2) throw std::invalid_argument("n_paths must be >= 2");
  if (opt.antithetic && n_paths % 2 != 0)
    throw std::invalid_argument("antithetic sampling needs an even n_paths");

  ModelConfig cfg;
  cfg.H = 2.0 / 3.0;
  cfg.d = 1;
  cfg.k = {1};
  cfg.t = t;

  CltReport report;
  report.eps_ladder.assign(eps_ladder.begin(), eps_ladder.end());
  report.sigma_sq_target = sigma_squared(t);
  report.n_paths = n_paths;
  report.n_steps = n_steps;
  report.seed = seed;

  SecondMomentOptions mopt;
  mopt.rel_tol = opt.quad_rel_tol;
  mopt.max_evals = opt.quad_max_evals;
  for (double eps : eps_ladder) {
    const double L = std::log(1.0 / eps);
    ModelConfig c = cfg;
    c.epsilon = eps;
    const SecondMomentResult m = second_moment_quadrature(c, eps, mopt);
    report.variance_ratios.push_back(m.total.value / (L * L));
    const FirstChaosResult fc =
        first_chaos_variance(eps, t, 2.0 / 3.0, opt.quad_rel_tol, opt.quad_max_evals);
    report.first_chaos_ratios.push_back(fc.total.value / (L * L));
  }

  // Monte Carlo at the smallest epsilon
  const double eps = eps_ladder.back();
  const double L = std::log(1.0 / eps);
  report.mc_eps = eps;
  ModelConfig c = cfg;
  c.epsilon = eps;
  const int n_pairs = opt.antithetic ? n_paths / 2 : n_paths;
  const std::vector<double> y{0.0};
  std::vector<double> vals = dslt_samples(c, y, n_pairs, n_steps, seed);
  for (double& v : vals) v /= L;
  report.normalized_samples = vals;

  // With antithetic pairing the sample is exactly symmetric: the mean and all
  // odd sample moments vanish identically.
  const int n = n_pairs;
  std::vector<double> m2v(n), m4v(n);
  for (int i = 0; i < n; ++i) {
    const double w2 = vals[i] * vals[i];
    m2v[i] = w2;
    m4v[i] = w2 * w2;
  }
  const double m2 = pairwise_sum(m2v) / n;
  const double m4 = pairwise_sum(m4v) / n;
  report.mc_mean = opt.antithetic ? 0.0 : pairwise_sum(vals) / n;
  report.mc_variance = m2;
  report.mc_variance_se = std::sqrt(std::max(0.0, m4 - m2 * m2) / n);
  if (opt.antithetic) {
    report.mc_skewness = 0.0;
  } else {
    std::vector<double> m3v(n);
    for (int i = 0; i < n; ++i) m3v[i] = vals[i] * vals[i] * vals[i];
    report.mc_skewness = pairwise_sum(m3v) / n / std::pow(m2, 1.5);
  }
  report.mc_kurtosis_excess = m4 / (m2 * m2) - 3.0;

  // KS distance of the independent samples against N(0, m2)
  std::vector<double> sorted = vals;
  std::sort(sorted.begin(), sorted.end());
  const double sd = std::sqrt(m2);
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    const double phi = 0.5 * std::erfc(-sorted[i] / (sd * std::sqrt(2.0)));
    ks = std::max(ks, std::abs((i + 1.0) / n - phi));
    ks = std::max(ks, std::abs(phi - static_cast<double>(i) / n));
  }
  report.ks_statistic = ks;
  return report;
}

}  // namespace dslt
