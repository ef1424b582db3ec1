#include "dslt/second_moment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dslt/quadrature.hpp"

namespace dslt {

namespace {

// Equal-order pair moment without heap allocation; the cubature evaluates
// this millions of times.
double pair_moment_equal(int m, double var_x, double var_y, double cov_xy) {
  constexpr int kMax = 16;
  if (m > kMax) throw std::invalid_argument("derivative order above supported maximum (16)");
  double dp[kMax + 1][kMax + 1];
  dp[0][0] = 1.0;
  for (int j = 1; j <= m; ++j) dp[0][j] = (j >= 2) ? (j - 1) * var_y * dp[0][j - 2] : 0.0;
  for (int i = 1; i <= m; ++i) {
    for (int j = 0; j <= m; ++j) {
      double v = 0.0;
      if (i >= 2) v += (i - 1) * var_x * dp[i - 2][j];
      if (j >= 1) v += j * cov_xy * dp[i - 1][j - 1];
      dp[i][j] = v;
    }
  }
  return dp[m][m];
}

// Product over coordinates of the exact pair integrals, for one assignment
// of the mollifiers to the two increments.
double xi_product(std::span<const int> k, double lam, double rho, double mu) {
  const double det = lam * rho - mu * mu;
  if (!(det > 0.0)) return 0.0;  // measure-zero degenerate face
  const double var_x = rho / det;
  const double var_y = lam / det;
  const double cov_xy = -mu / det;
  const double gauss_norm = 2.0 * M_PI / std::sqrt(det);
  double prod = 1.0;
  for (int ki : k) {
    if (ki == 0) {
      prod *= gauss_norm;
    } else {
      prod *= gauss_norm * pair_moment_equal(ki, var_x, var_y, cov_xy);
    }
  }
  return prod;
}

QuadResult region_quadrature(const ModelConfig& cfg, double eta, RegionCase region,
                             const SecondMomentOptions& opt, std::size_t budget,
                             bool* diverging) {
  const double t = cfg.t;
  const double eps = cfg.epsilon;
  const double H = cfg.H;
  const double gamma = opt.grading;
  const double sign = (cfg.order() % 2 == 0) ? 1.0 : -1.0;
  const double norm = sign * std::pow(2.0 * M_PI, -2.0 * cfg.d);
  const std::vector<int>& k = cfg.k;

  auto integrand = [&](double u, double v, double w) -> double {
    const double a = t * std::pow(u, gamma);
    const double b = t * std::pow(v, gamma);
    const double c = t * std::pow(w, gamma);
    const double base = t - a - b - c;
    if (base <= 0.0) return 0.0;
    const double jac =
        t * t * t * gamma * gamma * gamma * std::pow(u * v * w, gamma - 1.0);
    const CovTriple ct = cov_triple_from_gaps({region, a, b, c}, H);
    // one labeling: average over the two (eps, eta) assignments
    const double f1 = xi_product(k, ct.lambda + eps, ct.rho + eta, ct.mu);
    const double f2 = xi_product(k, ct.lambda + eta, ct.rho + eps, ct.mu);
    return norm * base * 0.5 * (f1 + f2) * jac;
  };

  QuadOptions qopt;
  qopt.rel_tol = opt.rel_tol;
  qopt.max_evals = budget;
  CubatureResult res = integrate_unit_cube3(integrand, qopt);

  QuadResult out;
  out.value = res.value;
  out.abs_error_estimate = res.abs_error;
  out.n_evals = res.n_evals;
  out.region = to_string(region);
  if (diverging) *diverging = *diverging || res.diverging;
  return out;
}

}  // namespace

RegimeVerdict existence_regime(double H, std::span<const int> k, int d) {
  if (!(H > 0.0 && H < 1.0))
    throw std::invalid_argument("H must be in (0,1), got " + std::to_string(H));
  if (d < 1 || static_cast<int>(k.size()) != d)
    throw std::invalid_argument("k must have d >= 1 entries");
  int abs_k = 0, odd = 0;
  for (int ki : k) {
    if (ki < 0) throw std::invalid_argument("k entries must be >= 0");
    abs_k += ki;
    odd += (ki % 2 != 0);
  }
  RegimeVerdict out;
  out.l2_threshold = std::min({2.0 / (2 * abs_k + d), 1.0 / (abs_k + d - odd), 1.0 / d});
  out.lp_threshold = 1.0 / (abs_k + d);
  out.l2_exists = H < out.l2_threshold;
  out.lp_exists = H < out.lp_threshold;
  return out;
}

const QuadResult& SecondMomentResult::region(RegionCase c) const {
  switch (c) {
    case RegionCase::D1: return d1;
    case RegionCase::D2: return d2;
    case RegionCase::D3: return d3;
  }
  return total;
}

SecondMomentResult second_moment_quadrature(const ModelConfig& cfg, double eta,
                                            const SecondMomentOptions& opt) {
  if (cfg.t == 0.0) {
    // empty integration domain
    ModelConfig probe = cfg;
    probe.t = 1.0;
    probe.validate();
    SecondMomentResult out;
    out.regime = existence_regime(cfg.H, cfg.k, cfg.d);
    out.d1.region = "D1";
    out.d2.region = "D2";
    out.d3.region = "D3";
    out.total.region = "total";
    out.converged = true;
    return out;
  }
  cfg.validate();
  if (!(eta > 0.0)) {
    const RegimeVerdict regime = existence_regime(cfg.H, cfg.k, cfg.d);
    if (!regime.l2_exists)
      throw std::invalid_argument(
          "eta must be > 0 outside the L2 existence regime");
    if (eta < 0.0) throw std::invalid_argument("eta must be >= 0");
  }

  SecondMomentResult out;
  out.regime = existence_regime(cfg.H, cfg.k, cfg.d);

  bool diverging = false;
  const std::size_t budget = opt.max_evals / 3;
  out.d1 = region_quadrature(cfg, eta, RegionCase::D1, opt, budget, &diverging);
  out.d2 = region_quadrature(cfg, eta, RegionCase::D2, opt, budget, &diverging);
  out.d3 = region_quadrature(cfg, eta, RegionCase::D3, opt, budget, &diverging);

  out.total.region = "total";
  out.total.value = 2.0 * (out.d1.value + out.d2.value + out.d3.value);
  out.total.abs_error_estimate =
      2.0 * (out.d1.abs_error_estimate + out.d2.abs_error_estimate +
             out.d3.abs_error_estimate);
  out.total.n_evals = out.d1.n_evals + out.d2.n_evals + out.d3.n_evals;
  out.diverging = diverging;
  out.converged = out.total.abs_error_estimate <=
                  std::max(opt.rel_tol * std::abs(out.total.value), 1e-300);
  if (!out.converged && !out.diverging && opt.require_convergence)
    throw std::runtime_error(
        "second-moment quadrature did not reach rel_tol " +
        std::to_string(opt.rel_tol) + " within the evaluation budget (error " +
        std::to_string(out.total.abs_error_estimate) + ", value " +
        std::to_string(out.total.value) + ")");
  return out;
}

std::vector<CauchyRow> cauchy_diagnostic(const ModelConfig& cfg,
                                         std::span<const double> eps_ladder,
                                         const SecondMomentOptions& opt) {
  if (eps_ladder.size() < 2)
    throw std::invalid_argument("eps ladder needs at least two entries");
  for (std::size_t i = 1; i < eps_ladder.size(); ++i)
    if (!(eps_ladder[i] < eps_ladder[i - 1]))
      throw std::invalid_argument("eps ladder must be strictly decreasing");

  auto with_eps = [&](double e) {
    ModelConfig c = cfg;
    c.epsilon = e;
    return c;
  };

  std::vector<double> diag(eps_ladder.size());
  std::vector<double> diag_err(eps_ladder.size());
  for (std::size_t i = 0; i < eps_ladder.size(); ++i) {
    const SecondMomentResult r = second_moment_quadrature(with_eps(eps_ladder[i]),
                                                          eps_ladder[i], opt);
    diag[i] = r.total.value;
    diag_err[i] = r.total.abs_error_estimate;
  }

  std::vector<CauchyRow> rows;
  for (std::size_t i = 0; i + 1 < eps_ladder.size(); ++i) {
    const double hi = eps_ladder[i];
    const double lo = eps_ladder[i + 1];
    const SecondMomentResult cross = second_moment_quadrature(with_eps(hi), lo, opt);
    CauchyRow row;
    row.eps_hi = hi;
    row.eps_lo = lo;
    row.m_hi = diag[i];
    row.m_lo = diag[i + 1];
    row.m_cross = cross.total.value;
    row.increment = row.m_hi + row.m_lo - 2.0 * row.m_cross;
    row.abs_error = diag_err[i] + diag_err[i + 1] + 2.0 * cross.total.abs_error_estimate;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace dslt
