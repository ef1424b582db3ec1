#include "dslt/gaussian_moments.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "dslt/fbm.hpp"

namespace dslt {

CovTriple cov_triple(double r, double s, double rp, double sp, double H) {
  if (!(r < s)) throw std::invalid_argument("cov_triple requires r < s");
  if (!(rp < sp)) throw std::invalid_argument("cov_triple requires r' < s'");
  const double p = 2.0 * H;
  CovTriple out;
  out.lambda = std::pow(std::abs(s - r), p);
  out.rho = std::pow(std::abs(sp - rp), p);
  out.mu = 0.5 * (std::pow(std::abs(sp - r), p) + std::pow(std::abs(s - rp), p) -
                  std::pow(std::abs(sp - s), p) - std::pow(std::abs(r - rp), p));
  return out;
}

double gaussian_pair_moment(int m, int n, double var_x, double var_y, double cov_xy) {
  if (m < 0 || n < 0) throw std::invalid_argument("moment orders must be >= 0");
  if ((m + n) % 2 != 0) return 0.0;
  // dp[i][j] = E[X^i Y^j]; reduce on X:
  //   E[X^i Y^j] = (i-1) var_x E[X^{i-2} Y^j] + j cov_xy E[X^{i-1} Y^{j-1}]
  std::vector<std::vector<double>> dp(m + 1, std::vector<double>(n + 1, 0.0));
  dp[0][0] = 1.0;
  for (int j = 2; j <= n; j += 2) dp[0][j] = (j - 1) * var_y * dp[0][j - 2];
  for (int i = 1; i <= m; ++i) {
    for (int j = 0; j <= n; ++j) {
      double v = 0.0;
      if (i >= 2) v += (i - 1) * var_x * dp[i - 2][j];
      if (j >= 1) v += j * cov_xy * dp[i - 1][j - 1];
      dp[i][j] = v;
    }
  }
  return dp[m][n];
}

double pair_integral_exact(int m, int n, double lam, double rho, double mu) {
  if (m < 0 || n < 0) throw std::invalid_argument("moment orders must be >= 0");
  if (!(lam > 0.0) || !(rho > 0.0))
    throw std::invalid_argument("lam and rho must be > 0");
  const double det = lam * rho - mu * mu;
  if (!(det > 0.0))
    throw std::invalid_argument("degenerate quadratic form: lam*rho - mu^2 = " +
                                std::to_string(det));
  // The integral is (2 pi / sqrt(det)) * E[X^m Y^n] for the Gaussian pair with
  // covariance inverse [[lam, mu], [mu, rho]].
  const double var_x = rho / det;
  const double var_y = lam / det;
  const double cov_xy = -mu / det;
  return 2.0 * M_PI / std::sqrt(det) * gaussian_pair_moment(m, n, var_x, var_y, cov_xy);
}

double pair_integral_exact(int m, double lam, double rho, double mu) {
  return pair_integral_exact(m, m, lam, rho, mu);
}

double lemma_bound(int m, double lam, double rho, double mu) {
  if (m < 0) throw std::invalid_argument("m must be >= 0");
  const double det = lam * rho - mu * mu;
  if (!(det > 0.0))
    throw std::invalid_argument("degenerate quadratic form: lam*rho - mu^2 = " +
                                std::to_string(det));
  const double amu = std::abs(mu);
  if (amu * amu / det >= 1.0) return std::pow(amu, m) / std::pow(det, m + 0.5);
  if (m % 2 != 0) return amu / std::pow(det, 0.5 * m + 1.0);
  return 1.0 / std::pow(det, 0.5 * (m + 1));
}

std::string to_string(RegionCase c) {
  switch (c) {
    case RegionCase::D1: return "D1";
    case RegionCase::D2: return "D2";
    case RegionCase::D3: return "D3";
  }
  return "?";
}

CovTriple cov_triple_from_gaps(const GapCoords& g, double H) {
  if (g.a < 0.0 || g.b < 0.0 || g.c < 0.0)
    throw std::invalid_argument("gap coordinates must be >= 0");
  const double p = 2.0 * H;
  CovTriple out;
  switch (g.case_id) {
    case RegionCase::D1:
      out.lambda = std::pow(g.a + g.b, p);
      out.rho = std::pow(g.b + g.c, p);
      out.mu = 0.5 * (std::pow(g.a + g.b + g.c, p) + std::pow(g.b, p) - std::pow(g.a, p) -
                      std::pow(g.c, p));
      break;
    case RegionCase::D2:
      out.lambda = std::pow(g.a + g.b + g.c, p);
      out.rho = std::pow(g.b, p);
      out.mu = 0.5 * (std::pow(g.a + g.b, p) + std::pow(g.b + g.c, p) - std::pow(g.a, p) -
                      std::pow(g.c, p));
      break;
    case RegionCase::D3:
      out.lambda = std::pow(g.a, p);
      out.rho = std::pow(g.c, p);
      out.mu = 0.5 * (std::pow(g.a + g.b + g.c, p) + std::pow(g.b, p) -
                      std::pow(g.a + g.b, p) - std::pow(g.c + g.b, p));
      break;
  }
  return out;
}

double region_lower_bound(const GapCoords& g, double H) {
  if (g.a < 0.0 || g.b < 0.0 || g.c < 0.0)
    throw std::invalid_argument("gap coordinates must be >= 0");
  const double p = 2.0 * H;
  switch (g.case_id) {
    case RegionCase::D1:
      return std::pow(g.a + g.b, p) * std::pow(g.c, p) +
             std::pow(g.a, p) * std::pow(g.b + g.c, p);
    case RegionCase::D2:
      return std::pow(g.b, p) * (std::pow(g.a, p) + std::pow(g.c, p));
    case RegionCase::D3:
      return std::pow(g.a * g.c, p);
  }
  return 0.0;
}

}  // namespace dslt
