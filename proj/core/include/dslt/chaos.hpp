#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dslt/second_moment.hpp"

namespace dslt {

// beta_q = 1 / (2^{q-1/2} (q-1)! sqrt(pi)), the chaos-kernel normalization.
double beta_q(int q);

// mu(x, u1, u2) = E[B_{u1} (B_{x+u2} - B_x)] in closed form.
double mu_chaos(double x, double u1, double u2, double H);

// G^(q)_{eps,x}(u1,u2) = (eps+u1^2H)^{-1/2-q} (eps+u2^2H)^{-1/2-q} mu^{2q-1}.
double g_q(int q, double eps, double x, double u1, double u2, double H);

struct FirstChaosResult {
  QuadResult d1, d2, d3;
  QuadResult total;  // total.value = 2 * (d1 + d2 + d3)
  bool converged = false;
};

// Variance of the first Wiener chaos of ahat'_{t,eps}(0):
//   beta_1^2 * int_{D^2} G^(1)_{eps, r2-r1}(s1-r1, s2-r2),
// reduced to gap coordinates per interleaving region like the second moment.
FirstChaosResult first_chaos_variance(double eps, double t, double H, double rel_tol = 1e-5,
                                      std::size_t max_evals = 10'000'000);

// sigma^2 = t^{4/3} B(2,1/3) / (8 pi) with B(2,1/3) = 9/4.
double sigma_squared(double t);
// Same quantity through the log-gamma Beta evaluation (independent route).
double sigma_squared_loggamma(double t);

// Scalar limit behind the critical-case variance: with J(M) the integral of
// a (1+a^{4/3})^{-3/2} over [0, M] and M = t eps^{-3/4}, returns
// J(M)^2 / log(1/eps)^2 = J(M)^2 / ((4/3) log M)^2  ->  9/16.
double limit_integral_check(double M);

struct CltOptions {
  bool antithetic = true;
  double quad_rel_tol = 1e-5;
  std::size_t quad_max_evals = 10'000'000;
};

struct CltReport {
  std::vector<double> eps_ladder;
  std::vector<double> variance_ratios;     // M(eps,eps) / log(1/eps)^2
  std::vector<double> first_chaos_ratios;  // first chaos variance / log(1/eps)^2
  double sigma_sq_target = 0.0;

  // sampling block, at the smallest ladder entry
  double mc_eps = 0.0;
  double mc_mean = 0.0;
  double mc_variance = 0.0;  // raw second moment of the normalized statistic
  double mc_variance_se = 0.0;
  double mc_skewness = 0.0;  // of the antithetic (symmetrized) sample
  double mc_kurtosis_excess = 0.0;
  double ks_statistic = 0.0;  // independent samples vs fitted centered normal
  int n_paths = 0;
  int n_steps = 0;
  std::uint64_t seed = 0;
  // one value of ahat'/log(1/eps) per independent path
  std::vector<double> normalized_samples;
};

// Critical-case experiment (H = 2/3, d = 1, k = 1): quadrature ratios along
// the ladder plus a Monte Carlo sampling check at the smallest epsilon.
CltReport clt_experiment(double t, std::span<const double> eps_ladder, int n_paths,
                         int n_steps, std::uint64_t seed, const CltOptions& opt = {});

}  // namespace dslt
