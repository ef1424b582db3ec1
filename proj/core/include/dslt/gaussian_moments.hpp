#pragma once

#include <string>

namespace dslt {

// Covariance data of the increment pair (B_s - B_r, B_s' - B_r'):
// lambda = Var of the first, rho = Var of the second, mu = their covariance.
struct CovTriple {
  double lambda = 0.0;
  double rho = 0.0;
  double mu = 0.0;

  double det() const { return lambda * rho - mu * mu; }
};

CovTriple cov_triple(double r, double s, double rp, double sp, double H);

// Mixed moment E[X^m Y^n] of a centered Gaussian pair with the given second
// moments, by the Wick pairing recursion.
double gaussian_pair_moment(int m, int n, double var_x, double var_y, double cov_xy);

// Exact value of  int_{R^2} x^m y^n exp(-(lam x^2 + rho y^2 + 2 mu x y)/2).
// Requires lam > 0, rho > 0, lam*rho - mu^2 > 0.
double pair_integral_exact(int m, double lam, double rho, double mu);
double pair_integral_exact(int m, int n, double lam, double rho, double mu);

// Bound expression for |pair_integral_exact(m, ...)| with the generic
// constant set to 1; the branch switches at mu^2/(lam*rho - mu^2) = 1.
double lemma_bound(int m, double lam, double rho, double mu);

// The three interleavings of two increment intervals, with consecutive gaps
// (a, b, c):
//   D1: r < r' < s < s'   gaps a = r'-r, b = s-r',  c = s'-s
//   D2: r < r' < s' < s   gaps a = r'-r, b = s'-r', c = s-s'
//   D3: r < s < r' < s'   gaps a = s-r,  b = r'-s,  c = s'-r'
enum class RegionCase { D1, D2, D3 };

std::string to_string(RegionCase c);

struct GapCoords {
  RegionCase case_id = RegionCase::D1;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

// (lambda, rho, mu) of the configuration described by gap coordinates.
CovTriple cov_triple_from_gaps(const GapCoords& gaps, double H);

// Case-specific lower-bound expression for lambda*rho - mu^2, constant = 1:
//   D1: (a+b)^2H c^2H + a^2H (b+c)^2H
//   D2: b^2H (a^2H + c^2H)
//   D3: (a c)^2H
double region_lower_bound(const GapCoords& gaps, double H);

}  // namespace dslt
