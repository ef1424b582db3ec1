#include "dslt/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <functional>
#include <stdexcept>

namespace dslt {

namespace detail {

GaussKronrod15::GaussKronrod15() {
  using BoostGK = boost::math::quadrature::gauss_kronrod<double, 15>;
  using BoostG7 = boost::math::quadrature::gauss<double, 7>;

  // boost exposes the nonnegative half; mirror it to the full rule
  const auto& half_x = BoostGK::abscissa();
  const auto& half_w = BoostGK::weights();
  std::vector<std::pair<double, double>> full;
  for (std::size_t i = 0; i < half_x.size(); ++i) {
    full.emplace_back(half_x[i], half_w[i]);
    if (half_x[i] != 0.0) full.emplace_back(-half_x[i], half_w[i]);
  }
  if (full.size() != 15) throw std::logic_error("unexpected Gauss-Kronrod node count");
  std::sort(full.begin(), full.end());
  for (int i = 0; i < 15; ++i) {
    node[i] = full[i].first;
    wk[i] = full[i].second;
    wg[i] = 0.0;
  }

  // embedded Gauss-7 weights live on the matching Kronrod nodes
  const auto& g_x = BoostG7::abscissa();
  const auto& g_w = BoostG7::weights();
  for (std::size_t i = 0; i < g_x.size(); ++i) {
    for (int sign : {+1, -1}) {
      if (g_x[i] == 0.0 && sign < 0) continue;
      const double target = sign * g_x[i];
      bool found = false;
      for (int j = 0; j < 15; ++j) {
        if (std::abs(node[j] - target) < 1e-12) {
          wg[j] = g_w[i];
          found = true;
          break;
        }
      }
      if (!found) throw std::logic_error("Gauss node not embedded in Kronrod rule");
    }
  }
}

const GaussKronrod15& gk15() {
  static const GaussKronrod15 rule;
  return rule;
}

}  // namespace detail

double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    double rel_tol, double* abs_error) {
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, 20, rel_tol, &err);
  if (abs_error) *abs_error = err;
  return v;
}

}  // namespace dslt
