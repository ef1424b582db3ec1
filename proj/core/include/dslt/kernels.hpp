#pragma once

#include <span>
#include <vector>

namespace dslt {

// Probabilists' Hermite polynomial He_m, three-term recurrence
// He_{m+1}(z) = z He_m(z) - m He_{m-1}(z).
double hermite_he(int m, double z);

// Gaussian mollifier f_eps(x) = (2 pi eps)^{-d/2} exp(-|x|^2 / (2 eps)).
double heat_kernel(std::span<const double> x, double epsilon);

// Partial derivative of f_eps for a multi-index k, in closed form:
//   f_eps(x) * prod_i (-1)^{k_i} eps^{-k_i/2} He_{k_i}(x_i / sqrt(eps)).
double kernel_derivative(std::span<const double> x, double epsilon, std::span<const int> k);

// Precomputed evaluator for hot loops (one exp per call).
class MollifiedKernel {
 public:
  MollifiedKernel(double epsilon, std::vector<int> k);

  double epsilon() const { return epsilon_; }
  const std::vector<int>& k() const { return k_; }
  int dim() const { return static_cast<int>(k_.size()); }

  double operator()(std::span<const double> x) const;

 private:
  double epsilon_;
  std::vector<int> k_;
  double norm_;                      // (2 pi eps)^{-d/2}
  double inv_two_eps_;               // 1 / (2 eps)
  double inv_sqrt_eps_;              // eps^{-1/2}
  std::vector<double> deriv_scale_;  // (-1)^{k_i} eps^{-k_i/2}
};

}  // namespace dslt
