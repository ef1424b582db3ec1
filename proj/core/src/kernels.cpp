#include "dslt/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dslt {

double hermite_he(int m, double z) {
  if (m < 0) throw std::invalid_argument("Hermite order must be >= 0");
  if (m == 0) return 1.0;
  double prev = 1.0;
  double cur = z;
  for (int j = 1; j < m; ++j) {
    const double next = z * cur - j * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double heat_kernel(std::span<const double> x, double epsilon) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("epsilon must be > 0, got " + std::to_string(epsilon));
  const int d = static_cast<int>(x.size());
  double q = 0.0;
  for (double xi : x) q += xi * xi;
  return std::pow(2.0 * M_PI * epsilon, -0.5 * d) * std::exp(-q / (2.0 * epsilon));
}

double kernel_derivative(std::span<const double> x, double epsilon, std::span<const int> k) {
  if (x.size() != k.size())
    throw std::invalid_argument("x and k must have the same dimension");
  const MollifiedKernel kernel(epsilon, std::vector<int>(k.begin(), k.end()));
  return kernel(x);
}

MollifiedKernel::MollifiedKernel(double epsilon, std::vector<int> k)
    : epsilon_(epsilon), k_(std::move(k)) {
  if (!(epsilon_ > 0.0))
    throw std::invalid_argument("epsilon must be > 0, got " + std::to_string(epsilon_));
  if (k_.empty()) throw std::invalid_argument("k must be nonempty");
  for (int ki : k_)
    if (ki < 0) throw std::invalid_argument("k entries must be >= 0");
  norm_ = std::pow(2.0 * M_PI * epsilon_, -0.5 * static_cast<double>(k_.size()));
  inv_two_eps_ = 0.5 / epsilon_;
  inv_sqrt_eps_ = 1.0 / std::sqrt(epsilon_);
  deriv_scale_.resize(k_.size());
  for (std::size_t i = 0; i < k_.size(); ++i) {
    const double sign = (k_[i] % 2 == 0) ? 1.0 : -1.0;
    deriv_scale_[i] = sign * std::pow(epsilon_, -0.5 * k_[i]);
  }
}

double MollifiedKernel::operator()(std::span<const double> x) const {
  if (x.size() != k_.size())
    throw std::invalid_argument("x has wrong dimension for this kernel");
  double q = 0.0;
  double factor = 1.0;
  for (std::size_t i = 0; i < k_.size(); ++i) {
    q += x[i] * x[i];
    if (k_[i] > 0) factor *= deriv_scale_[i] * hermite_he(k_[i], x[i] * inv_sqrt_eps_);
  }
  return norm_ * std::exp(-q * inv_two_eps_) * factor;
}

}  // namespace dslt
