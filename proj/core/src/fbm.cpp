#include "dslt/fbm.hpp"

#include <fftw3.h>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>

#include "dslt/rng.hpp"

namespace dslt {

namespace {

// FFTW plan creation/destruction is not thread safe; executions on distinct
// buffers are.
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

constexpr double kEigenvalueFloor = -1e-10;

}  // namespace

int ModelConfig::order() const {
  return std::accumulate(k.begin(), k.end(), 0);
}

int ModelConfig::odd_count() const {
  int c = 0;
  for (int ki : k) c += (ki % 2 != 0);
  return c;
}

void ModelConfig::validate() const {
  if (!(H > 0.0 && H < 1.0))
    throw std::invalid_argument("H must be in (0,1), got " + std::to_string(H));
  if (d < 1) throw std::invalid_argument("d must be >= 1, got " + std::to_string(d));
  if (static_cast<int>(k.size()) != d)
    throw std::invalid_argument("k must have d entries, got " + std::to_string(k.size()) +
                                " for d=" + std::to_string(d));
  for (int ki : k)
    if (ki < 0) throw std::invalid_argument("k entries must be >= 0, got " + std::to_string(ki));
  if (!(t > 0.0)) throw std::invalid_argument("t must be > 0, got " + std::to_string(t));
  if (!(epsilon > 0.0))
    throw std::invalid_argument("epsilon must be > 0, got " + std::to_string(epsilon));
}

double fbm_covariance(double s, double t, double H) {
  if (!(H > 0.0 && H < 1.0))
    throw std::invalid_argument("H must be in (0,1), got " + std::to_string(H));
  if (s < 0.0 || t < 0.0) throw std::invalid_argument("times must be nonnegative");
  const double p = 2.0 * H;
  return 0.5 * (std::pow(t, p) + std::pow(s, p) - std::pow(std::abs(t - s), p));
}

double fgn_autocovariance(std::int64_t lag, double H) {
  const double p = 2.0 * H;
  const double k = static_cast<double>(std::llabs(lag));
  return 0.5 * (std::pow(k + 1.0, p) - 2.0 * std::pow(k, p) + std::pow(std::abs(k - 1.0), p));
}

struct FbmSampler::Impl {
  double H;
  int n;       // number of increments
  double dt;
  double scale;  // dt^H, increments are unit-spacing fGn rescaled
  SamplerMethod method;

  // circulant embedding
  int m = 0;  // embedding size 2n
  std::vector<double> eigenvalues;
  std::vector<double> sqrt_eig;  // sqrt(lambda_j / m)
  fftw_plan plan = nullptr;

  // cholesky fallback
  Eigen::MatrixXd chol_l;

  ~Impl() {
    if (plan) {
      std::lock_guard<std::mutex> lock(fftw_mutex());
      fftw_destroy_plan(plan);
    }
  }
};

FbmSampler::FbmSampler(double H, int n_steps, double dt, SamplerMethod method)
    : impl_(std::make_unique<Impl>()) {
  if (!(H > 0.0 && H < 1.0))
    throw std::invalid_argument("H must be in (0,1), got " + std::to_string(H));
  if (n_steps < 2) throw std::invalid_argument("n_steps must be >= 2");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");

  impl_->H = H;
  impl_->n = n_steps;
  impl_->dt = dt;
  impl_->scale = std::pow(dt, H);
  impl_->method = method;

  bool want_circulant = (method != SamplerMethod::Cholesky);
  if (want_circulant) {
    const int n = n_steps;
    const int m = 2 * n;
    // first row of the circulant embedding of the fGn Toeplitz covariance
    std::vector<std::complex<double>> row(m), freq(m);
    for (int j = 0; j <= n; ++j) row[j] = fgn_autocovariance(j, H);
    for (int j = n + 1; j < m; ++j) row[j] = row[m - j];

    {
      std::lock_guard<std::mutex> lock(fftw_mutex());
      fftw_plan p = fftw_plan_dft_1d(m, reinterpret_cast<fftw_complex*>(row.data()),
                                     reinterpret_cast<fftw_complex*>(freq.data()),
                                     FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
      fftw_execute(p);
      fftw_destroy_plan(p);
    }

    std::vector<double> eig(m);
    double min_eig = 0.0;
    for (int j = 0; j < m; ++j) {
      eig[j] = freq[j].real();
      min_eig = std::min(min_eig, eig[j]);
    }

    if (min_eig > kEigenvalueFloor) {
      for (double& e : eig) e = std::max(e, 0.0);
      impl_->m = m;
      impl_->eigenvalues = std::move(eig);
      impl_->sqrt_eig.resize(m);
      for (int j = 0; j < m; ++j)
        impl_->sqrt_eig[j] = std::sqrt(impl_->eigenvalues[j] / static_cast<double>(m));
      std::lock_guard<std::mutex> lock(fftw_mutex());
      impl_->plan = fftw_plan_dft_1d(m, nullptr, nullptr, FFTW_FORWARD,
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
      impl_->method = SamplerMethod::Circulant;
      return;
    }
    if (method == SamplerMethod::Circulant)
      throw std::runtime_error("circulant embedding not nonnegative definite (min eigenvalue " +
                               std::to_string(min_eig) + ")");
    // else fall through to Cholesky
  }

  const int n = n_steps;
  Eigen::MatrixXd cov(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cov(i, j) = fgn_autocovariance(i - j, H);
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("increment covariance is not positive definite: degenerate grid");
  impl_->chol_l = llt.matrixL();
  impl_->method = SamplerMethod::Cholesky;
}

FbmSampler::~FbmSampler() = default;

SamplerMethod FbmSampler::active_method() const { return impl_->method; }
int FbmSampler::n_steps() const { return impl_->n; }
double FbmSampler::dt() const { return impl_->dt; }
double FbmSampler::hurst() const { return impl_->H; }

const std::vector<double>& FbmSampler::embedding_eigenvalues() const {
  if (impl_->method != SamplerMethod::Circulant)
    throw std::runtime_error("no circulant embedding active");
  return impl_->eigenvalues;
}

double FbmSampler::factor_increment_covariance(int j, int k) const {
  const double s2 = impl_->scale * impl_->scale;
  if (impl_->method == SamplerMethod::Circulant) {
    // Cov(X_j, X_k) = (1/m) sum_l lambda_l cos(2 pi l (j-k) / m)
    const int m = impl_->m;
    const int lag = j - k;
    double acc = 0.0;
    for (int l = 0; l < m; ++l)
      acc += impl_->eigenvalues[l] * std::cos(2.0 * M_PI * l * lag / m);
    return s2 * acc / m;
  }
  double acc = 0.0;
  const int n = impl_->n;
  for (int l = 0; l < n; ++l) acc += impl_->chol_l(j, l) * impl_->chol_l(k, l);
  return s2 * acc;
}

void FbmSampler::sample_path(std::uint64_t seed, std::uint64_t path_index, int d,
                             std::span<double> out) const {
  const int n = impl_->n;
  if (d < 1) throw std::invalid_argument("d must be >= 1");
  if (out.size() != static_cast<std::size_t>(n + 1) * d)
    throw std::invalid_argument("output span has wrong size");

  std::mt19937_64 rng = substream_engine(seed, path_index);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<double> increments(n);
  // coordinate-major: coordinate 0 consumes the substream first
  for (int coord = 0; coord < d; ++coord) {
    if (impl_->method == SamplerMethod::Circulant) {
      const int m = impl_->m;
      std::vector<std::complex<double>> w(m), e(m);
      w[0] = impl_->sqrt_eig[0] * gauss(rng);
      w[m / 2] = impl_->sqrt_eig[m / 2] * gauss(rng);
      const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
      for (int j = 1; j < m / 2; ++j) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        w[j] = impl_->sqrt_eig[j] * inv_sqrt2 * std::complex<double>(re, im);
        w[m - j] = std::conj(w[j]);
      }
      fftw_execute_dft(impl_->plan, reinterpret_cast<fftw_complex*>(w.data()),
                       reinterpret_cast<fftw_complex*>(e.data()));
      for (int j = 0; j < n; ++j) increments[j] = e[j].real();
    } else {
      Eigen::VectorXd z(n);
      for (int j = 0; j < n; ++j) z[j] = gauss(rng);
      Eigen::VectorXd x = impl_->chol_l * z;
      for (int j = 0; j < n; ++j) increments[j] = x[j];
    }

    out[coord] = 0.0;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      acc += impl_->scale * increments[j];
      out[static_cast<std::size_t>(j + 1) * d + coord] = acc;
    }
  }
}

PathBatch sample_paths(const ModelConfig& cfg, int n_steps, int n_paths,
                       std::uint64_t seed, SamplerMethod method) {
  cfg.validate();
  if (n_steps < 2) throw std::invalid_argument("n_steps must be >= 2");
  if (n_paths < 1) throw std::invalid_argument("n_paths must be >= 1");

  PathBatch batch;
  batch.n_paths = n_paths;
  batch.n_steps = n_steps;
  batch.d = cfg.d;
  batch.dt = cfg.t / n_steps;
  batch.H = cfg.H;
  batch.seed = seed;
  batch.values.resize(static_cast<std::size_t>(n_paths) * (n_steps + 1) * cfg.d);

  FbmSampler sampler(cfg.H, n_steps, batch.dt, method);
  const std::size_t stride = static_cast<std::size_t>(n_steps + 1) * cfg.d;
#pragma omp parallel for schedule(dynamic, 8)
  for (int p = 0; p < n_paths; ++p) {
    sampler.sample_path(seed, static_cast<std::uint64_t>(p), cfg.d,
                        std::span<double>(batch.values.data() + p * stride, stride));
  }
  return batch;
}

NondeterminismReport nondeterminism_ratios(double H, int n, int n_trials, std::uint64_t seed) {
  if (!(H > 0.0 && H < 1.0))
    throw std::invalid_argument("H must be in (0,1), got " + std::to_string(H));
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (n_trials < 1) throw std::invalid_argument("n_trials must be >= 1");

  const double p = 2.0 * H;
  double rmin = std::numeric_limits<double>::infinity();
  double rmax = 0.0;

#pragma omp parallel for schedule(static) reduction(min : rmin) reduction(max : rmax)
  for (int trial = 0; trial < n_trials; ++trial) {
    std::mt19937_64 rng = substream_engine(seed, static_cast<std::uint64_t>(trial));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<double> s(n);
    for (int i = 0; i < n; ++i) s[i] = unif(rng);
    std::sort(s.begin(), s.end());
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = gauss(rng);

    // exact variance of sum x_i (B_{s_i} - B_{s_{i-1}})
    double var = 0.0;
    for (int i = 0; i < n; ++i) {
      const double ai = (i == 0) ? 0.0 : s[i - 1];
      for (int j = 0; j < n; ++j) {
        const double aj = (j == 0) ? 0.0 : s[j - 1];
        const double cov = fbm_covariance(s[i], s[j], H) - fbm_covariance(s[i], aj, H) -
                           fbm_covariance(ai, s[j], H) + fbm_covariance(ai, aj, H);
        var += x[i] * x[j] * cov;
      }
    }
    double denom = 0.0;
    for (int i = 0; i < n; ++i) {
      const double gap = s[i] - (i == 0 ? 0.0 : s[i - 1]);
      denom += x[i] * x[i] * std::pow(gap, p);
    }
    if (denom > 0.0) {
      const double ratio = var / denom;
      rmin = std::min(rmin, ratio);
      rmax = std::max(rmax, ratio);
    }
  }

  NondeterminismReport report;
  report.n = n;
  report.H = H;
  report.ratio_min = rmin;
  report.ratio_max = rmax;
  report.n_trials = n_trials;
  return report;
}

}  // namespace dslt
