#include "chemowave/convolve.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include <fftw3.h>

namespace chemowave {

namespace {

// FFTW's planner is not thread-safe; execution on distinct arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::size_t nice_size(std::size_t n) {
  for (std::size_t m = n;; ++m) {
    std::size_t r = m;
    for (std::size_t p : {2, 3, 5, 7})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

struct FftwDoubles {
  double* p;
  explicit FftwDoubles(std::size_t n) : p(fftw_alloc_real(n)) {
    if (!p) throw std::bad_alloc();
  }
  ~FftwDoubles() { fftw_free(p); }
  FftwDoubles(const FftwDoubles&) = delete;
  FftwDoubles& operator=(const FftwDoubles&) = delete;
};

struct FftwComplex {
  fftw_complex* p;
  explicit FftwComplex(std::size_t n) : p(fftw_alloc_complex(n)) {
    if (!p) throw std::bad_alloc();
  }
  ~FftwComplex() { fftw_free(p); }
  FftwComplex(const FftwComplex&) = delete;
  FftwComplex& operator=(const FftwComplex&) = delete;
};

}  // namespace

struct AdvectionOperator::Fft {
  std::size_t size = 0;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  std::vector<std::complex<double>> conv_hat, grad_hat;

  Fft(std::size_t n, const std::vector<double>& conv, const std::vector<double>& grad) : size(nice_size(2 * n - 1)) {
    FftwDoubles real(size);
    FftwComplex spec(size / 2 + 1);
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      forward = fftw_plan_dft_r2c_1d(static_cast<int>(size), real.p, spec.p, FFTW_ESTIMATE);
      backward = fftw_plan_dft_c2r_1d(static_cast<int>(size), spec.p, real.p, FFTW_ESTIMATE);
    }
    if (!forward || !backward) throw SolverError("FFTW plan creation failed");
    conv_hat = transform_kernel(n, conv, real, spec);
    grad_hat = transform_kernel(n, grad, real, spec);
  }

  ~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }

  std::vector<std::complex<double>> transform_kernel(std::size_t n, const std::vector<double>& w, FftwDoubles& real,
                                                     FftwComplex& spec) const {
    std::fill(real.p, real.p + size, 0.0);
    // offset m lives at w[m + n - 1]; wrap negative offsets to the end.
    for (std::size_t k = 0; k < w.size(); ++k) {
      const long m = static_cast<long>(k) - static_cast<long>(n - 1);
      real.p[m >= 0 ? m : static_cast<long>(size) + m] = w[k];
    }
    fftw_execute_dft_r2c(forward, real.p, spec.p);
    std::vector<std::complex<double>> out(size / 2 + 1);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = {spec.p[k][0], spec.p[k][1]};
    return out;
  }

  std::vector<double> apply(const std::vector<double>& u, const std::vector<std::complex<double>>& hat) const {
    FftwDoubles real(size);
    FftwComplex spec(size / 2 + 1);
    std::fill(real.p, real.p + size, 0.0);
    std::copy(u.begin(), u.end(), real.p);
    fftw_execute_dft_r2c(forward, real.p, spec.p);
    for (std::size_t k = 0; k < hat.size(); ++k) {
      const std::complex<double> z = std::complex<double>(spec.p[k][0], spec.p[k][1]) * hat[k];
      spec.p[k][0] = z.real();
      spec.p[k][1] = z.imag();
    }
    fftw_execute_dft_c2r(backward, spec.p, real.p);
    std::vector<double> out(u.size());
    const double scale = 1.0 / static_cast<double>(size);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = real.p[i] * scale;
    return out;
  }
};

AdvectionOperator::AdvectionOperator(const Grid1D& grid, const KernelSpec& spec, const ChemoParams& params)
    : grid_(grid), params_(params) {
  grid_.validate();
  if (!(params.sigma > 0.0)) throw ValidationError("sigma must be positive");
  const double dx = grid_.dx();
  if (dx > params.sigma / 4.0)
    throw ValidationError("grid too coarse for the kernel: need dx <= sigma/4");
  const std::size_t n = grid_.n;
  const double sigma = params.sigma;

  kbar_tail_.resize(n);
  k_tail_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double y = (static_cast<double>(k) + 0.5) * dx;
    kbar_tail_[k] = spec.kbar(y / sigma);
    k_tail_[k] = spec.scaled(sigma, y);
  }
  atom_ = 2.0 * spec.right_limit_at_zero() / sigma;

  conv_weights_.assign(2 * n - 1, 0.0);
  grad_weights_.assign(2 * n - 1, 0.0);
  const std::size_t c = n - 1;
  for (std::size_t m = 1; m < n; ++m) {
    const double w = kbar_tail_[m] - kbar_tail_[m - 1];
    conv_weights_[c + m] = w;
    conv_weights_[c - m] = -w;
    const double e = k_tail_[m] - k_tail_[m - 1];
    grad_weights_[c + m] = e;
    grad_weights_[c - m] = e;
  }
  grad_weights_[c] = 2.0 * (k_tail_[0] - spec.right_limit_at_zero() / sigma);

  fft_ = std::make_unique<Fft>(n, conv_weights_, grad_weights_);
}

AdvectionOperator::~AdvectionOperator() = default;
AdvectionOperator::AdvectionOperator(AdvectionOperator&&) noexcept = default;
AdvectionOperator& AdvectionOperator::operator=(AdvectionOperator&&) noexcept = default;

std::vector<double> AdvectionOperator::correlate(const std::vector<double>& u, const std::vector<double>& w,
                                                 Path path, bool conv_kernel) const {
  const std::size_t n = grid_.n;
  if (path == Path::Auto) path = spectral_by_default() ? Path::Spectral : Path::Direct;
  if (path == Path::Spectral) {
    return fft_->apply(u, conv_kernel ? fft_->conv_hat : fft_->grad_hat);
  }
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += u[j] * w[i + n - 1 - j];
    out[i] = s;
  }
  return out;
}

Field AdvectionOperator::advection(const Field& u, Path path) const {
  if (!(u.grid == grid_)) throw ValidationError("advection: field grid differs from operator grid");
  const std::size_t n = grid_.n;
  Field v(grid_, 0.0, 0.0, 0.0);
  if (params_.chi == 0.0) return v;
  const auto core = correlate(u.values, conv_weights_, path, true);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = params_.chi * (core[i] - u.left_ext * kbar_tail_[i] + u.right_ext * kbar_tail_[n - 1 - i]);
  return v;
}

Field AdvectionOperator::gradient(const Field& u, Path path) const {
  if (!(u.grid == grid_)) throw ValidationError("gradient: field grid differs from operator grid");
  const std::size_t n = grid_.n;
  Field vx(grid_, 0.0, 0.0, 0.0);
  if (params_.chi == 0.0) return vx;
  const auto core = correlate(u.values, grad_weights_, path, false);
  for (std::size_t i = 0; i < n; ++i)
    vx[i] = params_.chi *
            (atom_ * u[i] + core[i] - u.left_ext * k_tail_[i] - u.right_ext * k_tail_[n - 1 - i]);
  return vx;
}

Field advection(const Field& u, const KernelSpec& spec, const ChemoParams& params) {
  return AdvectionOperator(u.grid, spec, params).advection(u);
}

Field advection_gradient(const Field& u, const KernelSpec& spec, const ChemoParams& params) {
  return AdvectionOperator(u.grid, spec, params).gradient(u);
}

BoundsReport advection_bounds_check(const Field& u, const Field& v, const Field& vx, const ChemoParams& params,
                                    double slack_factor) {
  BoundsReport r;
  const double un = u.sup_norm();
  const double chi = std::abs(params.chi);
  r.add("v_sup", "||v||_inf <= |chi|/2 ||u||_inf", v.sup_norm(), 0.5 * chi * un, slack_factor * un);
  r.add("vx_sup", "||v_x||_inf <= |chi|/sigma ||u||_inf", vx.sup_norm(), chi / params.sigma * un,
        slack_factor * un);
  return r;
}

double relative_sup_difference(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(b[i]));
  }
  if (den == 0.0) return num;
  return num / den;
}

}  // namespace chemowave
