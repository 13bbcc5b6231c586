#include "chemowave/kernels.hpp"

#include "chemowave/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace chemowave {

namespace {

constexpr double kTailLevel = 1e-14;
constexpr double kInf = std::numeric_limits<double>::infinity();

// int_x^inf exp(-y^alpha / d) dy.
double stretched_upper(double alpha, double d, double x) {
  auto f = [=](double y) { return std::exp(-std::pow(y, alpha) / d); };
  if (x < 1.0) {
    // Complement of the head keeps full accuracy where the value is O(1).
    boost::math::quadrature::tanh_sinh<double> head;
    const double h = x > 0.0 ? head.integrate(f, 0.0, x) : 0.0;
    return 1.0 - h;
  }
  boost::math::quadrature::exp_sinh<double> tail;
  return tail.integrate(f, x, kInf);
}

double parse_number(std::string_view s, std::string_view what) {
  double value = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw ValidationError("bad " + std::string(what) + " in kernel string: '" + std::string(s) + "'");
  return value;
}

// Panel edges 0, 2^-40, ..., 1/2, 1, 2, 4, ..., x_max, all multiplied by scale.
std::vector<double> geometric_panels(double x_max, double scale) {
  std::vector<double> edges{0.0};
  for (int j = 40; j >= 1; --j) {
    const double e = std::ldexp(1.0, -j);
    if (e < x_max) edges.push_back(e);
  }
  for (double e = 1.0; e < x_max; e *= 2.0) edges.push_back(e);
  edges.push_back(x_max);
  for (auto& e : edges) e *= scale;
  return edges;
}

template <class F>
double integrate_panels(F&& f, const std::vector<double>& edges) {
  using Rule = boost::math::quadrature::gauss<double, 20>;
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    if (edges[i + 1] > edges[i]) sum += Rule::integrate(f, edges[i], edges[i + 1]);
  return sum;
}

}  // namespace

KernelSpec::KernelSpec(KernelFamily family, double shape) : family_(family), shape_(shape) {}

KernelSpec KernelSpec::exponential() {
  KernelSpec k(KernelFamily::Exponential, 0.0);
  k.tail_cutoff_ = k.kbar_inverse(kTailLevel);
  return k;
}

KernelSpec KernelSpec::top_hat() {
  KernelSpec k(KernelFamily::TopHat, 0.0);
  k.tail_cutoff_ = 1.0;
  return k;
}

KernelSpec KernelSpec::power_law(double exponent) {
  if (!(exponent > 2.0) || !std::isfinite(exponent))
    throw ValidationError("power-law kernel needs k > 2");
  KernelSpec k(KernelFamily::PowerLaw, exponent);
  k.tail_cutoff_ = k.kbar_inverse(kTailLevel);
  return k;
}

KernelSpec KernelSpec::stretched_exp(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ValidationError("stretched-exponential kernel needs alpha in (0, 1)");
  KernelSpec k(KernelFamily::StretchedExp, alpha);
  boost::math::quadrature::exp_sinh<double> integrator;
  const double mass = integrator.integrate([alpha](double x) { return std::exp(-std::pow(x, alpha)); }, 0.0, kInf);
  k.d_alpha_ = std::pow(mass, -alpha);
  k.tail_cutoff_ = k.kbar_inverse(kTailLevel);
  return k;
}

KernelSpec KernelSpec::parse(std::string_view text) {
  if (text == "exp" || text == "exponential") return exponential();
  if (text == "tophat") return top_hat();
  const auto colon = text.find(':');
  if (colon != std::string_view::npos) {
    const auto head = text.substr(0, colon);
    const auto tail = text.substr(colon + 1);
    if (head == "powerlaw") return power_law(parse_number(tail, "exponent"));
    if (head == "stretched") return stretched_exp(parse_number(tail, "alpha"));
  }
  throw ValidationError("unknown kernel '" + std::string(text) +
                              "' (expected exp, tophat, powerlaw:<k>, stretched:<alpha>)");
}

std::string KernelSpec::name() const {
  auto num = [](double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
  };
  switch (family_) {
    case KernelFamily::Exponential: return "exp";
    case KernelFamily::TopHat: return "tophat";
    case KernelFamily::PowerLaw: return "powerlaw:" + num(shape_);
    case KernelFamily::StretchedExp: return "stretched:" + num(shape_);
  }
  throw std::logic_error("unknown kernel family");
}

KernelSpec KernelSpec::with_amplitude(double factor) const {
  KernelSpec k = *this;
  k.amplitude_ *= factor;
  return k;
}

double KernelSpec::magnitude(double r) const {
  switch (family_) {
    case KernelFamily::Exponential: return 0.5 * amplitude_ * std::exp(-r);
    case KernelFamily::TopHat: return r <= 1.0 ? 0.5 * amplitude_ : 0.0;
    case KernelFamily::PowerLaw: return 0.5 * amplitude_ * std::pow(1.0 + r / (shape_ - 1.0), -shape_);
    case KernelFamily::StretchedExp: return 0.5 * amplitude_ * std::exp(-std::pow(r, shape_) / d_alpha_);
  }
  throw std::logic_error("unknown kernel family");
}

double KernelSpec::eval(double x) const {
  if (x == 0.0) throw std::domain_error("K is discontinuous at 0; evaluate a one-sided limit instead");
  const double m = magnitude(std::abs(x));
  return x > 0.0 ? -m : m;
}

double KernelSpec::scaled(double sigma, double x) const {
  if (!(sigma > 0.0)) throw ValidationError("sigma must be positive");
  return eval(x / sigma) / sigma;
}

double KernelSpec::kbar(double x) const {
  if (!(x >= 0.0)) throw std::domain_error("Kbar is defined for x >= 0");
  switch (family_) {
    case KernelFamily::Exponential: return 0.5 * amplitude_ * std::exp(-x);
    case KernelFamily::TopHat: return 0.5 * amplitude_ * std::max(0.0, 1.0 - x);
    case KernelFamily::PowerLaw: return 0.5 * amplitude_ * std::pow(1.0 + x / (shape_ - 1.0), 1.0 - shape_);
    case KernelFamily::StretchedExp:
      if (std::isinf(x)) return 0.0;
      return 0.5 * amplitude_ * stretched_upper(shape_, d_alpha_, x);
  }
  throw std::logic_error("unknown kernel family");
}

double KernelSpec::kbar_inverse(double w) const {
  const double top = 0.5 * amplitude_;
  if (!(w > 0.0 && w <= top)) throw std::domain_error("kbar_inverse needs w in (0, Kbar(0)]");
  if (w == top) return 0.0;
  const double q = w / top;  // in (0, 1)
  switch (family_) {
    case KernelFamily::Exponential: return -std::log(q);
    case KernelFamily::TopHat: return 1.0 - q;
    case KernelFamily::PowerLaw: return (shape_ - 1.0) * (std::pow(q, 1.0 / (1.0 - shape_)) - 1.0);
    case KernelFamily::StretchedExp: {
      double lo = 0.0;
      double hi = 1.0;
      while (kbar(hi) > w) {
        lo = hi;
        hi *= 2.0;
      }
      for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (kbar(mid) > w ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
  throw std::logic_error("unknown kernel family");
}

double l1_norm(const KernelSpec& spec, double sigma) {
  if (!(sigma > 0.0)) throw ValidationError("sigma must be positive");
  const double cutoff = spec.tail_cutoff();
  const auto edges = geometric_panels(cutoff, sigma);
  const double head = integrate_panels([&](double y) { return std::abs(spec.scaled(sigma, y)); }, edges);
  return 2.0 * (head + spec.kbar(cutoff));
}

double kbar_first_moment(const KernelSpec& spec) {
  const double cutoff = spec.tail_cutoff();
  const auto edges = geometric_panels(cutoff, 1.0);
  const double head = integrate_panels([&](double x) { return (1.0 + x) * spec.kbar(x); }, edges);
  const double amp = spec.amplitude();
  double tail = 0.0;
  switch (spec.family()) {
    case KernelFamily::Exponential: tail = 0.5 * amp * (2.0 + cutoff) * std::exp(-cutoff); break;
    case KernelFamily::TopHat: tail = 0.0; break;
    case KernelFamily::PowerLaw: {
      const double k = spec.shape();
      if (k <= 3.0) return kInf;  // (1+x) Kbar ~ x^{2-k} is not integrable
      const double s = 1.0 + cutoff / (k - 1.0);
      tail = 0.5 * amp * (k - 1.0) * (-std::pow(s, 2.0 - k) + (k - 1.0) * std::pow(s, 3.0 - k) / (k - 3.0));
      break;
    }
    case KernelFamily::StretchedExp: {
      // Fubini: int_X^inf (1+x) Kbar <= (1/2) int_X^inf e^{-y^a/D} (y + y^2/2) dy.
      const double a = spec.shape();
      const double d = spec.d_alpha();
      const double z = std::pow(cutoff, a) / d;
      auto moment = [&](double p) {
        return std::pow(d, (p + 1.0) / a) / a * boost::math::tgamma((p + 1.0) / a, z);
      };
      tail = 0.5 * amp * (moment(1.0) + 0.5 * moment(2.0));
      break;
    }
  }
  return head + tail;
}

BoundsReport validate_kernel(const KernelSpec& spec) {
  BoundsReport report;
  const double cutoff = spec.tail_cutoff();

  report.add("l1_norm", "||K||_1 = 1", std::abs(l1_norm(spec) - 1.0), 1e-6);
  report.add("jump_at_zero", "2|K(0+)| = 1", std::abs(2.0 * std::abs(spec.eval(1e-300)) - 1.0), 1e-12);

  std::vector<double> samples;
  for (double x = 1e-6; x < 2.0 * cutoff; x *= 1.25) samples.push_back(x);
  for (int i = 1; i <= 500; ++i) samples.push_back(0.01 * i);
  std::sort(samples.begin(), samples.end());

  double odd = 0.0, rise_right = -kInf, rise_left = -kInf, sign_right = -kInf, sign_left = -kInf;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double x = samples[i];
    const double kp = spec.eval(x), km = spec.eval(-x);
    odd = std::max(odd, std::abs(kp + km));
    sign_right = std::max(sign_right, kp);
    sign_left = std::max(sign_left, -km);
    if (i + 1 < samples.size()) {
      // K increasing on each half-line: K(x_i) <= K(x_{i+1}) and K(-x_{i+1}) <= K(-x_i).
      rise_right = std::max(rise_right, kp - spec.eval(samples[i + 1]));
      rise_left = std::max(rise_left, spec.eval(-samples[i + 1]) - km);
    }
  }
  report.add("odd", "K(-x) = -K(x)", odd, 0.0);
  report.add("monotone_right", "K increasing on (0, inf)", rise_right, 0.0);
  report.add("monotone_left", "K increasing on (-inf, 0)", rise_left, 0.0);
  report.add("sign_right", "K <= 0 on (0, inf)", sign_right, 0.0);
  report.add("sign_left", "K >= 0 on (-inf, 0)", sign_left, 0.0);
  report.add("kbar_moment_finite", "(1+|x|) Kbar in L1", kbar_first_moment(spec),
             std::numeric_limits<double>::max());
  return report;
}

}  // namespace chemowave
