#include "gcop/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace gcop {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// Acklam's rational approximation of the standard normal quantile,
// relative error ~1.15e-9 before refinement.
double acklam_quantile(double u) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double u_low = 0.02425;

  if (u < u_low) {
    const double q = std::sqrt(-2.0 * std::log(u));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (u > 1.0 - u_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - u));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = u - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double log_gamma_density(double shape, double x) {
  return (shape - 1.0) * std::log(x) - x - std::lgamma(shape);
}

}  // namespace

double std_normal_cdf(double x) {
  if (!std::isfinite(x)) throw std::domain_error("std_normal_cdf: non-finite input");
  return 0.5 * std::erfc(-x * kInvSqrt2);
}

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double std_normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0))
    throw std::domain_error("std_normal_quantile: argument must lie in (0,1)");
  double q = acklam_quantile(u);
  // One Halley step; skipped in the extreme tails where the pdf underflows.
  const double pdf = std_normal_pdf(q);
  if (pdf > 1e-290) {
    const double err = std_normal_cdf(q) - u;
    const double r = err / pdf;
    q -= r / (1.0 + 0.5 * q * r);
  }
  return q;
}

double scaled_normal_cdf(double x, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw std::domain_error("scaled_normal_cdf: sigma must be positive");
  return std_normal_cdf(x / sigma);
}

double regularized_gamma_p(double shape, double x) {
  if (!(shape > 0.0) || !std::isfinite(shape))
    throw std::domain_error("regularized_gamma_p: shape must be positive");
  if (!(x >= 0.0) || !std::isfinite(x))
    throw std::domain_error("regularized_gamma_p: x must be nonnegative");
  if (x == 0.0) return 0.0;

  if (x < shape + 1.0) {
    // Lower series: P(a,x) = x^a e^-x / Gamma(a) * sum_k x^k / (a+1)...(a+k)
    double ap = shape;
    double term = 1.0 / shape;
    double sum = term;
    for (int i = 0; i < 1000; ++i) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-17) break;
    }
    const double lg = shape * std::log(x) - x - std::lgamma(shape);
    return std::min(1.0, sum * std::exp(lg));
  }

  // Upper continued fraction (modified Lentz), Q(a,x); return 1 - Q.
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - shape;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - shape);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-17) break;
  }
  const double lg = shape * std::log(x) - x - std::lgamma(shape);
  return std::max(0.0, 1.0 - std::exp(lg) * h);
}

double gamma_quantile(double shape, double y) {
  if (!(shape > 0.0) || !std::isfinite(shape))
    throw std::domain_error("gamma_quantile: shape must be positive");
  if (!(y > 0.0 && y < 1.0))
    throw std::domain_error("gamma_quantile: y must lie in (0,1)");

  double x;
  if (shape > 0.6) {
    // Wilson-Hilferty
    const double z = std_normal_quantile(y);
    const double c = 1.0 - 1.0 / (9.0 * shape) + z / (3.0 * std::sqrt(shape));
    x = shape * c * c * c;
    if (!(x > 0.0)) x = 1e-8;
  } else {
    // Small shape: P(a,x) ~ x^a / (a Gamma(a)) near 0.
    x = std::exp((std::log(y) + std::log(shape) + std::lgamma(shape)) / shape);
    if (!(x > 0.0)) x = 1e-300;
  }

  // Bracket the root: P(lo) < y <= P(hi).
  double lo = 0.0, hi = x;
  while (regularized_gamma_p(shape, hi) < y) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw std::runtime_error("gamma_quantile: bracketing failed");
  }

  // Newton with bisection safeguard.
  x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double p = regularized_gamma_p(shape, x);
    const double err = p - y;
    if (err > 0)
      hi = x;
    else
      lo = x;
    if (std::abs(err) < 1e-12) break;
    const double logpdf = log_gamma_density(shape, x);
    double next;
    if (logpdf > -700.0) {
      next = x - err / std::exp(logpdf);
    } else {
      next = 0.5 * (lo + hi);
    }
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo < 1e-15 * hi) {
      x = 0.5 * (lo + hi);
      break;
    }
    x = next;
  }
  return std::max(x, 1e-300);
}

double positive_stable_sample(double alpha, RngStream& rng) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::domain_error("positive_stable_sample: alpha must lie in (0,1]");
  if (alpha == 1.0) {
    // Degenerate stable: V == 1. Keep the stream layout identical to the
    // general branch (two uniforms consumed).
    rng.next_u64();
    rng.next_u64();
    return 1.0;
  }
  const double theta = kPi * rng.uniform_open01();
  const double w = rng.exponential();
  const double ln_a = alpha * std::log(std::sin(alpha * theta)) +
                      (1.0 - alpha) * std::log(std::sin((1.0 - alpha) * theta)) -
                      std::log(std::sin(theta));
  const double ln_x = (ln_a - (1.0 - alpha) * std::log(w)) / alpha;
  return std::min(std::exp(ln_x), 1e300);
}

std::int64_t geometric_quantile(double success_p, double y) {
  if (!(success_p > 0.0 && success_p < 1.0))
    throw std::domain_error("geometric_quantile: success_p must lie in (0,1)");
  if (!(y > 0.0 && y < 1.0))
    throw std::domain_error("geometric_quantile: y must lie in (0,1)");

  const double log_q = std::log1p(-success_p);  // < 0
  const double r = std::log1p(-y) / log_q;
  std::int64_t k = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(r)));
  const auto cdf = [&](std::int64_t kk) {
    return -std::expm1(static_cast<double>(kk) * log_q);
  };
  while (cdf(k) < y) ++k;
  while (k > 1 && cdf(k - 1) >= y) --k;
  return k;
}

}  // namespace gcop
