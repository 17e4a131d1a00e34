#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gcop::oracle {

namespace {

constexpr long double kSqrtPiL = 1.77245385090551602729816748334114518L;

long double erf_series(long double z) {
  // erf(z) = 2/sqrt(pi) * sum (-1)^n z^(2n+1) / (n! (2n+1))
  long double term = z;
  long double sum = z;
  for (int n = 1; n < 200; ++n) {
    term *= -z * z / n;
    sum += term / (2 * n + 1);
    if (std::abs(term) < 1e-22L * std::abs(sum)) break;
  }
  return 2.0L / kSqrtPiL * sum;
}

// Laplace continued fraction for the scaled complementary error function:
// erfc(z) = e^(-z^2) / (z sqrt(pi)) * 1 / (1 + f) with
// f = (1/2)/(z^2 + 1/(1 + (3/2)/(z^2 + 2/(1 + ...)))), z >= ~2.
long double erfc_tail(long double z) {
  long double f = 0.0L;
  for (int n = 60; n >= 1; --n) {
    const long double num = n / 2.0L;
    f = num / ((n % 2 == 1 ? z * z : 1.0L) + f);
  }
  return std::exp(-z * z) / (z * kSqrtPiL) / (1.0L + f);
}

}  // namespace

double normal_cdf(double x) {
  const long double z = static_cast<long double>(x) / 1.41421356237309504880168872420969808L;
  if (std::abs(z) < 3.0L) {
    return static_cast<double>(0.5L * (1.0L + erf_series(z)));
  }
  const long double erfc_val = erfc_tail(std::abs(z));
  if (z > 0) return static_cast<double>(1.0L - 0.5L * erfc_val);
  return static_cast<double>(0.5L * erfc_val);
}

double gamma_p(double shape, double x) {
  if (x <= 0.0) return 0.0;
  const long double a = shape;
  const long double lg = std::lgamma(static_cast<double>(a));

  // Head [0, eps]: integrate t^(a-1) e^-t with e^-t expanded directly.
  const long double eps = std::min<long double>(0.125L, x);
  long double head = 0.0L;
  long double fact = 1.0L;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) fact *= -eps / k;
    head += fact * std::pow(eps, a) / (a + k);
    if (std::abs(fact * std::pow(eps, a) / (a + k)) < 1e-24L * std::abs(head) && k > 4) break;
  }

  // Tail [eps, x]: adaptive Simpson on the regular part.
  const auto f = [&](long double t) -> long double {
    return std::exp((a - 1.0L) * std::log(t) - t);
  };
  using Fn = decltype(f);
  struct Simpson {
    const Fn& g;
    long double run(long double lo, long double hi, long double flo, long double fmid,
                    long double fhi, long double whole, int depth) const {
      const long double mid = 0.5L * (lo + hi);
      const long double lm = 0.5L * (lo + mid), rm = 0.5L * (mid + hi);
      const long double flm = g(lm), frm = g(rm);
      const long double left = (mid - lo) / 6.0L * (flo + 4.0L * flm + fmid);
      const long double right = (hi - mid) / 6.0L * (fmid + 4.0L * frm + fhi);
      if (depth > 40 || std::abs(left + right - whole) < 1e-19L * (1.0L + std::abs(whole)))
        return left + right;
      return run(lo, mid, flo, flm, fmid, left, depth + 1) +
             run(mid, hi, fmid, frm, fhi, right, depth + 1);
    }
  };
  long double tail = 0.0L;
  if (x > static_cast<double>(eps)) {
    const long double lo = eps, hi = x;
    const long double mid = 0.5L * (lo + hi);
    const long double whole = (hi - lo) / 6.0L * (f(lo) + 4.0L * f(mid) + f(hi));
    tail = Simpson{f}.run(lo, hi, f(lo), f(mid), f(hi), whole, 0);
  }
  const long double p = (head + tail) * std::exp(-static_cast<long double>(lg));
  return static_cast<double>(std::min<long double>(1.0L, p));
}

double gamma_quantile(double shape, double y) {
  double lo = 0.0, hi = 1.0;
  while (gamma_p(shape, hi) < y) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (gamma_p(shape, mid) < y)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

long long geometric_quantile(double success_p, double y) {
  double cdf = 0.0;
  double pk = success_p;  // P(V = k), k = 1
  for (long long k = 1; k < 1000000; ++k) {
    cdf += pk;
    if (cdf >= y) return k;
    pk *= (1.0 - success_p);
  }
  throw std::runtime_error("geometric_quantile oracle: did not converge");
}

Eigen::MatrixXd covariance(const Eigen::MatrixXd& x) {
  const auto t = x.rows();
  const auto n = x.cols();
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index l = 0; l < t; ++l) mu(j) += x(l, j);
    mu(j) /= static_cast<double>(t);
  }
  Eigen::MatrixXd m2 = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      double s = 0.0;
      for (Eigen::Index l = 0; l < t; ++l) s += (x(l, i) - mu(i)) * (x(l, j) - mu(j));
      m2(i, j) = s / static_cast<double>(t - 1);
    }
  return m2;
}

double third_cumulant_entry(const Eigen::MatrixXd& x, int i, int j, int k) {
  const auto t = x.rows();
  double mi = 0.0, mj = 0.0, mk = 0.0;
  for (Eigen::Index l = 0; l < t; ++l) {
    mi += x(l, i);
    mj += x(l, j);
    mk += x(l, k);
  }
  mi /= static_cast<double>(t);
  mj /= static_cast<double>(t);
  mk /= static_cast<double>(t);
  double s = 0.0;
  for (Eigen::Index l = 0; l < t; ++l)
    s += (x(l, i) - mi) * (x(l, j) - mj) * (x(l, k) - mk);
  return s / static_cast<double>(t);
}

double det_cofactor(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  if (n == 1) return m(0, 0);
  if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  double det = 0.0;
  double sign = 1.0;
  for (int c = 0; c < n; ++c) {
    Eigen::MatrixXd minor(n - 1, n - 1);
    for (int i = 1; i < n; ++i) {
      int mc = 0;
      for (int j = 0; j < n; ++j) {
        if (j == c) continue;
        minor(i - 1, mc++) = m(i, j);
      }
    }
    det += sign * m(0, c) * det_cofactor(minor);
    sign = -sign;
  }
  return det;
}

double js_from_data(const Eigen::MatrixXd& x, std::span<const int> subset) {
  const int s = static_cast<int>(subset.size());
  Eigen::MatrixXd sub(x.rows(), s);
  for (int j = 0; j < s; ++j) sub.col(j) = x.col(subset[j]);

  const Eigen::MatrixXd m2 = covariance(sub);

  // kappa tensor, then the mode-1 Gram matrix by explicit summation.
  std::vector<double> kappa(static_cast<std::size_t>(s) * s * s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j)
      for (int k = 0; k < s; ++k)
        kappa[(static_cast<std::size_t>(i) * s + j) * s + k] =
            third_cumulant_entry(sub, i, j, k);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(s, s);
  for (int a = 0; a < s; ++a)
    for (int b = 0; b < s; ++b) {
      double acc = 0.0;
      for (int j = 0; j < s; ++j)
        for (int k = 0; k < s; ++k)
          acc += kappa[(static_cast<std::size_t>(a) * s + j) * s + k] *
                 kappa[(static_cast<std::size_t>(b) * s + j) * s + k];
      gram(a, b) = acc;
    }

  const double num = det_cofactor(gram);
  const double den = det_cofactor(m2);
  if (num <= 0.0) return 0.0;
  return std::sqrt(num / (den * den * den));
}

int mev_step(const Eigen::MatrixXd& m2, const std::vector<int>& surviving, bool max_kept) {
  int best = -1;
  double best_det = 0.0;
  for (const int i : surviving) {
    std::vector<int> rest;
    for (const int j : surviving)
      if (j != i) rest.push_back(j);
    Eigen::MatrixXd sub(rest.size(), rest.size());
    for (std::size_t a = 0; a < rest.size(); ++a)
      for (std::size_t b = 0; b < rest.size(); ++b)
        sub(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
            m2(rest[a], rest[b]);
    const double d = det_cofactor(sub);
    if (best == -1 || (max_kept ? d > best_det : d < best_det)) {
      best = i;
      best_det = d;
    }
  }
  return best;
}

int jsbs_step(const Eigen::MatrixXd& x, const std::vector<int>& surviving) {
  int best = -1;
  double best_js = 0.0;
  for (const int i : surviving) {
    std::vector<int> rest;
    for (const int j : surviving)
      if (j != i) rest.push_back(j);
    const double js = js_from_data(x, rest);
    if (best == -1 || js > best_js) {
      best = i;
      best_js = js;
    }
  }
  return best;
}

double spearman_pair(std::span<const double> a, std::span<const double> b) {
  const std::size_t t = a.size();
  const auto rank_of = [t](std::span<const double> v) {
    std::vector<std::size_t> order(t);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
    std::vector<double> r(t);
    std::size_t i = 0;
    while (i < t) {
      std::size_t j = i;
      while (j + 1 < t && v[order[j + 1]] == v[order[i]]) ++j;
      for (std::size_t l = i; l <= j; ++l) r[order[l]] = 0.5 * (i + j) + 1.0;
      i = j + 1;
    }
    return r;
  };
  const auto ra = rank_of(a);
  const auto rb = rank_of(b);
  double ma = 0.0, mb = 0.0;
  for (std::size_t l = 0; l < t; ++l) {
    ma += ra[l];
    mb += rb[l];
  }
  ma /= static_cast<double>(t);
  mb /= static_cast<double>(t);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t l = 0; l < t; ++l) {
    sab += (ra[l] - ma) * (rb[l] - mb);
    saa += (ra[l] - ma) * (ra[l] - ma);
    sbb += (rb[l] - mb) * (rb[l] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace gcop::oracle
