#include "gcop/copulas.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "gcop/errors.hpp"
#include "gcop/special_functions.hpp"

namespace gcop {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Largest double strictly below 1; arch_sampler clamps into
// [kUMin, kUMax] so outputs never collapse to the interval ends.
constexpr double kUMax = 0x1.fffffffffffffp-1;
constexpr double kUMin = 1e-300;

struct ThetaBounds {
  double lo;
  double hi;
};

ThetaBounds theta_bounds(Family family) {
  switch (family) {
    case Family::gumbel:
      return {1.0, 100.0};
    case Family::clayton:
      return {1e-6, 100.0};
    case Family::amh:
      return {1e-6, 1.0 - 1e-6};
  }
  throw std::logic_error("theta_bounds: unreachable");
}

// 128-point Gauss-Legendre rule mapped to [0,1].
struct GaussLegendre {
  std::vector<double> x;
  std::vector<double> w;
};

GaussLegendre make_gauss_legendre(int n) {
  GaussLegendre g;
  g.x.resize(n);
  g.w.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    const double weight = 2.0 / ((1.0 - z * z) * pp * pp);
    g.x[i] = 0.5 * (1.0 - z);  // node order is irrelevant for the sum
    g.x[n - 1 - i] = 0.5 * (1.0 + z);
    g.w[i] = 0.5 * weight;
    g.w[n - 1 - i] = 0.5 * weight;
  }
  return g;
}

const GaussLegendre& gl128() {
  static const GaussLegendre g = make_gauss_legendre(128);
  return g;
}

}  // namespace

const char* family_name(Family family) {
  switch (family) {
    case Family::gumbel:
      return "gumbel";
    case Family::clayton:
      return "clayton";
    case Family::amh:
      return "amh";
  }
  return "?";
}

std::optional<Family> family_from_name(std::string_view name) {
  if (name == "gumbel") return Family::gumbel;
  if (name == "clayton") return Family::clayton;
  if (name == "amh") return Family::amh;
  return std::nullopt;
}

void validate(const CopulaSpec& spec) {
  const double th = spec.theta;
  if (!std::isfinite(th)) throw std::domain_error("copula theta must be finite");
  switch (spec.family) {
    case Family::gumbel:
      if (!(th >= 1.0)) throw std::domain_error("Gumbel theta must lie in [1, inf)");
      return;
    case Family::clayton:
      if (!(th > 0.0)) throw std::domain_error("Clayton theta must lie in (0, inf)");
      return;
    case Family::amh:
      if (!(th > 0.0 && th < 1.0)) throw std::domain_error("AMH theta must lie in (0, 1)");
      return;
  }
  throw std::logic_error("validate: unreachable");
}

CopulaSpec make_copula(Family family, double theta) {
  CopulaSpec spec{family, theta};
  validate(spec);
  return spec;
}

double generator(const CopulaSpec& spec, double t) {
  validate(spec);
  if (!(t >= 0.0)) throw std::domain_error("generator: t must be nonnegative");
  switch (spec.family) {
    case Family::gumbel:
      return std::exp(-std::pow(t, 1.0 / spec.theta));
    case Family::clayton:
      return std::exp(-std::log1p(t) / spec.theta);
    case Family::amh: {
      // (1-theta) / (e^t - theta), computed via e^-t to survive large t.
      const double et = std::exp(-t);
      return (1.0 - spec.theta) * et / (1.0 - spec.theta * et);
    }
  }
  throw std::logic_error("generator: unreachable");
}

double generator_inverse(const CopulaSpec& spec, double u) {
  validate(spec);
  if (!(u > 0.0 && u <= 1.0))
    throw std::domain_error("generator_inverse: u must lie in (0,1]");
  switch (spec.family) {
    case Family::gumbel:
      return std::pow(-std::log(u), spec.theta);
    case Family::clayton:
      return std::expm1(-spec.theta * std::log(u));
    case Family::amh:
      return std::log1p((1.0 - spec.theta) * (1.0 - u) / u);
  }
  throw std::logic_error("generator_inverse: unreachable");
}

double copula_cdf(const CopulaSpec& spec, std::span<const double> u) {
  validate(spec);
  if (u.size() < 2) throw std::domain_error("copula_cdf: need at least 2 coordinates");
  double sum = 0.0;
  for (const double ui : u) sum += generator_inverse(spec, ui);
  return generator(spec, sum);
}

double spearman_rho(const CopulaSpec& spec) {
  validate(spec);
  const auto& g = gl128();
  const int n = static_cast<int>(g.x.size());
  std::vector<double> pinv(n);
  for (int i = 0; i < n; ++i) pinv[i] = generator_inverse(spec, g.x[i]);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += g.w[j] * generator(spec, pinv[i] + pinv[j]);
    acc += g.w[i] * row;
  }
  return 12.0 * acc - 3.0;
}

RhoRange attainable_rho(Family family) {
  const auto [lo, hi] = theta_bounds(family);
  return {spearman_rho({family, lo}), spearman_rho({family, hi})};
}

double theta_from_rho(Family family, double rho_target) {
  if (!std::isfinite(rho_target))
    throw std::domain_error("theta_from_rho: target must be finite");
  if (rho_target < -0.05)
    throw std::domain_error(
        "theta_from_rho: negative dependence is not attainable for this family");

  auto [lo, hi] = theta_bounds(family);
  const RhoRange range = attainable_rho(family);
  constexpr double margin = 1e-3;
  const double target =
      std::clamp(rho_target, range.lo + margin, range.hi - margin);

  // rho is monotone increasing in theta for all three families.
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (spearman_rho({family, mid}) < target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-12 * (1.0 + hi)) break;
  }
  return 0.5 * (lo + hi);
}

double frailty_quantile(const CopulaSpec& spec, double y) {
  validate(spec);
  if (!(y > 0.0 && y < 1.0))
    throw std::domain_error("frailty_quantile: y must lie in (0,1)");
  switch (spec.family) {
    case Family::clayton:
      return gamma_quantile(1.0 / spec.theta, y);
    case Family::amh:
      return static_cast<double>(geometric_quantile(1.0 - spec.theta, y));
    case Family::gumbel:
      throw unsupported_family_error(
          "frailty_quantile: Gumbel frailty has no closed-form quantile; "
          "use frailty_batch_sorted");
  }
  throw std::logic_error("frailty_quantile: unreachable");
}

std::vector<double> frailty_batch_sorted(const CopulaSpec& spec,
                                         std::span<const int> ranks,
                                         RngStream& rng) {
  validate(spec);
  if (spec.family != Family::gumbel)
    throw unsupported_family_error(
        "frailty_batch_sorted: only the Gumbel family uses the sorted batch");
  const std::size_t t = ranks.size();
  std::vector<char> seen(t, 0);
  for (const int r : ranks) {
    if (r < 0 || static_cast<std::size_t>(r) >= t || seen[r])
      throw std::domain_error("frailty_batch_sorted: ranks must be a permutation");
    seen[r] = 1;
  }
  const double alpha = 1.0 / spec.theta;
  std::vector<double> draws(t);
  for (auto& d : draws) d = positive_stable_sample(alpha, rng);
  std::sort(draws.begin(), draws.end());
  std::vector<double> out(t);
  for (std::size_t i = 0; i < t; ++i) out[i] = draws[static_cast<std::size_t>(ranks[i])];
  return out;
}

void arch_sampler(const CopulaSpec& spec, std::span<const double> x, double v,
                  std::span<double> out) {
  validate(spec);
  if (out.size() != x.size())
    throw std::invalid_argument("arch_sampler: output size mismatch");
  if (!(v > 0.0)) throw std::domain_error("arch_sampler: v must be positive");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && x[i] < 1.0))
      throw std::domain_error("arch_sampler: coordinates must lie strictly in (0,1)");
    const double u = generator(spec, -std::log(x[i]) / v);
    out[i] = std::clamp(u, kUMin, kUMax);
  }
}

std::vector<double> arch_sampler(const CopulaSpec& spec,
                                 std::span<const double> x, double v) {
  std::vector<double> out(x.size());
  arch_sampler(spec, x, v, out);
  return out;
}

Eigen::MatrixXd sample_copula(const CopulaSpec& spec, int dim, int t,
                              RngStream& rng) {
  validate(spec);
  if (dim < 1 || t < 1) throw std::domain_error("sample_copula: dim and t must be positive");
  Eigen::MatrixXd out(t, dim);
  std::vector<double> x(dim), u(dim);
  const bool gumbel = spec.family == Family::gumbel;
  const double alpha = gumbel ? 1.0 / spec.theta : 0.0;
  for (int l = 0; l < t; ++l) {
    const double v = gumbel ? positive_stable_sample(alpha, rng)
                            : frailty_quantile(spec, rng.uniform_open01());
    for (int i = 0; i < dim; ++i) x[i] = rng.uniform_open01();
    arch_sampler(spec, x, v, u);
    for (int i = 0; i < dim; ++i) out(l, i) = u[i];
  }
  return out;
}

}  // namespace gcop
