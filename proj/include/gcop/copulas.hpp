#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "gcop/rng.hpp"

namespace gcop {

enum class Family { gumbel, clayton, amh };

const char* family_name(Family family);
std::optional<Family> family_from_name(std::string_view name);

// Archimedean copula family plus its parameter.
// Valid theta domains: Gumbel [1, inf), Clayton (0, inf), AMH (0, 1).
struct CopulaSpec {
  Family family;
  double theta;
};

// Validates the theta domain; throws std::domain_error otherwise.
CopulaSpec make_copula(Family family, double theta);
void validate(const CopulaSpec& spec);

// Generator psi_theta(t), t >= 0, strictly decreasing with psi(0) = 1:
//   Gumbel  exp(-t^(1/theta))
//   Clayton (1+t)^(-1/theta)
//   AMH     (1-theta) / (exp(t) - theta)
double generator(const CopulaSpec& spec, double t);

// Inverse generator on (0, 1]; generator(spec, result) == u to ~1e-12.
double generator_inverse(const CopulaSpec& spec, double u);

// C(u) = psi(sum_i psi^{-1}(u_i)), m >= 2 coordinates in (0, 1].
double copula_cdf(const CopulaSpec& spec, std::span<const double> u);

// Spearman's rho of the bivariate margin, 12 * integral(C) - 3, by
// 128x128 tensor-product Gauss-Legendre quadrature (abs error <= 1e-4).
double spearman_rho(const CopulaSpec& spec);

// Attainable Spearman range over the bisection bounds used by
// theta_from_rho (Gumbel theta in [1,100], Clayton [1e-6,100],
// AMH [1e-6, 1-1e-6]).
struct RhoRange {
  double lo;
  double hi;
};
RhoRange attainable_rho(Family family);

// Inverts spearman_rho by bisection (rho is monotone increasing in theta
// for all three families). The target is clamped into the attainable
// range shrunk by 1e-3 on each side; targets below -0.05 throw
// std::domain_error (negative dependence is not representable).
double theta_from_rho(Family family, double rho_target);

// Frailty quantile for families with closed-form frailty laws:
//   Clayton: Gamma(1/theta, 1) quantile
//   AMH:     geometric(1 - theta) quantile
// Gumbel throws unsupported_family_error (use frailty_batch_sorted).
double frailty_quantile(const CopulaSpec& spec, double y);

// Gumbel frailty batch: draws ranks.size() positive-stable(1/theta)
// samples, sorts ascending, and places the i-th smallest at the position
// whose rank is i (ranks is a permutation of 0..t-1). Output is a
// monotone function of the ranks. Non-Gumbel specs throw
// unsupported_family_error.
std::vector<double> frailty_batch_sorted(const CopulaSpec& spec,
                                         std::span<const int> ranks,
                                         RngStream& rng);

// Marshall-Olkin step: u_i = psi(-log(x_i) / v), x_i in (0,1), v > 0.
// Strictly increasing in each x_i and in v. Outputs are clamped to
// [1e-300, 1-2^-53] so they stay strictly inside (0,1) in floating point.
void arch_sampler(const CopulaSpec& spec, std::span<const double> x, double v,
                  std::span<double> out);
std::vector<double> arch_sampler(const CopulaSpec& spec,
                                 std::span<const double> x, double v);

// t rows of the dim-variate copula via the Marshall-Olkin algorithm
// (frailty first, then dim uniforms per row).
Eigen::MatrixXd sample_copula(const CopulaSpec& spec, int dim, int t,
                              RngStream& rng);

}  // namespace gcop
