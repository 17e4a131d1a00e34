#pragma once

#include <cstdint>

#include "gcop/rng.hpp"

namespace gcop {

// Standard normal CDF, |error| <= 1e-12 against the error-function
// definition. Throws std::domain_error on non-finite input.
double std_normal_cdf(double x);

double std_normal_pdf(double x);

// Inverse of std_normal_cdf on (0,1). Acklam's rational approximation
// refined by one Halley step; round-trips through the CDF to ~1e-15.
double std_normal_quantile(double u);

// CDF of N(0, sigma^2) evaluated at x, sigma > 0 (second parameter is the
// standard deviation).
double scaled_normal_cdf(double x, double sigma);

// Regularized lower incomplete gamma P(shape, x), unit scale.
// Series for x < shape+1, Lentz continued fraction otherwise.
double regularized_gamma_p(double shape, double x);

// Inverse of regularized_gamma_p in x: P(shape, result) = y within 1e-9.
// Wilson-Hilferty / small-shape initial guess, then safeguarded Newton.
double gamma_quantile(double shape, double y);

// One draw of the positive strictly-stable law with Laplace transform
// E[exp(-s V)] = exp(-s^alpha), alpha in (0,1], via Kanter's
// Chambers-Mallows-Stuck construction. alpha == 1 returns the constant 1.
// Consumes exactly two uniforms from the stream.
double positive_stable_sample(double alpha, RngStream& rng);

// Quantile of the geometric law P(V = k) = p (1-p)^(k-1), k >= 1:
// smallest k with 1 - (1-p)^k >= y. Arguments in (0,1).
std::int64_t geometric_quantile(double success_p, double y);

}  // namespace gcop
