#pragma once

#include <span>

#include <Eigen/Core>

#include "gcop/copulas.hpp"
#include "gcop/rng.hpp"

namespace gcop {

enum class CoreKind { eigen, naive };

const char* core_kind_name(CoreKind kind);

// Information-preserving core transform. Input: t x k matrix with
// standardized columns (zero mean, unit sample std, tolerance 1e-6;
// violations throw precondition_error). Appends one fresh N(0,1) column,
// takes the correlation matrix of the t x (k+1) block, eigendecomposes
// with eigenvalues ascending (so the last output column carries the
// largest-variance direction), rotates each row by the eigenvector
// matrix and maps column i through the N(0, lambda_i) CDF.
//
// Eigenvectors are oriented so each component sum is nonnegative; without
// a fixed orientation the frailty column may anti-correlate with the
// data's common factor and cross-covariances invert.
//
// Throws singularity_error if the correlation matrix has an eigenvalue
// below 1e-10.
Eigen::MatrixXd core(const Eigen::MatrixXd& x_std, RngStream& rng);

// Reference core: t x (k+1) i.i.d. U(0,1) entries.
Eigen::MatrixXd core_naive(int t, int k, RngStream& rng);

struct MalformResult {
  Eigen::MatrixXd data;  // same shape as the input, row order preserved
  double theta;          // calibrated copula parameter
  double rho_bar;        // mean upper-triangle Spearman used for calibration
};

// Replaces the marginals listed in ind (0-based, distinct, k >= 2) with
// samples of the k-variate Archimedean copula while keeping every other
// column bitwise unchanged and every univariate marginal distribution
// intact:
//   1. standardize the ind columns (sample mean / std, denominator t-1),
//   2. theta  = theta_from_rho(family, mean upper-triangle Spearman of
//      the ind columns),
//   3. core   = core(x_std) or core_naive(t, k),
//   4. frailty per row from core column k+1 (quantile for Clayton/AMH;
//      for Gumbel a batch of positive-stable draws sorted and matched to
//      the ranks of core column k+1),
//   5. u_row  = arch_sampler(core columns 1..k, frailty),
//   6. column ind[j] = std_j * std_normal_quantile(u_j) + mean_j.
MalformResult gcop2arch(const Eigen::MatrixXd& x, Family family,
                        std::span<const int> ind, CoreKind core_kind,
                        RngStream& rng);

}  // namespace gcop
