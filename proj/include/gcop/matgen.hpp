#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "gcop/cumulants.hpp"
#include "gcop/rng.hpp"

namespace gcop {

// Correlation-matrix generator selection for the experiment regimes.
struct CorrelationSpec {
  enum class Kind { random, constant, toeplitz, noised_toeplitz };

  Kind kind = Kind::toeplitz;
  double alpha = 0.0;  // constant: off-diagonal value, in [0,1)
  double rho = 0.5;    // toeplitz / noised_toeplitz, in [0,1)
  double eps = 0.0;    // noised_toeplitz noise amplitude, >= 0
  int m = 0;           // noised_toeplitz unit-vector dimension; 0 -> n
};

const char* correlation_kind_name(CorrelationSpec::Kind kind);

// Sigma = D^(-1/2) M M^T D^(-1/2) with M an n x n matrix of U(0,1)
// entries and D = diag(M M^T). Unit diagonal, PSD by construction.
Eigen::MatrixXd random_correlation(int n, RngStream& rng);

// 1 on the diagonal, alpha elsewhere; PD for alpha in [0,1).
Eigen::MatrixXd constant_correlation(int n, double alpha);

// Entry (i,j) = rho^|i-j|; PD for rho in [0,1).
Eigen::MatrixXd toeplitz_correlation(int n, double rho);

struct NoisedToeplitz {
  Eigen::MatrixXd matrix;
  double eps_used;  // after any PD repair by halving
};

// Toeplitz plus off-diagonal noise eps * <u_i, u_j> with u_1..u_n
// independent uniform unit vectors in dimension m (m = n when m <= 0).
// Unit diagonal preserved. If the smallest eigenvalue drops below 1e-10,
// eps is halved until the matrix is PD (eps_used reports the final value).
NoisedToeplitz noised_toeplitz(int n, double rho, double eps, int m, RngStream& rng);

struct GeneratedCorrelation {
  Eigen::MatrixXd matrix;
  double eps_used;  // meaningful for noised_toeplitz, else the input eps
};

GeneratedCorrelation make_correlation(const CorrelationSpec& spec, int n, RngStream& rng);

// t rows i.i.d. N(0, sigma) via the lower Cholesky factor. Throws
// singularity_error if sigma is not positive definite.
Eigen::MatrixXd mvn_sample(const Eigen::MatrixXd& sigma, int t, RngStream& rng);

// Header-free row-major CSV with 17 significant digits (lossless round
// trip for doubles). Used by the harness matrix cache.
void save_matrix_csv(const std::string& path, const Eigen::MatrixXd& matrix);
Eigen::MatrixXd load_matrix_csv(const std::string& path);

}  // namespace gcop
