#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

namespace gcop {

using CovMatrix = Eigen::MatrixXd;

// Dense super-symmetric order-3 tensor of central third moments.
// Stored n*n*n with write-through symmetrization: set_sym writes all six
// index permutations, so (i,j,k) is exactly equal under any permutation.
class Cumulant3 {
 public:
  explicit Cumulant3(int n);

  int dim() const { return n_; }

  double operator()(int i, int j, int k) const {
    return data_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k];
  }

  void set_sym(int i, int j, int k, double value);

  // Sub-tensor restricted to the given marginal indices.
  Cumulant3 slice(std::span<const int> indices) const;

 private:
  int n_;
  std::vector<double> data_;
};

// Sample covariance with denominator t-1. Input: t x n, rows are
// realisations. Throws std::domain_error for t < 2.
CovMatrix covariance(const Eigen::MatrixXd& x);

// Central third-moment tensor with denominator t (third cumulant).
Cumulant3 third_cumulant(const Eigen::MatrixXd& x);

// Mode-1 unfolding: entry (i, j*n + k) = kappa(i,j,k), an n x n^2 matrix.
Eigen::MatrixXd unfold1(const Cumulant3& c);

// JS(X) = sqrt( det(B B^T) / det(M2)^3 ) with B = unfold1(m3).
// Evaluated in log space (Cholesky of the Gram matrix, eigenvalue
// fallback). Throws singularity_error if det(M2) falls below 1e-300.
double js_statistic(const CovMatrix& m2, const Cumulant3& m3);

// log JS; -infinity when the Gram matrix of the unfolding is singular
// (i.e. JS == 0). Same singularity guard on M2.
double js_statistic_log(const CovMatrix& m2, const Cumulant3& m3);

// Average ranks of a column (1..t, ties share their average rank).
std::vector<double> average_ranks(std::span<const double> values);

// Spearman rank-correlation matrix of the columns of x.
Eigen::MatrixXd spearman_matrix(const Eigen::MatrixXd& x);

}  // namespace gcop
