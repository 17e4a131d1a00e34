#include "gcop/malform.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "gcop/cumulants.hpp"
#include "gcop/errors.hpp"
#include "gcop/special_functions.hpp"

namespace gcop {

namespace {

constexpr double kStandardizedTol = 1e-6;
constexpr double kEigenvalueGuard = 1e-10;

// ranks[pos] = position of row `pos` in the ascending stable order of the
// column (0-based).
std::vector<int> rank_permutation(const Eigen::VectorXd& column) {
  const std::size_t t = static_cast<std::size_t>(column.size());
  std::vector<int> order(t);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return column(a) < column(b); });
  std::vector<int> ranks(t);
  for (std::size_t i = 0; i < t; ++i) ranks[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
  return ranks;
}

}  // namespace

const char* core_kind_name(CoreKind kind) {
  return kind == CoreKind::eigen ? "eigen" : "naive";
}

Eigen::MatrixXd core(const Eigen::MatrixXd& x_std, RngStream& rng) {
  const Eigen::Index t = x_std.rows();
  const int k = static_cast<int>(x_std.cols());
  if (t < 2 || k < 1) throw std::domain_error("core: need t >= 2 and k >= 1");

  for (int j = 0; j < k; ++j) {
    const double mean = x_std.col(j).mean();
    const double sd = std::sqrt((x_std.col(j).array() - mean).square().sum() /
                                static_cast<double>(t - 1));
    if (std::abs(mean) > kStandardizedTol || std::abs(sd - 1.0) > kStandardizedTol)
      throw precondition_error("core: input columns must be standardized");
  }

  Eigen::MatrixXd x(t, k + 1);
  x.leftCols(k) = x_std;
  for (Eigen::Index l = 0; l < t; ++l) x(l, k) = rng.normal();

  const CovMatrix cov = covariance(x);
  Eigen::VectorXd inv_sd = cov.diagonal().array().sqrt().inverse();
  const Eigen::MatrixXd corr = inv_sd.asDiagonal() * cov * inv_sd.asDiagonal();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(corr);  // eigenvalues ascending
  if (es.info() != Eigen::Success)
    throw singularity_error("core: eigendecomposition failed");
  const Eigen::VectorXd lambda = es.eigenvalues();
  if (lambda(0) < kEigenvalueGuard)
    throw singularity_error("core: correlation matrix is numerically singular");

  // Fix the eigenvector orientation: component sum nonnegative (first
  // nonzero component positive on an exact zero sum). Unoriented vectors
  // can anti-correlate the frailty column with the data's common factor.
  Eigen::MatrixXd u = es.eigenvectors();
  for (int i = 0; i <= k; ++i) {
    double s = u.col(i).sum();
    if (s == 0.0) {
      for (Eigen::Index r = 0; r < u.rows(); ++r) {
        if (u(r, i) != 0.0) {
          s = u(r, i);
          break;
        }
      }
    }
    if (s < 0.0) u.col(i) = -u.col(i);
  }

  const Eigen::MatrixXd y = x * u;
  Eigen::MatrixXd out(t, k + 1);
  for (int i = 0; i <= k; ++i) {
    const double sd = std::sqrt(lambda(i));
    for (Eigen::Index l = 0; l < t; ++l) out(l, i) = scaled_normal_cdf(y(l, i), sd);
  }
  return out;
}

Eigen::MatrixXd core_naive(int t, int k, RngStream& rng) {
  if (t < 2 || k < 1) throw std::domain_error("core_naive: need t >= 2 and k >= 1");
  Eigen::MatrixXd out(t, k + 1);
  for (int l = 0; l < t; ++l)
    for (int j = 0; j <= k; ++j) out(l, j) = rng.uniform_open01();
  return out;
}

MalformResult gcop2arch(const Eigen::MatrixXd& x, Family family,
                        std::span<const int> ind, CoreKind core_kind,
                        RngStream& rng) {
  const Eigen::Index t = x.rows();
  const int n = static_cast<int>(x.cols());
  const int k = static_cast<int>(ind.size());
  if (k < 2) throw std::domain_error("gcop2arch: need at least 2 indices");
  if (k > n) throw std::domain_error("gcop2arch: more indices than columns");
  if (t < 2) throw std::domain_error("gcop2arch: need at least 2 rows");
  {
    std::vector<int> sorted(ind.begin(), ind.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() < 0 || sorted.back() >= n)
      throw std::domain_error("gcop2arch: index out of range");
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::domain_error("gcop2arch: duplicate indices");
  }

  // Per-column moments of the columns being replaced.
  Eigen::VectorXd mu(k), sd(k);
  Eigen::MatrixXd x_sub(t, k);
  for (int j = 0; j < k; ++j) x_sub.col(j) = x.col(ind[j]);
  for (int j = 0; j < k; ++j) {
    mu(j) = x_sub.col(j).mean();
    sd(j) = std::sqrt((x_sub.col(j).array() - mu(j)).square().sum() /
                      static_cast<double>(t - 1));
    if (!(sd(j) > 0.0))
      throw std::domain_error("gcop2arch: constant column cannot be malformed");
  }
  Eigen::MatrixXd x_std(t, k);
  for (int j = 0; j < k; ++j) x_std.col(j) = (x_sub.col(j).array() - mu(j)) / sd(j);

  // theta from the mean upper-triangle Spearman correlation.
  const Eigen::MatrixXd rho = spearman_matrix(x_sub);
  double rho_sum = 0.0;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) rho_sum += rho(i, j);
  const double rho_bar = rho_sum / (0.5 * k * (k - 1));
  const double theta = theta_from_rho(family, rho_bar);
  const CopulaSpec spec = make_copula(family, theta);

  const Eigen::MatrixXd core_mat =
      core_kind == CoreKind::eigen ? core(x_std, rng) : core_naive(static_cast<int>(t), k, rng);

  // Frailty per row, driven by core column k+1.
  Eigen::VectorXd v(t);
  if (family == Family::gumbel) {
    const auto ranks = rank_permutation(core_mat.col(k));
    const auto batch = frailty_batch_sorted(spec, ranks, rng);
    for (Eigen::Index l = 0; l < t; ++l) v(l) = batch[static_cast<std::size_t>(l)];
  } else {
    for (Eigen::Index l = 0; l < t; ++l) v(l) = frailty_quantile(spec, core_mat(l, k));
  }

  Eigen::MatrixXd out = x;
  std::vector<double> xrow(k), urow(k);
  for (Eigen::Index l = 0; l < t; ++l) {
    for (int j = 0; j < k; ++j) xrow[static_cast<std::size_t>(j)] = core_mat(l, j);
    arch_sampler(spec, xrow, v(l), urow);
    for (int j = 0; j < k; ++j)
      out(l, ind[j]) = sd(j) * std_normal_quantile(urow[static_cast<std::size_t>(j)]) + mu(j);
  }
  return {std::move(out), theta, rho_bar};
}

}  // namespace gcop
