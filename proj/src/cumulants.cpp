#include "gcop/cumulants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "gcop/errors.hpp"

namespace gcop {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Eigen::MatrixXd centered(const Eigen::MatrixXd& x) {
  return x.rowwise() - x.colwise().mean();
}

// Log-determinant of a symmetric PD matrix via Cholesky; nullopt when the
// factorization fails or a pivot is not strictly positive.
std::optional<double> logdet_spd(const Eigen::MatrixXd& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const auto& L = llt.matrixLLT();
  double ld = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double d = L(i, i);
    if (!(d > 0.0) || !std::isfinite(d)) return std::nullopt;
    ld += std::log(d);
  }
  return 2.0 * ld;
}

}  // namespace

Cumulant3::Cumulant3(int n) : n_(n) {
  if (n < 1) throw std::domain_error("Cumulant3: dimension must be positive");
  data_.assign(static_cast<std::size_t>(n) * n * n, 0.0);
}

void Cumulant3::set_sym(int i, int j, int k, double value) {
  const auto at = [this](int a, int b, int c) -> double& {
    return data_[(static_cast<std::size_t>(a) * n_ + b) * n_ + c];
  };
  at(i, j, k) = value;
  at(i, k, j) = value;
  at(j, i, k) = value;
  at(j, k, i) = value;
  at(k, i, j) = value;
  at(k, j, i) = value;
}

Cumulant3 Cumulant3::slice(std::span<const int> indices) const {
  const int m = static_cast<int>(indices.size());
  for (const int idx : indices)
    if (idx < 0 || idx >= n_) throw std::out_of_range("Cumulant3::slice: index out of range");
  Cumulant3 out(m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        out.data_[(static_cast<std::size_t>(a) * m + b) * m + c] =
            (*this)(indices[a], indices[b], indices[c]);
  return out;
}

CovMatrix covariance(const Eigen::MatrixXd& x) {
  const Eigen::Index t = x.rows();
  if (t < 2) throw std::domain_error("covariance: need at least 2 rows");
  const Eigen::MatrixXd c = centered(x);
  CovMatrix m2 = (c.transpose() * c) / static_cast<double>(t - 1);
  m2 = 0.5 * (m2 + m2.transpose()).eval();
  return m2;
}

Cumulant3 third_cumulant(const Eigen::MatrixXd& x) {
  const Eigen::Index t = x.rows();
  const int n = static_cast<int>(x.cols());
  if (t < 2) throw std::domain_error("third_cumulant: need at least 2 rows");
  const Eigen::MatrixXd c = centered(x);
  Cumulant3 out(n);
  Eigen::VectorXd w(t);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      w = c.col(i).cwiseProduct(c.col(j));
      for (int k = j; k < n; ++k) {
        const double v = w.dot(c.col(k)) / static_cast<double>(t);
        out.set_sym(i, j, k, v);
      }
    }
  }
  return out;
}

Eigen::MatrixXd unfold1(const Cumulant3& c) {
  const int n = c.dim();
  Eigen::MatrixXd b(n, static_cast<Eigen::Index>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) b(i, static_cast<Eigen::Index>(j) * n + k) = c(i, j, k);
  return b;
}

double js_statistic_log(const CovMatrix& m2, const Cumulant3& m3) {
  const int n = static_cast<int>(m2.rows());
  if (m2.cols() != n || m3.dim() != n)
    throw std::invalid_argument("js_statistic: dimension mismatch");

  const auto ld2 = logdet_spd(m2);
  if (!ld2 || *ld2 < std::log(1e-300))
    throw singularity_error("js_statistic: covariance determinant below guard");

  const Eigen::MatrixXd b = unfold1(m3);
  const Eigen::MatrixXd gram = b * b.transpose();

  double ldg;
  if (const auto ld = logdet_spd(gram)) {
    ldg = *ld;
  } else {
    // PSD fallback: nonpositive eigenvalue means a singular Gram, JS = 0.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    if (es.info() != Eigen::Success)
      throw singularity_error("js_statistic: Gram eigendecomposition failed");
    ldg = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double ev = es.eigenvalues()(i);
      if (!(ev > 0.0)) return kNegInf;
      ldg += std::log(ev);
    }
  }
  return 0.5 * ldg - 1.5 * (*ld2);
}

double js_statistic(const CovMatrix& m2, const Cumulant3& m3) {
  const double lj = js_statistic_log(m2, m3);
  return lj == kNegInf ? 0.0 : std::exp(lj);
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t t = values.size();
  std::vector<std::size_t> order(t);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(t);
  std::size_t i = 0;
  while (i < t) {
    std::size_t j = i;
    while (j + 1 < t && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;  // 1-based
    for (std::size_t l = i; l <= j; ++l) ranks[order[l]] = avg;
    i = j + 1;
  }
  return ranks;
}

Eigen::MatrixXd spearman_matrix(const Eigen::MatrixXd& x) {
  const Eigen::Index t = x.rows();
  const int n = static_cast<int>(x.cols());
  if (t < 2) throw std::domain_error("spearman_matrix: need at least 2 rows");
  Eigen::MatrixXd r(t, n);
  std::vector<double> col(t);
  for (int j = 0; j < n; ++j) {
    for (Eigen::Index l = 0; l < t; ++l) col[static_cast<std::size_t>(l)] = x(l, j);
    const auto ranks = average_ranks(col);
    for (Eigen::Index l = 0; l < t; ++l) r(l, j) = ranks[static_cast<std::size_t>(l)];
  }
  const Eigen::MatrixXd c = centered(r);
  Eigen::VectorXd norms(n);
  for (int j = 0; j < n; ++j) norms(j) = c.col(j).norm();
  Eigen::MatrixXd rho = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double denom = norms(i) * norms(j);
      const double v = denom > 0.0 ? c.col(i).dot(c.col(j)) / denom : 0.0;
      rho(i, j) = v;
      rho(j, i) = v;
    }
  }
  return rho;
}

}  // namespace gcop
