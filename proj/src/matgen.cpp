#include "gcop/matgen.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "gcop/errors.hpp"

namespace gcop {

namespace {

constexpr double kPdGuard = 1e-10;

double min_eigenvalue(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw singularity_error("min_eigenvalue: eigendecomposition failed");
  return es.eigenvalues()(0);
}

}  // namespace

const char* correlation_kind_name(CorrelationSpec::Kind kind) {
  switch (kind) {
    case CorrelationSpec::Kind::random:
      return "random";
    case CorrelationSpec::Kind::constant:
      return "constant";
    case CorrelationSpec::Kind::toeplitz:
      return "toeplitz";
    case CorrelationSpec::Kind::noised_toeplitz:
      return "noised-toeplitz";
  }
  return "?";
}

Eigen::MatrixXd random_correlation(int n, RngStream& rng) {
  if (n < 2) throw std::domain_error("random_correlation: n must be >= 2");
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = rng.uniform_open01();
  Eigen::MatrixXd a = m * m.transpose();
  const Eigen::VectorXd inv_sd = a.diagonal().array().sqrt().inverse();
  Eigen::MatrixXd sigma = inv_sd.asDiagonal() * a * inv_sd.asDiagonal();
  sigma = 0.5 * (sigma + sigma.transpose()).eval();
  sigma.diagonal().setOnes();
  return sigma;
}

Eigen::MatrixXd constant_correlation(int n, double alpha) {
  if (n < 1) throw std::domain_error("constant_correlation: n must be positive");
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw std::domain_error("constant_correlation: alpha must lie in [0,1)");
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Constant(n, n, alpha);
  sigma.diagonal().setOnes();
  return sigma;
}

Eigen::MatrixXd toeplitz_correlation(int n, double rho) {
  if (n < 1) throw std::domain_error("toeplitz_correlation: n must be positive");
  if (!(rho >= 0.0 && rho < 1.0))
    throw std::domain_error("toeplitz_correlation: rho must lie in [0,1)");
  Eigen::MatrixXd sigma(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sigma(i, j) = std::pow(rho, std::abs(i - j));
  return sigma;
}

NoisedToeplitz noised_toeplitz(int n, double rho, double eps, int m, RngStream& rng) {
  if (!(eps >= 0.0)) throw std::domain_error("noised_toeplitz: eps must be nonnegative");
  if (m <= 0) m = n;
  if (m < 2) throw std::domain_error("noised_toeplitz: m must be >= 2");
  const Eigen::MatrixXd base = toeplitz_correlation(n, rho);

  // Unit vectors in dimension m; E_ij = eps * <u_i, u_j> off the diagonal.
  Eigen::MatrixXd u(n, m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) u(i, j) = rng.normal();
    u.row(i) /= u.row(i).norm();
  }
  Eigen::MatrixXd noise = u * u.transpose();
  noise.diagonal().setZero();
  noise = 0.5 * (noise + noise.transpose()).eval();

  double eps_used = eps;
  Eigen::MatrixXd sigma = base + eps_used * noise;
  while (eps_used > 1e-12 && min_eigenvalue(sigma) < kPdGuard) {
    eps_used *= 0.5;
    sigma = base + eps_used * noise;
  }
  if (eps_used <= 1e-12 && eps > 0.0 && min_eigenvalue(sigma) < kPdGuard) {
    eps_used = 0.0;
    sigma = base;
  }
  return {std::move(sigma), eps_used};
}

GeneratedCorrelation make_correlation(const CorrelationSpec& spec, int n, RngStream& rng) {
  switch (spec.kind) {
    case CorrelationSpec::Kind::random:
      return {random_correlation(n, rng), spec.eps};
    case CorrelationSpec::Kind::constant:
      return {constant_correlation(n, spec.alpha), spec.eps};
    case CorrelationSpec::Kind::toeplitz:
      return {toeplitz_correlation(n, spec.rho), spec.eps};
    case CorrelationSpec::Kind::noised_toeplitz: {
      auto r = noised_toeplitz(n, spec.rho, spec.eps, spec.m, rng);
      return {std::move(r.matrix), r.eps_used};
    }
  }
  throw std::logic_error("make_correlation: unreachable");
}

Eigen::MatrixXd mvn_sample(const Eigen::MatrixXd& sigma, int t, RngStream& rng) {
  const int n = static_cast<int>(sigma.rows());
  if (sigma.cols() != n || n < 1)
    throw std::invalid_argument("mvn_sample: square covariance required");
  if (t < 1) throw std::domain_error("mvn_sample: t must be positive");
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success)
    throw singularity_error("mvn_sample: covariance is not positive definite");
  const Eigen::MatrixXd l = llt.matrixL();
  Eigen::MatrixXd z(t, n);
  for (int row = 0; row < t; ++row)
    for (int j = 0; j < n; ++j) z(row, j) = rng.normal();
  return z * l.transpose();
}

void save_matrix_csv(const std::string& path, const Eigen::MatrixXd& matrix) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_matrix_csv: cannot open " + path);
  char buf[40];
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", matrix(i, j));
      out << buf << (j + 1 < matrix.cols() ? "," : "");
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("save_matrix_csv: write failed for " + path);
}

Eigen::MatrixXd load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_matrix_csv: cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      std::size_t pos = 0;
      const double v = std::stod(cell, &pos);
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error("load_matrix_csv: ragged rows in " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("load_matrix_csv: empty file " + path);
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

}  // namespace gcop
