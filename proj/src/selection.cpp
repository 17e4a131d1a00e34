#include "gcop/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>

#include "gcop/errors.hpp"

namespace gcop {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Eigen::MatrixXd submatrix(const CovMatrix& m, const std::vector<int>& idx) {
  const int s = static_cast<int>(idx.size());
  Eigen::MatrixXd out(s, s);
  for (int a = 0; a < s; ++a)
    for (int b = 0; b < s; ++b) out(a, b) = m(idx[a], idx[b]);
  return out;
}

// Log-determinant via Cholesky; -inf for numerically non-PD candidates.
double logdet_or_neginf(const Eigen::MatrixXd& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) return kNegInf;
  double ld = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double d = llt.matrixLLT()(i, i);
    if (!(d > 0.0) || !std::isfinite(d)) return kNegInf;
    ld += std::log(d);
  }
  return 2.0 * ld;
}

std::string subset_string(const std::vector<int>& idx) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << idx[i];
  os << "}";
  return os.str();
}

}  // namespace

std::vector<int> EliminationOrder::kept_last(int k) const {
  const int n = static_cast<int>(removal_sequence.size());
  if (k < 0 || k > n) throw std::domain_error("kept_last: k out of range");
  std::vector<int> kept(removal_sequence.end() - k, removal_sequence.end());
  std::sort(kept.begin(), kept.end());
  return kept;
}

const char* mev_rule_name(MevRule rule) {
  return rule == MevRule::max_kept ? "max-kept" : "min-kept";
}

EliminationOrder mev_order(const CovMatrix& m2, MevRule rule) {
  const int n = static_cast<int>(m2.rows());
  if (m2.cols() != n || n < 1) throw std::invalid_argument("mev_order: square matrix required");
  if (logdet_or_neginf(m2) == kNegInf)
    throw singularity_error("mev_order: covariance is not positive definite");

  std::vector<int> surviving(n);
  std::iota(surviving.begin(), surviving.end(), 0);
  EliminationOrder order;
  order.removal_sequence.reserve(n);

  std::vector<int> candidate;
  while (surviving.size() > 1) {
    int best_idx = -1;
    double best = 0.0;
    for (const int i : surviving) {
      candidate.clear();
      for (const int j : surviving)
        if (j != i) candidate.push_back(j);
      const double ld = logdet_or_neginf(submatrix(m2, candidate));
      const bool better = best_idx == -1 ||
                          (rule == MevRule::max_kept ? ld > best : ld < best);
      if (better) {
        best_idx = i;
        best = ld;
      }
    }
    order.removal_sequence.push_back(best_idx);
    surviving.erase(std::find(surviving.begin(), surviving.end(), best_idx));
  }
  order.removal_sequence.push_back(surviving.front());
  return order;
}

EliminationOrder jsbs_order(const CovMatrix& m2, const Cumulant3& m3) {
  const int n = static_cast<int>(m2.rows());
  if (m2.cols() != n || m3.dim() != n)
    throw std::invalid_argument("jsbs_order: dimension mismatch");

  std::vector<int> surviving(n);
  std::iota(surviving.begin(), surviving.end(), 0);
  EliminationOrder order;
  order.removal_sequence.reserve(n);

  std::vector<int> candidate;
  while (surviving.size() > 1) {
    int best_idx = -1;
    double best = 0.0;
    for (const int i : surviving) {
      candidate.clear();
      for (const int j : surviving)
        if (j != i) candidate.push_back(j);
      double lj;
      try {
        lj = js_statistic_log(submatrix(m2, candidate), m3.slice(candidate));
      } catch (const singularity_error&) {
        throw singularity_error("jsbs_order: singular sub-covariance for subset " +
                                subset_string(candidate));
      }
      if (best_idx == -1 || lj > best) {
        best_idx = i;
        best = lj;
      }
    }
    order.removal_sequence.push_back(best_idx);
    surviving.erase(std::find(surviving.begin(), surviving.end(), best_idx));
  }
  order.removal_sequence.push_back(surviving.front());
  return order;
}

EliminationOrder jsbs_order(const Eigen::MatrixXd& x) {
  if (x.rows() <= x.cols())
    throw std::domain_error("jsbs_order: need more rows than columns");
  return jsbs_order(covariance(x), third_cumulant(x));
}

}  // namespace gcop
