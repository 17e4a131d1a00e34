#pragma once

#include <vector>

#include <Eigen/Core>

#include "gcop/cumulants.hpp"

namespace gcop {

// Backward-elimination order: removal_sequence[0] is removed first (least
// informative), the last element is the final survivor.
struct EliminationOrder {
  std::vector<int> removal_sequence;

  // The final k survivors, ascending.
  std::vector<int> kept_last(int k) const;
};

// max_kept: remove the index whose removal leaves the LARGEST determinant
// of the surviving covariance (maximizes the retained ellipsoid volume).
// min_kept flips the comparison (the other reading of the MEV wording).
enum class MevRule { max_kept, min_kept };

const char* mev_rule_name(MevRule rule);

// Greedy MEV elimination on a symmetric positive-definite covariance.
// Ties broken by smallest index. Throws singularity_error for non-PD
// input.
EliminationOrder mev_order(const CovMatrix& m2, MevRule rule = MevRule::max_kept);

// Greedy JSBS elimination: precomputes the covariance and third cumulant
// of x once, then at each step removes the index whose removal yields the
// largest JS statistic of the remaining set (candidates evaluated on
// sliced sub-tensors). Requires t > n.
EliminationOrder jsbs_order(const Eigen::MatrixXd& x);

// Same greedy on precomputed statistics.
EliminationOrder jsbs_order(const CovMatrix& m2, const Cumulant3& m3);

}  // namespace gcop
