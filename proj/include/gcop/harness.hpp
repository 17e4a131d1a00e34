#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gcop/copulas.hpp"
#include "gcop/cumulants.hpp"
#include "gcop/malform.hpp"
#include "gcop/matgen.hpp"
#include "gcop/selection.hpp"

namespace gcop {

// How the k malformed indices are drawn each repetition.
//   block:   contiguous run of k indices at a uniform random offset.
//   scatter: k distinct indices uniformly without replacement.
// block is the default: under Toeplitz correlation, scattered indices
// drive the calibrated theta toward independence and the transform
// degenerates (see README).
enum class IndexMode { block, scatter };

const char* index_mode_name(IndexMode mode);

struct ExperimentConfig {
  int n = 20;
  long long t = 20000;
  int k = 4;
  Family family = Family::clayton;
  CoreKind core = CoreKind::eigen;
  CorrelationSpec correlation{};  // toeplitz rho = 0.5
  int reps = 25;
  std::uint64_t seed = 1;
  MevRule mev_rule = MevRule::max_kept;
  IndexMode indices = IndexMode::block;
  int threads = 0;  // 0 = hardware concurrency capped at reps

  // Optional path for the fixed-correlation cache (loaded if present,
  // written after generation otherwise). Ignored for the random kind.
  std::string cov_cache;
};

struct ExperimentRecord {
  int rep = 0;                    // 1-based repetition number
  std::vector<int> malformed;     // 0-based, ascending
  std::vector<int> mev_kept;      // final k survivors of the MEV order
  std::vector<int> jsbs_kept;     // final k survivors of the JSBS order
  int mev_hits = 0;               // |mev_kept  intersect malformed|
  int jsbs_hits = 0;              // |jsbs_kept intersect malformed|
  double cov_change = 0.0;        // Frobenius ratio, original vs malformed
  double theta = 0.0;             // calibrated copula parameter
  double rho_bar = 0.0;           // mean Spearman used for calibration
  std::string error;              // non-empty if the repetition aborted

  bool ok() const { return error.empty(); }
};

// One record per repetition. Each rep derives its own RngStreams from
// (seed, rep): stream ids 8*rep+1 .. 8*rep+4 cover correlation (random
// kind only), sampling, index choice and the malformation; stream 0
// generates the fixed correlation matrix once for non-random kinds.
// A module error aborts only that repetition (error recorded); results
// are byte-identical for a fixed seed regardless of thread count.
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg);

enum class Selector { mev, jsbs };

// (1/reps) * sum_p r_p / k over the given records; throws
// std::domain_error when records is empty. Equals 1 iff every rep
// recovered all malformed variables.
double discriminability(const std::vector<ExperimentRecord>& records, int k,
                        int reps, Selector selector);

// Relative covariance change ||a - b||_F / ||a||_F.
double cov_change(const CovMatrix& sigma_orig, const CovMatrix& sigma_new);

// JSON summary (config block, per-rep records, D-bar summary) and the
// per-rep CSV; both byte-deterministic for a fixed config.
std::string experiment_json(const ExperimentConfig& cfg,
                            const std::vector<ExperimentRecord>& records,
                            double eps_used);
std::string records_csv(const std::vector<ExperimentRecord>& records);

// Entry point of the CLI. Returns 0 on success, 2 on configuration
// errors (including unknown flags), 1 on runtime failures.
int cli_main(int argc, const char* const* argv);

}  // namespace gcop
