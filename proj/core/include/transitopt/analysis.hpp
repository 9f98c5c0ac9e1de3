#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "transitopt/qubo.hpp"
#include "transitopt/solver.hpp"
#include "transitopt/spatial_model.hpp"

namespace transitopt {

struct CoverageProfile {
  std::vector<int> counts;  // active facilities within walking distance, per demand node
  int min = 0;
  int median = 0;  // lower-middle element for even counts
  int max = 0;
  int covered_count = 0;  // demand nodes with at least one active facility
};

CoverageProfile coverage_profile(const SpatialModel& model, std::span<const std::uint8_t> x);

struct BoundSweepRow {
  int p = 0;
  double best = 0.0;
  double diagonal_bound = 0.0;
  double eigen_bound = 0.0;
  double ratio = 0.0;  // best / eigen_bound
};

/// For each p: build the batch-partitioned problem, solve it with the
/// hybrid solver, and record the best objective against both bounds.
std::vector<BoundSweepRow> bound_ratio_sweep(const SpatialModel& model,
                                             std::span<const double> weights,
                                             const ModelParams& params,
                                             std::span<const int> p_values, int batch_size,
                                             const SolverConfig& solver,
                                             AnnealerBackend& backend);

enum class Alternative { kGreater, kLess };
enum class ZeroPolicy { kDiscard, kPratt };

struct WilcoxonResult {
  double statistic = 0.0;  // W: rank sum of positive differences
  double p_value = 1.0;
  int n_used = 0;  // differences entering the ranking
  bool exact = false;
};

/// One-sided Wilcoxon signed-rank test. Zeros are discarded by default
/// (Pratt keeps them in the ranking); ties get average ranks. Exact
/// p-value by sign-pattern enumeration up to 25 nonzero differences,
/// normal approximation with continuity and tie corrections beyond.
/// Throws NumericalError when no nonzero difference remains.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> differences,
                                    Alternative alternative = Alternative::kGreater,
                                    ZeroPolicy zeros = ZeroPolicy::kDiscard);

struct ComparisonRecord {
  std::uint64_t instance_seed = 0;
  int p = 0;
  int coverage_difference = 0;  // QUBO-pipeline covered minus SIC-pipeline covered
  double qubo_objective = 0.0;
  double sic_objective = 0.0;
  int qubo_covered = 0;
  int sic_covered = 0;
};

struct ComparisonSummary {
  int p = 0;
  double average_difference = 0.0;
  double statistic = 0.0;
  double p_value = 1.0;
  bool reject_null = false;  // at the configured significance level
};

struct ComparisonOptions {
  int n_instances = 30;
  std::vector<int> p_values{45, 40, 35, 30, 25};
  std::uint64_t seed = 1;
  double max_offset_m = 150.0;
  double weight_lo = 0.0;
  double weight_hi = 1.0;
  double alpha = 1.0;  // model exponents for the QUBO pipeline
  double beta = 1.0;
  int batch_size = 5;
  double significance = 0.05;
  SolverConfig solver;
  std::size_t threads = 0;  // 0: hardware concurrency
};

struct ComparisonResult {
  std::vector<ComparisonRecord> records;
  std::vector<ComparisonSummary> summaries;
};

/// Perturbs the base instance n times, solves each with the partitioned
/// QUBO pipeline and the SIC swap search, and compares demand coverage
/// per p with a one-sided signed-rank test. Instances run concurrently;
/// per-instance seeds derive from the master seed so scheduling cannot
/// change the outcome.
ComparisonResult run_comparison_experiment(const SpatialModel& base_model,
                                           const ComparisonOptions& options);

/// First-order service-time saving: removed stops times per-stop dwell
/// plus acceleration penalty, in minutes.
double travel_time_estimate(int n_removed_stops, double dwell_seconds_per_stop,
                            double penalty_seconds_per_stop);

}  // namespace transitopt
