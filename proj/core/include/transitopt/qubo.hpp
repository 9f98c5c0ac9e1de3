#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "transitopt/spatial_model.hpp"

namespace transitopt {

struct ModelParams {
  double alpha = 1.0;  // weight exponent, >= 0
  double beta = 1.0;   // distance-decay exponent, > 0
  int p = 1;           // retained-facility count, in [1, |F|]
  double gamma = 0.0;  // penalty strength, > 0 (0 means "derive automatically")

  void validate(std::size_t n) const;
};

/// Symmetric coefficient matrix with a tracked constant offset. The value
/// of a binary assignment is x^t M x + offset. Immutable once built.
class QuboMatrix {
 public:
  QuboMatrix() = default;
  explicit QuboMatrix(std::size_t n) : n_(n), entries_(n * n, 0.0) {}

  std::size_t n() const { return n_; }
  double offset() const { return offset_; }
  void set_offset(double v) { offset_ = v; }

  double at(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  /// Writes both (i, j) and (j, i) so symmetry holds exactly.
  void set(std::size_t i, std::size_t j, double v) {
    entries_[i * n_ + j] = v;
    entries_[j * n_ + i] = v;
  }
  void add(std::size_t i, std::size_t j, double v) {
    entries_[i * n_ + j] += v;
    if (i != j) entries_[j * n_ + i] += v;
  }
  std::span<const double> row(std::size_t i) const {
    return {entries_.data() + i * n_, n_};
  }
  std::vector<double> diagonal() const;

  /// Text form: header "n,offset" then one "i,j,value" triple per nonzero
  /// upper-triangle entry (i <= j), all values in round-trip precision.
  std::string to_text() const;
  static QuboMatrix from_text(const std::string& text);

 private:
  std::size_t n_ = 0;
  std::vector<double> entries_;
  double offset_ = 0.0;
};

/// Disjoint facility subsets with per-subset activation quotas.
struct PartitionScheme {
  std::vector<std::vector<int>> subsets;
  std::vector<int> quotas;

  int total_quota() const;
  /// Throws InputError unless the subsets partition {0..n-1} and every
  /// quota satisfies 0 <= p_k <= |S_k|.
  void validate(std::size_t n) const;
};

/// Single subset covering all indices with quota p.
PartitionScheme make_single_partition(std::size_t n, int p);

/// Contiguous route-order batches of batch_size with a fixed quota; the
/// last (possibly short) batch gets quota min(batch size, quota).
PartitionScheme make_route_partition(std::size_t n, int batch_size, int quota);

/// Contiguous batches whose quotas sum to exactly p, distributed
/// proportionally to batch size (largest remainder, ties to lower index).
PartitionScheme make_route_partition_total(std::size_t n, int batch_size, int p);

struct BinarySolution {
  std::vector<std::uint8_t> bits;
  double objective = 0.0;  // maximization value, offset included
  bool feasible = true;
  int violation = 0;  // sum over subsets of |sum(x in S_k) - p_k|
};

// --- model coefficients ---------------------------------------------------

/// Distance-decayed weighted demand aggregated over the walking
/// neighborhood of facility j; distances are clamped to 1 m before the
/// decay power to avoid the coincident-point singularity.
double aggregated_demand(const SpatialModel& model, std::span<const double> weights,
                         std::size_t j, double alpha, double beta);

/// Diagonal coefficient: the aggregated demand discounted by the
/// competition factor (1+2m)/(1+m)^2 for m competitors.
double linear_coeff(const SpatialModel& model, std::span<const double> weights,
                    std::size_t j, const ModelParams& params);

/// Off-diagonal row coefficient: -linear_coeff(j)/(1+2m_j) when i competes
/// with j, else 0. Always non-positive.
double quadratic_coeff(const SpatialModel& model, std::span<const double> weights,
                       std::size_t j, std::size_t i, const ModelParams& params);

/// Exact nonlinear competition objective: each active facility's
/// aggregated demand is split evenly among itself and its active
/// competitors. Serves as the oracle the quadratic model approximates.
double exact_competition_objective(const SpatialModel& model, std::span<const double> weights,
                                   const ModelParams& params,
                                   std::span<const std::uint8_t> x);

// --- matrix builders -------------------------------------------------------

/// Unconstrained model matrix. Off-diagonal entries are stored symmetrized
/// ((Q_ij + Q_ji)/2), which preserves the quadratic form value.
QuboMatrix build_unconstrained(const SpatialModel& model, std::span<const double> weights,
                               const ModelParams& params);

/// Model matrix with the total-count constraint folded in as a quadratic
/// penalty of strength gamma; the constant part of the penalty is kept in
/// the offset so feasible assignments score exactly as the unconstrained
/// matrix does.
QuboMatrix build_single_constraint(const SpatialModel& model, std::span<const double> weights,
                                   const ModelParams& params);

/// Per-subset quota penalties; couplings stay inside subsets so the
/// interaction graph remains sparse.
QuboMatrix build_partitioned(const SpatialModel& model, std::span<const double> weights,
                             const ModelParams& params, const PartitionScheme& partition);

/// Penalty strength that makes a one-unit constraint violation cost more
/// than any single facility can contribute: 1 + max_j Q_jj.
double auto_gamma(const QuboMatrix& unconstrained);

// --- evaluation ------------------------------------------------------------

/// x^t M x + offset. Throws InputError on dimension mismatch.
double objective_value(const QuboMatrix& q, std::span<const std::uint8_t> x);

/// Exact objective change from flipping bit j, in O(n).
double flip_gain(const QuboMatrix& q, std::span<const std::uint8_t> x, std::size_t j);

/// Constraint violation of x under the partition.
int violation(const PartitionScheme& partition, std::span<const std::uint8_t> x);

/// Packages an assignment with its objective and feasibility diagnostics;
/// a null partition means unconstrained (always feasible).
BinarySolution evaluate_solution(const QuboMatrix& q, std::vector<std::uint8_t> x,
                                 const PartitionScheme* partition = nullptr);

}  // namespace transitopt
