#pragma once

#include <string>
#include <vector>

#include "transitopt/spatial_model.hpp"

namespace transitopt {

enum class CriterionDirection { kBenefit, kCost };

struct CriteriaSpec {
  std::vector<std::string> names;
  std::vector<double> priority_weights;  // strictly positive, sum to 1
  std::vector<CriterionDirection> directions;

  void validate() const;
};

struct TopsisOptions {
  double weight_floor = 1e-6;  // lifts exact-zero closeness into (0, 1]
};

/// Closeness-to-ideal ranking: vector-normalize columns, apply priority
/// weights, measure Euclidean distances to the per-column ideal and
/// anti-ideal, and return d-/(d+ + d-) per row. A row that is both ideal
/// and anti-ideal (single candidate) gets 1. Throws RankingError when a
/// criterion column is all zeros.
std::vector<double> topsis_rank(const std::vector<std::vector<double>>& matrix,
                                const CriteriaSpec& spec, const TopsisOptions& options = {});

/// Facility attribute rows in route order, for feeding topsis_rank.
std::vector<std::vector<double>> alternatives_matrix(const SpatialModel& model);

}  // namespace transitopt
