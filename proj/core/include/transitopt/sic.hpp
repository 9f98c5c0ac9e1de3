#pragma once

#include <span>
#include <vector>

#include "transitopt/qubo.hpp"
#include "transitopt/spatial_model.hpp"

namespace transitopt {

/// Spatial-interaction baseline: demand-side view of the same instance.
/// N_i holds the facilities within the walking radius of demand node i.
struct SicModel {
  std::size_t num_facilities = 0;
  std::vector<double> populations;
  std::vector<double> weights;
  std::vector<std::vector<int>> neighborhoods;        // N_i
  std::vector<std::vector<double>> inverse_distance;  // 1/max(d_ij, 1m), aligned with N_i
  bool restrict_to_neighborhood = true;
};

SicModel make_sic_model(const SpatialModel& model, std::span<const double> weights);

/// Total interaction captured by the active set: each demand node
/// contributes population * s/(1+s) where s accumulates weight-over-
/// distance terms of its active neighbors. Saturating, hence monotone in
/// activation.
double sic_objective(const SicModel& model, std::span<const std::uint8_t> x);

enum class SicMode { kExhaustive, kLocalSearch };

/// Exact enumeration of all p-subsets (|F| <= 24), or best-improvement
/// swap local search from the greedy-by-weight start. Both keep exactly p
/// facilities active.
BinarySolution sic_solve(const SicModel& model, int p, SicMode mode);

}  // namespace transitopt
