#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "transitopt/geo.hpp"

namespace transitopt {

struct DemandNode {
  std::string id;
  LatLon location;
  double population = 0.0;  // non-negative
};

struct FacilityCandidate {
  std::string id;
  LatLon location;
  int route_order = 0;                // 1-based position along the route
  std::vector<double> attributes;    // decision criteria, model-wide names
  double weight = 1.0;               // in (0, 1], filled by the ranking step
};

struct Radii {
  double r0_m = 500.0;  // demand (walking) neighborhood
  double r1_m = 400.0;  // competitor neighborhood
};

/// Immutable spatial instance: facilities sorted by route order, demand
/// nodes, pairwise geodesic distances and the two neighborhood systems.
/// Safe to share across threads after construction.
class SpatialModel {
 public:
  SpatialModel() = default;

  /// Validates the inputs, sorts facilities by route order and builds all
  /// distances and neighborhoods. Throws InputError/IngestError on invalid
  /// records (bad coordinates, negative population, broken route order).
  SpatialModel(std::vector<FacilityCandidate> facilities,
               std::vector<DemandNode> demand_nodes,
               std::vector<std::string> attribute_names, Radii radii);

  std::size_t num_facilities() const { return facilities_.size(); }
  std::size_t num_demand_nodes() const { return demand_nodes_.size(); }
  const std::vector<FacilityCandidate>& facilities() const { return facilities_; }
  const std::vector<DemandNode>& demand_nodes() const { return demand_nodes_; }
  const std::vector<std::string>& attribute_names() const { return attribute_names_; }
  const Radii& radii() const { return radii_; }

  /// Meters between facility j and demand node k.
  double distance(std::size_t j, std::size_t k) const {
    return dist_fd_[j * demand_nodes_.size() + k];
  }
  /// Meters between facilities j and i.
  double facility_distance(std::size_t j, std::size_t i) const {
    return dist_ff_[j * facilities_.size() + i];
  }

  /// Demand nodes within the walking radius of facility j.
  const std::vector<int>& demand_neighborhood(std::size_t j) const { return demand_near_[j]; }
  /// Competing facilities within the competition radius of j (j excluded).
  const std::vector<int>& competitor_neighborhood(std::size_t j) const { return competitors_[j]; }
  int max_competitors(std::size_t j) const { return static_cast<int>(competitors_[j].size()); }
  /// Facilities within the walking radius of demand node i (demand-side
  /// mirror of demand_neighborhood).
  const std::vector<int>& facilities_near_demand(std::size_t i) const { return facilities_near_[i]; }

  std::vector<double> weights() const;
  void set_weights(std::span<const double> w);

 private:
  std::vector<FacilityCandidate> facilities_;
  std::vector<DemandNode> demand_nodes_;
  std::vector<std::string> attribute_names_;
  Radii radii_;
  std::vector<double> dist_fd_;  // |F| x |D|
  std::vector<double> dist_ff_;  // |F| x |F|
  std::vector<std::vector<int>> demand_near_;     // A_j
  std::vector<std::vector<int>> competitors_;     // F_j
  std::vector<std::vector<int>> facilities_near_; // N_i
};

/// Same instance with neighborhoods rebuilt for new radii.
SpatialModel build_neighborhoods(const SpatialModel& model, Radii radii);

/// Displaces every facility and demand node by an independent uniform
/// offset of magnitude at most max_offset_m, redraws facility weights
/// uniformly from (weight_lo, weight_hi], and rebuilds neighborhoods.
/// Deterministic for a fixed seed.
SpatialModel perturb_instance(const SpatialModel& model, double max_offset_m,
                              double weight_lo, double weight_hi,
                              std::uint64_t seed);

}  // namespace transitopt
