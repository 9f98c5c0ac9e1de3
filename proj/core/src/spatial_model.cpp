#include "transitopt/spatial_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include "transitopt/errors.hpp"
#include "transitopt/rng.hpp"

namespace transitopt {

SpatialModel::SpatialModel(std::vector<FacilityCandidate> facilities,
                           std::vector<DemandNode> demand_nodes,
                           std::vector<std::string> attribute_names, Radii radii)
    : facilities_(std::move(facilities)),
      demand_nodes_(std::move(demand_nodes)),
      attribute_names_(std::move(attribute_names)),
      radii_(radii) {
  if (radii_.r0_m < 0.0 || radii_.r1_m < 0.0) {
    throw InputError("neighborhood radii must be non-negative");
  }

  std::unordered_set<std::string> seen;
  for (const auto& f : facilities_) {
    validate_coordinate(f.location);
    if (!seen.insert(f.id).second) {
      throw IngestError("duplicate facility id: " + f.id);
    }
    if (f.attributes.size() != attribute_names_.size()) {
      throw IngestError("facility " + f.id + ": expected " +
                        std::to_string(attribute_names_.size()) + " attributes, got " +
                        std::to_string(f.attributes.size()));
    }
  }
  seen.clear();
  for (const auto& d : demand_nodes_) {
    validate_coordinate(d.location);
    if (!seen.insert(d.id).second) {
      throw IngestError("duplicate demand node id: " + d.id);
    }
    if (d.population < 0.0 || !std::isfinite(d.population)) {
      throw IngestError("demand node " + d.id + ": population must be non-negative");
    }
  }

  std::sort(facilities_.begin(), facilities_.end(),
            [](const FacilityCandidate& a, const FacilityCandidate& b) {
              return a.route_order < b.route_order;
            });
  for (std::size_t j = 0; j < facilities_.size(); ++j) {
    if (facilities_[j].route_order != static_cast<int>(j) + 1) {
      throw IngestError("facility " + facilities_[j].id +
                        ": route_order values must form a permutation of 1..|F|");
    }
  }

  const std::size_t nf = facilities_.size();
  const std::size_t nd = demand_nodes_.size();
  dist_fd_.resize(nf * nd);
  dist_ff_.resize(nf * nf);
  demand_near_.assign(nf, {});
  competitors_.assign(nf, {});
  facilities_near_.assign(nd, {});

  for (std::size_t j = 0; j < nf; ++j) {
    for (std::size_t k = 0; k < nd; ++k) {
      const double d = haversine_distance(facilities_[j].location, demand_nodes_[k].location);
      dist_fd_[j * nd + k] = d;
      if (d <= radii_.r0_m) {
        demand_near_[j].push_back(static_cast<int>(k));
        facilities_near_[k].push_back(static_cast<int>(j));
      }
    }
    for (std::size_t i = 0; i < nf; ++i) {
      const double d = haversine_distance(facilities_[j].location, facilities_[i].location);
      dist_ff_[j * nf + i] = d;
      if (i != j && d <= radii_.r1_m) {
        competitors_[j].push_back(static_cast<int>(i));
      }
    }
  }
}

std::vector<double> SpatialModel::weights() const {
  std::vector<double> w;
  w.reserve(facilities_.size());
  for (const auto& f : facilities_) w.push_back(f.weight);
  return w;
}

void SpatialModel::set_weights(std::span<const double> w) {
  if (w.size() != facilities_.size()) {
    throw InputError("weight vector size does not match facility count");
  }
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (!(w[j] > 0.0 && w[j] <= 1.0)) {
      throw InputError("facility " + facilities_[j].id + ": weight must lie in (0, 1]");
    }
    facilities_[j].weight = w[j];
  }
}

SpatialModel build_neighborhoods(const SpatialModel& model, Radii radii) {
  return SpatialModel(model.facilities(), model.demand_nodes(), model.attribute_names(), radii);
}

SpatialModel perturb_instance(const SpatialModel& model, double max_offset_m,
                              double weight_lo, double weight_hi,
                              std::uint64_t seed) {
  if (max_offset_m < 0.0) {
    throw InputError("max_offset_m must be non-negative");
  }
  if (!(weight_lo >= 0.0 && weight_hi > weight_lo && weight_hi <= 1.0)) {
    throw InputError("weight range must satisfy 0 <= lo < hi <= 1");
  }
  std::mt19937_64 rng(seed);
  auto displace = [&](const LatLon& p) {
    const double r = uniform_in(rng, 0.0, max_offset_m);
    const double theta = uniform_in(rng, 0.0, 2.0 * 3.14159265358979323846);
    return offset_by_meters(p, r * std::sin(theta), r * std::cos(theta));
  };

  auto facilities = model.facilities();
  for (auto& f : facilities) {
    f.location = displace(f.location);
    f.weight = uniform_left_open(rng, weight_lo, weight_hi);
  }
  auto demand = model.demand_nodes();
  for (auto& d : demand) d.location = displace(d.location);

  return SpatialModel(std::move(facilities), std::move(demand), model.attribute_names(),
                      model.radii());
}

}  // namespace transitopt
