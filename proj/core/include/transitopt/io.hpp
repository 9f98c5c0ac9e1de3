#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "transitopt/analysis.hpp"
#include "transitopt/spatial_model.hpp"

namespace transitopt {

/// Loads demand and facility sources (CSV or GeoJSON by extension) and
/// builds the spatial model. Demand columns: id, lat, lon, population.
/// Facility columns: id, lat, lon, route_order, optionally weight, plus
/// one column per named attribute. Throws IngestError naming the
/// offending record on malformed input.
SpatialModel load_instance(const std::filesystem::path& demand_source,
                           const std::filesystem::path& facility_source, Radii radii);

void write_demand_csv(const std::filesystem::path& path, const SpatialModel& model);
void write_facilities_csv(const std::filesystem::path& path, const SpatialModel& model,
                          bool include_weight);

/// `id,weight` rows in route order.
void write_weights_csv(const std::filesystem::path& path, const SpatialModel& model,
                       std::span<const double> weights);

/// `facility_id,active` rows in route order.
void write_solution_csv(const std::filesystem::path& path, const SpatialModel& model,
                        std::span<const std::uint8_t> x);

/// `demand_id,count` rows.
void write_coverage_csv(const std::filesystem::path& path, const SpatialModel& model,
                        const CoverageProfile& profile);

/// FeatureCollection with facility points (active flag, weight) and
/// demand points (population, active-stop count); for external mapping.
void write_solution_geojson(const std::filesystem::path& path, const SpatialModel& model,
                            std::span<const std::uint8_t> x, const CoverageProfile& profile);

}  // namespace transitopt
