#include "transitopt/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "transitopt/errors.hpp"

namespace transitopt {

namespace {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double to_number(const std::string& field, const std::string& context) {
  double v = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw IngestError(context + ": non-numeric value '" + field + "'");
  }
  return v;
}

// Minimal RFC-4180-ish CSV: quoted fields may contain commas and doubled
// quotes; no multi-line fields.
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  out.push_back(std::move(field));
  return out;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name, const std::string& file) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw IngestError(file + ": missing column '" + name + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
  }
};

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open file: " + path.string());
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw IngestError(path.string() + ": empty file");
  table.header = split_csv_line(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto row = split_csv_line(line);
    if (row.size() != table.header.size()) {
      throw IngestError(path.string() + ": row with " + std::to_string(row.size()) +
                        " fields, expected " + std::to_string(table.header.size()) + ": '" +
                        line + "'");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

bool is_geojson(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  return ext == ".geojson" || ext == ".json";
}

json read_geojson(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open file: " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw IngestError(path.string() + ": invalid JSON: " + e.what());
  }
  if (doc.value("type", "") != "FeatureCollection" || !doc.contains("features")) {
    throw IngestError(path.string() + ": expected a GeoJSON FeatureCollection");
  }
  return doc;
}

LatLon point_geometry(const json& feature, const std::string& context) {
  if (!feature.contains("geometry") || feature["geometry"].is_null() ||
      feature["geometry"].value("type", "") != "Point") {
    throw IngestError(context + ": expected Point geometry");
  }
  const auto& coords = feature["geometry"]["coordinates"];
  if (!coords.is_array() || coords.size() < 2) {
    throw IngestError(context + ": malformed Point coordinates");
  }
  return {coords[1].get<double>(), coords[0].get<double>()};
}

std::string property_as_string(const json& props, const std::string& key,
                               const std::string& context) {
  if (!props.contains(key)) throw IngestError(context + ": missing property '" + key + "'");
  const auto& v = props[key];
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_double(v.get<double>());
  throw IngestError(context + ": property '" + key + "' is not a string or number");
}

double property_as_number(const json& props, const std::string& key,
                          const std::string& context) {
  if (!props.contains(key)) throw IngestError(context + ": missing property '" + key + "'");
  const auto& v = props[key];
  if (!v.is_number()) throw IngestError(context + ": property '" + key + "' is not numeric");
  return v.get<double>();
}

std::vector<DemandNode> load_demand(const std::filesystem::path& path) {
  std::vector<DemandNode> nodes;
  if (is_geojson(path)) {
    const json doc = read_geojson(path);
    for (const auto& feature : doc["features"]) {
      const auto& props = feature.value("properties", json::object());
      const std::string ctx = path.string() + " demand feature";
      DemandNode node;
      node.id = property_as_string(props, "id", ctx);
      node.location = point_geometry(feature, ctx + " id=" + node.id);
      node.population = property_as_number(props, "population", ctx + " id=" + node.id);
      nodes.push_back(std::move(node));
    }
    return nodes;
  }
  const CsvTable table = read_csv(path);
  const auto ci = table.column("id", path.string());
  const auto clat = table.column("lat", path.string());
  const auto clon = table.column("lon", path.string());
  const auto cpop = table.column("population", path.string());
  for (const auto& row : table.rows) {
    DemandNode node;
    node.id = row[ci];
    const std::string ctx = path.string() + " demand id=" + node.id;
    node.location = {to_number(row[clat], ctx), to_number(row[clon], ctx)};
    node.population = to_number(row[cpop], ctx);
    nodes.push_back(std::move(node));
  }
  return nodes;
}

std::pair<std::vector<FacilityCandidate>, std::vector<std::string>> load_facilities(
    const std::filesystem::path& path) {
  std::vector<FacilityCandidate> facilities;
  std::vector<std::string> attribute_names;
  const auto is_reserved = [](const std::string& name) {
    return name == "id" || name == "lat" || name == "lon" || name == "route_order" ||
           name == "weight";
  };

  if (is_geojson(path)) {
    const json doc = read_geojson(path);
    // Attribute names: numeric non-reserved properties of the first
    // feature, alphabetical for a stable order.
    if (!doc["features"].empty()) {
      const auto& props = doc["features"][0].value("properties", json::object());
      for (const auto& [key, value] : props.items()) {
        if (!is_reserved(key) && value.is_number()) attribute_names.push_back(key);
      }
      std::sort(attribute_names.begin(), attribute_names.end());
    }
    for (const auto& feature : doc["features"]) {
      const auto& props = feature.value("properties", json::object());
      const std::string ctx = path.string() + " facility feature";
      FacilityCandidate f;
      f.id = property_as_string(props, "id", ctx);
      const std::string fctx = ctx + " id=" + f.id;
      f.location = point_geometry(feature, fctx);
      f.route_order = static_cast<int>(property_as_number(props, "route_order", fctx));
      if (props.contains("weight")) f.weight = property_as_number(props, "weight", fctx);
      for (const auto& name : attribute_names) {
        f.attributes.push_back(property_as_number(props, name, fctx));
      }
      facilities.push_back(std::move(f));
    }
    return {std::move(facilities), std::move(attribute_names)};
  }

  const CsvTable table = read_csv(path);
  const auto ci = table.column("id", path.string());
  const auto clat = table.column("lat", path.string());
  const auto clon = table.column("lon", path.string());
  const auto corder = table.column("route_order", path.string());
  std::size_t cweight = table.header.size();
  std::vector<std::size_t> attr_cols;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (table.header[c] == "weight") {
      cweight = c;
    } else if (!is_reserved(table.header[c])) {
      attr_cols.push_back(c);
      attribute_names.push_back(table.header[c]);
    }
  }
  for (const auto& row : table.rows) {
    FacilityCandidate f;
    f.id = row[ci];
    const std::string ctx = path.string() + " facility id=" + f.id;
    f.location = {to_number(row[clat], ctx), to_number(row[clon], ctx)};
    f.route_order = static_cast<int>(to_number(row[corder], ctx));
    if (cweight < table.header.size()) f.weight = to_number(row[cweight], ctx);
    for (std::size_t c : attr_cols) f.attributes.push_back(to_number(row[c], ctx));
    facilities.push_back(std::move(f));
  }
  return {std::move(facilities), std::move(attribute_names)};
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write file: " + path.string());
  return out;
}

}  // namespace

SpatialModel load_instance(const std::filesystem::path& demand_source,
                           const std::filesystem::path& facility_source, Radii radii) {
  auto demand = load_demand(demand_source);
  auto [facilities, attribute_names] = load_facilities(facility_source);
  if (facilities.empty()) {
    throw IngestError(facility_source.string() + ": no facility records");
  }
  return SpatialModel(std::move(facilities), std::move(demand), std::move(attribute_names),
                      radii);
}

void write_demand_csv(const std::filesystem::path& path, const SpatialModel& model) {
  auto out = open_out(path);
  out << "id,lat,lon,population\n";
  for (const auto& d : model.demand_nodes()) {
    out << d.id << ',' << format_double(d.location.lat) << ',' << format_double(d.location.lon)
        << ',' << format_double(d.population) << '\n';
  }
}

void write_facilities_csv(const std::filesystem::path& path, const SpatialModel& model,
                          bool include_weight) {
  auto out = open_out(path);
  out << "id,lat,lon,route_order";
  if (include_weight) out << ",weight";
  for (const auto& name : model.attribute_names()) out << ',' << name;
  out << '\n';
  for (const auto& f : model.facilities()) {
    out << f.id << ',' << format_double(f.location.lat) << ',' << format_double(f.location.lon)
        << ',' << f.route_order;
    if (include_weight) out << ',' << format_double(f.weight);
    for (double a : f.attributes) out << ',' << format_double(a);
    out << '\n';
  }
}

void write_weights_csv(const std::filesystem::path& path, const SpatialModel& model,
                       std::span<const double> weights) {
  if (weights.size() != model.num_facilities()) {
    throw InputError("weight vector size does not match facility count");
  }
  auto out = open_out(path);
  out << "id,weight\n";
  for (std::size_t j = 0; j < model.num_facilities(); ++j) {
    out << model.facilities()[j].id << ',' << format_double(weights[j]) << '\n';
  }
}

void write_solution_csv(const std::filesystem::path& path, const SpatialModel& model,
                        std::span<const std::uint8_t> x) {
  if (x.size() != model.num_facilities()) throw InputError("assignment dimension mismatch");
  auto out = open_out(path);
  out << "facility_id,active\n";
  for (std::size_t j = 0; j < model.num_facilities(); ++j) {
    out << model.facilities()[j].id << ',' << (x[j] ? 1 : 0) << '\n';
  }
}

void write_coverage_csv(const std::filesystem::path& path, const SpatialModel& model,
                        const CoverageProfile& profile) {
  auto out = open_out(path);
  out << "demand_id,count\n";
  for (std::size_t i = 0; i < model.num_demand_nodes(); ++i) {
    out << model.demand_nodes()[i].id << ',' << profile.counts[i] << '\n';
  }
}

void write_solution_geojson(const std::filesystem::path& path, const SpatialModel& model,
                            std::span<const std::uint8_t> x, const CoverageProfile& profile) {
  json features = json::array();
  for (std::size_t j = 0; j < model.num_facilities(); ++j) {
    const auto& f = model.facilities()[j];
    features.push_back({
        {"type", "Feature"},
        {"geometry", {{"type", "Point"}, {"coordinates", {f.location.lon, f.location.lat}}}},
        {"properties",
         {{"id", f.id},
          {"route_order", f.route_order},
          {"weight", f.weight},
          {"active", x[j] ? 1 : 0}}},
    });
  }
  for (std::size_t i = 0; i < model.num_demand_nodes(); ++i) {
    const auto& d = model.demand_nodes()[i];
    features.push_back({
        {"type", "Feature"},
        {"geometry", {{"type", "Point"}, {"coordinates", {d.location.lon, d.location.lat}}}},
        {"properties",
         {{"id", d.id}, {"population", d.population}, {"count", profile.counts[i]}}},
    });
  }
  const json doc = {{"type", "FeatureCollection"}, {"features", features}};
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
}

}  // namespace transitopt
