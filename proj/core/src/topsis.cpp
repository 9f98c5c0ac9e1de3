#include "transitopt/topsis.hpp"

#include <cmath>

#include "transitopt/errors.hpp"

namespace transitopt {

void CriteriaSpec::validate() const {
  if (names.empty()) throw InputError("criteria spec needs at least one criterion");
  if (priority_weights.size() != names.size() || directions.size() != names.size()) {
    throw InputError("criteria names, weights and directions must have equal length");
  }
  double sum = 0.0;
  for (double w : priority_weights) {
    if (!(w > 0.0)) throw InputError("criterion priority weights must be strictly positive");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InputError("criterion priority weights must sum to 1");
  }
}

std::vector<double> topsis_rank(const std::vector<std::vector<double>>& matrix,
                                const CriteriaSpec& spec, const TopsisOptions& options) {
  spec.validate();
  if (matrix.empty()) throw InputError("alternatives matrix needs at least one row");
  const std::size_t rows = matrix.size();
  const std::size_t cols = spec.names.size();
  for (std::size_t r = 0; r < rows; ++r) {
    if (matrix[r].size() != cols) {
      throw InputError("alternatives matrix row " + std::to_string(r) + " has " +
                       std::to_string(matrix[r].size()) + " entries, expected " +
                       std::to_string(cols));
    }
  }

  std::vector<double> norm(cols, 0.0);
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows; ++r) norm[c] += matrix[r][c] * matrix[r][c];
    norm[c] = std::sqrt(norm[c]);
    if (norm[c] == 0.0) {
      throw RankingError("criterion '" + spec.names[c] +
                         "' is zero for every facility; drop the column and rerun");
    }
  }

  // Weighted normalized matrix and per-column ideal / anti-ideal.
  std::vector<std::vector<double>> v(rows, std::vector<double>(cols));
  std::vector<double> ideal(cols), anti(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < rows; ++r) {
      v[r][c] = spec.priority_weights[c] * matrix[r][c] / norm[c];
      lo = std::min(lo, v[r][c]);
      hi = std::max(hi, v[r][c]);
    }
    const bool benefit = spec.directions[c] == CriterionDirection::kBenefit;
    ideal[c] = benefit ? hi : lo;
    anti[c] = benefit ? lo : hi;
  }

  std::vector<double> closeness(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    double dp = 0.0, dm = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      dp += (v[r][c] - ideal[c]) * (v[r][c] - ideal[c]);
      dm += (v[r][c] - anti[c]) * (v[r][c] - anti[c]);
    }
    dp = std::sqrt(dp);
    dm = std::sqrt(dm);
    double c = dp + dm == 0.0 ? 1.0 : dm / (dp + dm);
    if (c == 0.0) c = options.weight_floor;
    closeness[r] = c;
  }
  return closeness;
}

std::vector<std::vector<double>> alternatives_matrix(const SpatialModel& model) {
  std::vector<std::vector<double>> out;
  out.reserve(model.num_facilities());
  for (const auto& f : model.facilities()) out.push_back(f.attributes);
  return out;
}

}  // namespace transitopt
