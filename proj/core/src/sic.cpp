#include "transitopt/sic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "transitopt/errors.hpp"

namespace transitopt {

SicModel make_sic_model(const SpatialModel& model, std::span<const double> weights) {
  if (weights.size() != model.num_facilities()) {
    throw InputError("weight vector size does not match facility count");
  }
  SicModel out;
  out.num_facilities = model.num_facilities();
  out.populations.reserve(model.num_demand_nodes());
  for (const auto& d : model.demand_nodes()) out.populations.push_back(d.population);
  out.weights.assign(weights.begin(), weights.end());
  out.neighborhoods.resize(model.num_demand_nodes());
  out.inverse_distance.resize(model.num_demand_nodes());
  for (std::size_t i = 0; i < model.num_demand_nodes(); ++i) {
    for (int j : model.facilities_near_demand(i)) {
      out.neighborhoods[i].push_back(j);
      const double d = std::max(model.distance(static_cast<std::size_t>(j), i), 1.0);
      out.inverse_distance[i].push_back(1.0 / d);
    }
  }
  return out;
}

double sic_objective(const SicModel& model, std::span<const std::uint8_t> x) {
  if (x.size() != model.num_facilities) throw InputError("assignment dimension mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < model.neighborhoods.size(); ++i) {
    double s = 0.0;
    const auto& nbrs = model.neighborhoods[i];
    for (std::size_t t = 0; t < nbrs.size(); ++t) {
      if (x[nbrs[t]]) s += model.weights[nbrs[t]] * model.inverse_distance[i][t];
    }
    if (model.restrict_to_neighborhood) {
      total += model.populations[i] * s / (1.0 + s);
    } else {
      // Sensitivity mode: numerator terms for every facility, shared
      // denominator from the neighborhood.
      double num = 0.0;
      for (std::size_t j = 0; j < model.num_facilities; ++j) {
        if (!x[j]) continue;
        bool in_nbhd = false;
        double inv = 0.0;
        for (std::size_t t = 0; t < nbrs.size(); ++t) {
          if (nbrs[t] == static_cast<int>(j)) {
            in_nbhd = true;
            inv = model.inverse_distance[i][t];
            break;
          }
        }
        if (in_nbhd) num += model.populations[i] * model.weights[j] * inv;
      }
      total += num / (1.0 + s);
    }
  }
  return total;
}

namespace {

BinarySolution wrap(const SicModel& model, std::vector<std::uint8_t> x, int p) {
  BinarySolution out;
  out.objective = sic_objective(model, x);
  int active = 0;
  for (auto b : x) active += b;
  out.violation = std::abs(active - p);
  out.feasible = out.violation == 0;
  out.bits = std::move(x);
  return out;
}

BinarySolution sic_exhaustive(const SicModel& model, int p) {
  const std::size_t n = model.num_facilities;
  if (n > 24) throw InputError("exhaustive SIC solve refuses |F| > 24");
  // Enumerate p-subsets in lexicographic order; first maximum wins, which
  // matches the lexicographically-smallest tie rule.
  std::vector<int> combo(p);
  std::iota(combo.begin(), combo.end(), 0);
  std::vector<std::uint8_t> x(n, 0), best_x;
  double best = -std::numeric_limits<double>::infinity();
  while (true) {
    std::fill(x.begin(), x.end(), 0);
    for (int idx : combo) x[idx] = 1;
    const double v = sic_objective(model, x);
    if (v > best) {
      best = v;
      best_x = x;
    }
    int t = p - 1;
    while (t >= 0 && combo[t] == static_cast<int>(n) - p + t) --t;
    if (t < 0) break;
    ++combo[t];
    for (int u = t + 1; u < p; ++u) combo[u] = combo[u - 1] + 1;
  }
  return wrap(model, std::move(best_x), p);
}

BinarySolution sic_local_search(const SicModel& model, int p) {
  const std::size_t n = model.num_facilities;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return model.weights[a] > model.weights[b];
  });
  std::vector<std::uint8_t> x(n, 0);
  for (int r = 0; r < p; ++r) x[order[r]] = 1;

  double current = sic_objective(model, x);
  while (true) {
    int best_out = -1, best_in = -1;
    double best_value = current;
    for (std::size_t a = 0; a < n; ++a) {
      if (!x[a]) continue;
      for (std::size_t b = 0; b < n; ++b) {
        if (x[b]) continue;
        x[a] = 0;
        x[b] = 1;
        const double v = sic_objective(model, x);
        x[a] = 1;
        x[b] = 0;
        if (v > best_value + 1e-12) {
          best_value = v;
          best_out = static_cast<int>(a);
          best_in = static_cast<int>(b);
        }
      }
    }
    if (best_out < 0) break;
    x[best_out] = 0;
    x[best_in] = 1;
    current = best_value;
  }
  return wrap(model, std::move(x), p);
}

}  // namespace

BinarySolution sic_solve(const SicModel& model, int p, SicMode mode) {
  if (p < 0 || static_cast<std::size_t>(p) > model.num_facilities) {
    throw InputError("p must lie in [0, |F|]");
  }
  return mode == SicMode::kExhaustive ? sic_exhaustive(model, p) : sic_local_search(model, p);
}

}  // namespace transitopt
