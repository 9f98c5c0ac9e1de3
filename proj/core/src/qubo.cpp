#include "transitopt/qubo.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "transitopt/errors.hpp"

namespace transitopt {

namespace {

void append_double(std::string& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

double parse_double(std::string_view s, const char* what) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw InputError(std::string("malformed ") + what + ": '" + std::string(s) + "'");
  }
  return v;
}

long parse_long(std::string_view s, const char* what) {
  long v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw InputError(std::string("malformed ") + what + ": '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

void ModelParams::validate(std::size_t n) const {
  if (!(alpha >= 0.0)) throw InputError("alpha must be >= 0");
  if (!(beta > 0.0)) throw InputError("beta must be > 0");
  if (p < 1 || static_cast<std::size_t>(p) > n) {
    throw InputError("p must lie in [1, |F|]");
  }
  if (gamma < 0.0) throw InputError("gamma must be positive (or 0 for automatic)");
}

std::vector<double> QuboMatrix::diagonal() const {
  std::vector<double> d(n_);
  for (std::size_t i = 0; i < n_; ++i) d[i] = entries_[i * n_ + i];
  return d;
}

std::string QuboMatrix::to_text() const {
  std::string out;
  out += std::to_string(n_);
  out += ',';
  append_double(out, offset_);
  out += '\n';
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i; j < n_; ++j) {
      const double v = at(i, j);
      if (v == 0.0) continue;
      out += std::to_string(i);
      out += ',';
      out += std::to_string(j);
      out += ',';
      append_double(out, v);
      out += '\n';
    }
  }
  return out;
}

QuboMatrix QuboMatrix::from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty matrix text");
  auto comma = line.find(',');
  if (comma == std::string::npos) throw InputError("matrix header must be 'n,offset'");
  const long n = parse_long(std::string_view(line).substr(0, comma), "matrix dimension");
  if (n < 0) throw InputError("matrix dimension must be non-negative");
  QuboMatrix q(static_cast<std::size_t>(n));
  q.set_offset(parse_double(std::string_view(line).substr(comma + 1), "matrix offset"));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      throw InputError("matrix entry must be 'i,j,value': '" + line + "'");
    }
    std::string_view sv(line);
    const long i = parse_long(sv.substr(0, c1), "matrix row index");
    const long j = parse_long(sv.substr(c1 + 1, c2 - c1 - 1), "matrix column index");
    if (i < 0 || j < 0 || i > j || j >= n) {
      throw InputError("matrix entry indices out of range: '" + line + "'");
    }
    q.set(static_cast<std::size_t>(i), static_cast<std::size_t>(j),
          parse_double(sv.substr(c2 + 1), "matrix value"));
  }
  return q;
}

int PartitionScheme::total_quota() const {
  int total = 0;
  for (int q : quotas) total += q;
  return total;
}

void PartitionScheme::validate(std::size_t n) const {
  if (subsets.size() != quotas.size()) {
    throw InputError("partition has " + std::to_string(subsets.size()) + " subsets but " +
                     std::to_string(quotas.size()) + " quotas");
  }
  std::vector<char> seen(n, 0);
  for (std::size_t k = 0; k < subsets.size(); ++k) {
    if (quotas[k] < 0 || quotas[k] > static_cast<int>(subsets[k].size())) {
      throw InputError("quota " + std::to_string(quotas[k]) + " invalid for subset of size " +
                       std::to_string(subsets[k].size()));
    }
    for (int idx : subsets[k]) {
      if (idx < 0 || static_cast<std::size_t>(idx) >= n || seen[idx]) {
        throw InputError("partition subsets must be disjoint and cover 0..n-1");
      }
      seen[idx] = 1;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!seen[i]) throw InputError("partition does not cover index " + std::to_string(i));
  }
}

PartitionScheme make_single_partition(std::size_t n, int p) {
  PartitionScheme out;
  out.subsets.emplace_back();
  for (std::size_t i = 0; i < n; ++i) out.subsets[0].push_back(static_cast<int>(i));
  out.quotas.push_back(p);
  out.validate(n);
  return out;
}

PartitionScheme make_route_partition(std::size_t n, int batch_size, int quota) {
  if (batch_size < 1 || static_cast<std::size_t>(batch_size) > n || quota < 1 ||
      quota > batch_size) {
    throw InputError("route partition requires 1 <= quota <= batch_size <= n");
  }
  PartitionScheme out;
  for (std::size_t start = 0; start < n; start += batch_size) {
    const std::size_t end = std::min(n, start + batch_size);
    std::vector<int> subset;
    for (std::size_t i = start; i < end; ++i) subset.push_back(static_cast<int>(i));
    out.quotas.push_back(std::min<int>(static_cast<int>(subset.size()), quota));
    out.subsets.push_back(std::move(subset));
  }
  out.validate(n);
  return out;
}

PartitionScheme make_route_partition_total(std::size_t n, int batch_size, int p) {
  if (batch_size < 1 || static_cast<std::size_t>(batch_size) > n || p < 0 ||
      static_cast<std::size_t>(p) > n) {
    throw InputError("route partition requires 1 <= batch_size <= n and 0 <= p <= n");
  }
  PartitionScheme out;
  for (std::size_t start = 0; start < n; start += batch_size) {
    const std::size_t end = std::min(n, start + batch_size);
    std::vector<int> subset;
    for (std::size_t i = start; i < end; ++i) subset.push_back(static_cast<int>(i));
    out.subsets.push_back(std::move(subset));
  }
  const std::size_t m = out.subsets.size();
  out.quotas.assign(m, 0);
  // Proportional quotas, remainder by largest fractional part.
  std::vector<std::pair<double, std::size_t>> frac;
  int assigned = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const double exact = static_cast<double>(p) * out.subsets[k].size() / static_cast<double>(n);
    out.quotas[k] = static_cast<int>(exact);
    assigned += out.quotas[k];
    frac.emplace_back(exact - out.quotas[k], k);
  }
  std::sort(frac.begin(), frac.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (std::size_t r = 0; assigned < p; ++r) {
    const std::size_t k = frac[r % m].second;
    if (out.quotas[k] < static_cast<int>(out.subsets[k].size())) {
      out.quotas[k] += 1;
      ++assigned;
    }
  }
  out.validate(n);
  return out;
}

double aggregated_demand(const SpatialModel& model, std::span<const double> weights,
                         std::size_t j, double alpha, double beta) {
  double sum = 0.0;
  for (int k : model.demand_neighborhood(j)) {
    const double d = std::max(model.distance(j, static_cast<std::size_t>(k)), 1.0);
    sum += model.demand_nodes()[k].population * std::pow(d, -beta);
  }
  return std::pow(weights[j], alpha) * sum;
}

namespace {
double competition_factor(int m) {
  const double mm = static_cast<double>(m);
  return (1.0 + 2.0 * mm) / ((1.0 + mm) * (1.0 + mm));
}
}  // namespace

double linear_coeff(const SpatialModel& model, std::span<const double> weights,
                    std::size_t j, const ModelParams& params) {
  return competition_factor(model.max_competitors(j)) *
         aggregated_demand(model, weights, j, params.alpha, params.beta);
}

double quadratic_coeff(const SpatialModel& model, std::span<const double> weights,
                       std::size_t j, std::size_t i, const ModelParams& params) {
  const auto& comp = model.competitor_neighborhood(j);
  if (std::find(comp.begin(), comp.end(), static_cast<int>(i)) == comp.end()) return 0.0;
  const int m = model.max_competitors(j);
  return -linear_coeff(model, weights, j, params) / (1.0 + 2.0 * m);
}

double exact_competition_objective(const SpatialModel& model, std::span<const double> weights,
                                   const ModelParams& params,
                                   std::span<const std::uint8_t> x) {
  double total = 0.0;
  for (std::size_t j = 0; j < model.num_facilities(); ++j) {
    if (!x[j]) continue;
    int active_competitors = 0;
    for (int i : model.competitor_neighborhood(j)) active_competitors += x[i] ? 1 : 0;
    total += aggregated_demand(model, weights, j, params.alpha, params.beta) /
             (1.0 + active_competitors);
  }
  return total;
}

QuboMatrix build_unconstrained(const SpatialModel& model, std::span<const double> weights,
                               const ModelParams& params) {
  const std::size_t n = model.num_facilities();
  QuboMatrix q(n);
  for (std::size_t j = 0; j < n; ++j) {
    q.set(j, j, linear_coeff(model, weights, j, params));
  }
  // Row coefficients are asymmetric (they depend on the row's competitor
  // count); store the average, which leaves x^t Q x unchanged.
  for (std::size_t j = 0; j < n; ++j) {
    const int m = model.max_competitors(j);
    const double row_coeff = -q.at(j, j) / (1.0 + 2.0 * m);
    for (int i : model.competitor_neighborhood(j)) {
      q.add(j, static_cast<std::size_t>(i), row_coeff / 2.0);
    }
  }
  return q;
}

QuboMatrix build_single_constraint(const SpatialModel& model, std::span<const double> weights,
                                   const ModelParams& params) {
  params.validate(model.num_facilities());
  return build_partitioned(model, weights, params,
                           make_single_partition(model.num_facilities(), params.p));
}

QuboMatrix build_partitioned(const SpatialModel& model, std::span<const double> weights,
                             const ModelParams& params, const PartitionScheme& partition) {
  const std::size_t n = model.num_facilities();
  params.validate(n);
  partition.validate(n);
  QuboMatrix q = build_unconstrained(model, weights, params);
  const double gamma = params.gamma > 0.0 ? params.gamma : auto_gamma(q);
  double offset = 0.0;
  for (std::size_t k = 0; k < partition.subsets.size(); ++k) {
    const auto& subset = partition.subsets[k];
    const double pk = partition.quotas[k];
    for (std::size_t a = 0; a < subset.size(); ++a) {
      q.add(subset[a], subset[a], -gamma * (1.0 - 2.0 * pk));
      for (std::size_t b = a + 1; b < subset.size(); ++b) {
        q.add(subset[a], subset[b], -gamma);
      }
    }
    offset -= gamma * pk * pk;
  }
  q.set_offset(q.offset() + offset);
  return q;
}

double auto_gamma(const QuboMatrix& unconstrained) {
  double max_diag = 0.0;
  for (std::size_t j = 0; j < unconstrained.n(); ++j) {
    max_diag = std::max(max_diag, unconstrained.at(j, j));
  }
  return 1.0 + max_diag;
}

double objective_value(const QuboMatrix& q, std::span<const std::uint8_t> x) {
  if (x.size() != q.n()) {
    throw InputError("assignment dimension " + std::to_string(x.size()) +
                     " does not match matrix dimension " + std::to_string(q.n()));
  }
  double value = q.offset();
  for (std::size_t i = 0; i < q.n(); ++i) {
    if (!x[i]) continue;
    const auto row = q.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < q.n(); ++j) {
      if (x[j]) s += row[j];
    }
    value += s;
  }
  return value;
}

double flip_gain(const QuboMatrix& q, std::span<const std::uint8_t> x, std::size_t j) {
  const auto row = q.row(j);
  double cross = 0.0;
  for (std::size_t i = 0; i < q.n(); ++i) {
    if (i != j && x[i]) cross += row[i];
  }
  const double sign = x[j] ? -1.0 : 1.0;
  return sign * (row[j] + 2.0 * cross);
}

int violation(const PartitionScheme& partition, std::span<const std::uint8_t> x) {
  int total = 0;
  for (std::size_t k = 0; k < partition.subsets.size(); ++k) {
    int count = 0;
    for (int idx : partition.subsets[k]) count += x[idx] ? 1 : 0;
    total += std::abs(count - partition.quotas[k]);
  }
  return total;
}

BinarySolution evaluate_solution(const QuboMatrix& q, std::vector<std::uint8_t> x,
                                 const PartitionScheme* partition) {
  BinarySolution out;
  out.objective = objective_value(q, x);
  out.violation = partition ? violation(*partition, x) : 0;
  out.feasible = out.violation == 0;
  out.bits = std::move(x);
  return out;
}

}  // namespace transitopt
