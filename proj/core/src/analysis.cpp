#include "transitopt/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "transitopt/bounds.hpp"
#include "transitopt/errors.hpp"
#include "transitopt/rng.hpp"
#include "transitopt/sic.hpp"

namespace transitopt {

CoverageProfile coverage_profile(const SpatialModel& model, std::span<const std::uint8_t> x) {
  if (x.size() != model.num_facilities()) throw InputError("assignment dimension mismatch");
  CoverageProfile out;
  out.counts.assign(model.num_demand_nodes(), 0);
  for (std::size_t i = 0; i < model.num_demand_nodes(); ++i) {
    int count = 0;
    for (int j : model.facilities_near_demand(i)) count += x[j] ? 1 : 0;
    out.counts[i] = count;
    if (count >= 1) ++out.covered_count;
  }
  if (!out.counts.empty()) {
    std::vector<int> sorted = out.counts;
    std::sort(sorted.begin(), sorted.end());
    out.min = sorted.front();
    out.max = sorted.back();
    out.median = sorted[(sorted.size() - 1) / 2];
  }
  return out;
}

std::vector<BoundSweepRow> bound_ratio_sweep(const SpatialModel& model,
                                             std::span<const double> weights,
                                             const ModelParams& params,
                                             std::span<const int> p_values, int batch_size,
                                             const SolverConfig& solver,
                                             AnnealerBackend& backend) {
  const QuboMatrix q = build_unconstrained(model, weights, params);
  std::vector<BoundSweepRow> rows;
  rows.reserve(p_values.size());
  for (int p : p_values) {
    ModelParams pp = params;
    pp.p = p;
    const auto partition =
        make_route_partition_total(model.num_facilities(), batch_size, p);
    const QuboMatrix qhat = build_partitioned(model, weights, pp, partition);
    SolverConfig cfg = solver;
    cfg.seed = derive_seed(solver.seed, static_cast<std::uint64_t>(p));
    const SolverReport report = hybrid_solve(qhat, cfg, backend, &partition);
    BoundSweepRow row;
    row.p = p;
    row.best = report.best.objective;
    row.diagonal_bound = upper_bound_diagonal(q, p);
    row.eigen_bound = upper_bound_eigen(q, p);
    row.ratio = row.eigen_bound != 0.0 ? row.best / row.eigen_bound : 0.0;
    rows.push_back(row);
  }
  return rows;
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> differences,
                                    Alternative alternative, ZeroPolicy zeros) {
  std::vector<double> d;
  for (double v : differences) {
    if (v != 0.0 || zeros == ZeroPolicy::kPratt) d.push_back(v);
  }
  std::size_t nonzero = 0;
  for (double v : d) nonzero += v != 0.0 ? 1 : 0;
  if (nonzero == 0) {
    throw NumericalError("signed-rank test undefined: all differences are zero");
  }

  // Average ranks of |d|, doubled so tied ranks stay integral.
  const std::size_t n = d.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(d[a]) < std::abs(d[b]);
  });
  std::vector<long> rank2(n, 0);
  for (std::size_t lo = 0; lo < n;) {
    std::size_t hi = lo;
    while (hi + 1 < n && std::abs(d[order[hi + 1]]) == std::abs(d[order[lo]])) ++hi;
    const long sum2 = static_cast<long>((lo + 1 + hi + 1) * (hi - lo + 1));  // 2 * avg * count
    const long r2 = sum2 / static_cast<long>(hi - lo + 1);
    for (std::size_t t = lo; t <= hi; ++t) rank2[order[t]] = r2;
    lo = hi + 1;
  }

  long w2 = 0;
  std::vector<long> nonzero_rank2;
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i] > 0.0) w2 += rank2[i];
    if (d[i] != 0.0) nonzero_rank2.push_back(rank2[i]);
  }

  WilcoxonResult out;
  out.statistic = static_cast<double>(w2) / 2.0;
  out.n_used = static_cast<int>(n);

  const std::size_t ns = nonzero_rank2.size();
  if (ns <= 25) {
    // Exact null distribution: every sign pattern of the nonzero
    // differences is equally likely. Gray-code walk keeps the update O(1).
    out.exact = true;
    long current = 0;  // all-negative pattern
    std::uint64_t count = 0;
    const auto counts_toward_p = [&](long value) {
      return alternative == Alternative::kGreater ? value >= w2 : value <= w2;
    };
    if (counts_toward_p(current)) ++count;
    std::uint64_t gray = 0;
    const std::uint64_t total = 1ULL << ns;
    for (std::uint64_t k = 1; k < total; ++k) {
      const std::uint64_t next = k ^ (k >> 1);
      const int bit = std::countr_zero(gray ^ next);
      const bool now_positive = (next >> bit) & 1ULL;
      current += now_positive ? nonzero_rank2[bit] : -nonzero_rank2[bit];
      gray = next;
      if (counts_toward_p(current)) ++count;
    }
    out.p_value = static_cast<double>(count) / static_cast<double>(total);
  } else {
    // Normal approximation; the variance uses the realized (tie-averaged)
    // ranks, which folds in the standard tie correction.
    double mean2 = 0.0, var4 = 0.0;
    for (long r2 : nonzero_rank2) {
      mean2 += static_cast<double>(r2);
      var4 += static_cast<double>(r2) * static_cast<double>(r2);
    }
    const double mean = mean2 / 4.0;              // sum(r)/2
    const double sd = std::sqrt(var4 / 16.0);     // sqrt(sum(r^2)/4)
    const double w = out.statistic;
    double z;
    if (alternative == Alternative::kGreater) {
      z = (w - mean - 0.5) / sd;
      out.p_value = 0.5 * std::erfc(z / std::sqrt(2.0));
    } else {
      z = (w - mean + 0.5) / sd;
      out.p_value = 0.5 * std::erfc(-z / std::sqrt(2.0));
    }
  }
  out.p_value = std::clamp(out.p_value, 5e-324, 1.0);
  return out;
}

ComparisonResult run_comparison_experiment(const SpatialModel& base_model,
                                           const ComparisonOptions& options) {
  if (options.n_instances < 1) throw InputError("n_instances must be >= 1");
  const std::size_t nf = base_model.num_facilities();
  ComparisonResult result;
  result.records.resize(static_cast<std::size_t>(options.n_instances) *
                        options.p_values.size());

  auto run_instance = [&](int idx) {
    const std::uint64_t inst_seed = derive_seed(options.seed, static_cast<std::uint64_t>(idx));
    const SpatialModel inst = perturb_instance(base_model, options.max_offset_m,
                                               options.weight_lo, options.weight_hi, inst_seed);
    const std::vector<double> w = inst.weights();
    ModelParams params;
    params.alpha = options.alpha;
    params.beta = options.beta;
    const SicModel sic = make_sic_model(inst, w);
    auto backend = make_exhaustive_backend();
    for (std::size_t pi = 0; pi < options.p_values.size(); ++pi) {
      const int p = options.p_values[pi];
      params.p = p;
      const auto partition = make_route_partition_total(nf, options.batch_size, p);
      const QuboMatrix qhat = build_partitioned(inst, w, params, partition);
      SolverConfig cfg = options.solver;
      cfg.seed = derive_seed(inst_seed, static_cast<std::uint64_t>(p));
      const SolverReport report = hybrid_solve(qhat, cfg, *backend, &partition);
      const BinarySolution sic_best = sic_solve(sic, p, SicMode::kLocalSearch);

      ComparisonRecord rec;
      rec.instance_seed = inst_seed;
      rec.p = p;
      rec.qubo_objective = report.best.objective;
      rec.sic_objective = sic_best.objective;
      rec.qubo_covered = coverage_profile(inst, report.best.bits).covered_count;
      rec.sic_covered = coverage_profile(inst, sic_best.bits).covered_count;
      rec.coverage_difference = rec.qubo_covered - rec.sic_covered;
      result.records[static_cast<std::size_t>(idx) * options.p_values.size() + pi] = rec;
    }
  };

  std::size_t workers = options.threads > 0
                            ? options.threads
                            : std::max<std::size_t>(1, std::thread::hardware_concurrency());
  workers = std::min<std::size_t>(workers, static_cast<std::size_t>(options.n_instances));
  if (workers <= 1) {
    for (int i = 0; i < options.n_instances; ++i) run_instance(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < options.n_instances; i = next.fetch_add(1)) {
          run_instance(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  for (std::size_t pi = 0; pi < options.p_values.size(); ++pi) {
    std::vector<double> diffs;
    double sum = 0.0;
    for (int i = 0; i < options.n_instances; ++i) {
      const auto& rec = result.records[static_cast<std::size_t>(i) * options.p_values.size() + pi];
      diffs.push_back(static_cast<double>(rec.coverage_difference));
      sum += rec.coverage_difference;
    }
    ComparisonSummary summary;
    summary.p = options.p_values[pi];
    summary.average_difference = sum / options.n_instances;
    try {
      const WilcoxonResult test = wilcoxon_signed_rank(diffs, Alternative::kGreater);
      summary.statistic = test.statistic;
      summary.p_value = test.p_value;
      summary.reject_null = test.p_value < options.significance;
    } catch (const NumericalError&) {
      // All differences zero: no evidence either way.
      summary.statistic = 0.0;
      summary.p_value = 1.0;
      summary.reject_null = false;
    }
    result.summaries.push_back(summary);
  }
  return result;
}

double travel_time_estimate(int n_removed_stops, double dwell_seconds_per_stop,
                            double penalty_seconds_per_stop) {
  if (n_removed_stops < 0 || dwell_seconds_per_stop < 0.0 || penalty_seconds_per_stop < 0.0) {
    throw InputError("travel time estimate requires non-negative inputs");
  }
  return n_removed_stops * (dwell_seconds_per_stop + penalty_seconds_per_stop) / 60.0;
}

}  // namespace transitopt
