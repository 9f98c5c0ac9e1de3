#include "transitopt/solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <future>
#include <numeric>
#include <random>

#include "transitopt/errors.hpp"
#include "transitopt/rng.hpp"

namespace transitopt {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

// Search state with incremental flip gains. Off-diagonal structure is
// snapshotted once per search so flips cost O(degree), not O(n).
struct LocalState {
  const QuboMatrix& q;
  std::vector<std::uint8_t> x;
  std::vector<double> gains;
  std::vector<std::vector<std::pair<int, double>>> adj;
  double value;

  LocalState(const QuboMatrix& matrix, std::vector<std::uint8_t> start)
      : q(matrix), x(std::move(start)) {
    const std::size_t n = q.n();
    adj.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = q.row(i);
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i && row[j] != 0.0) adj[i].emplace_back(static_cast<int>(j), row[j]);
      }
    }
    gains.resize(n);
    for (std::size_t j = 0; j < n; ++j) gains[j] = flip_gain(q, x, j);
    value = objective_value(q, x);
  }

  void flip(std::size_t j) {
    const double delta = x[j] ? -1.0 : 1.0;
    value += gains[j];
    x[j] ^= 1;
    gains[j] = -gains[j];
    for (const auto& [i, coeff] : adj[j]) {
      gains[i] += 2.0 * (x[i] ? -1.0 : 1.0) * coeff * delta;
    }
  }
};

std::vector<std::uint8_t> greedy_feasible_start(const QuboMatrix& q,
                                                const PartitionScheme& partition) {
  std::vector<std::uint8_t> x(q.n(), 0);
  for (std::size_t k = 0; k < partition.subsets.size(); ++k) {
    std::vector<int> order = partition.subsets[k];
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return q.at(a, a) > q.at(b, b);
    });
    for (int r = 0; r < partition.quotas[k]; ++r) x[order[r]] = 1;
  }
  return x;
}

}  // namespace

BinarySolution simulated_annealing(const QuboMatrix& q, std::vector<std::uint8_t> start,
                                   const SolverConfig& config) {
  if (start.size() != q.n()) throw InputError("start vector dimension mismatch");
  const std::size_t n = q.n();
  if (n == 0) return evaluate_solution(q, std::move(start));

  LocalState state(q, std::move(start));
  std::mt19937_64 rng(config.seed);

  double t0 = config.sa.initial_temperature;
  if (t0 <= 0.0) {
    for (std::size_t j = 0; j < n; ++j) t0 = std::max(t0, std::abs(state.gains[j]));
    if (t0 <= 0.0) t0 = 1.0;
  }
  const double tf = config.sa.final_temperature > 0.0 ? config.sa.final_temperature : 1e-3 * t0;
  const double cooling = std::clamp(config.sa.cooling, 1e-6, 0.999999);

  std::vector<std::uint8_t> best_x = state.x;
  double best = state.value;
  for (double temp = t0; temp >= tf; temp *= cooling) {
    for (int sweep = 0; sweep < config.sa.sweeps_per_temperature; ++sweep) {
      for (std::size_t step = 0; step < n; ++step) {
        const std::size_t j = uniform_index(rng, n);
        const double delta = state.gains[j];
        if (delta >= 0.0 || uniform01(rng) < std::exp(delta / temp)) {
          state.flip(j);
          if (state.value > best) {
            best = state.value;
            best_x = state.x;
          }
        }
      }
    }
  }
  return evaluate_solution(q, std::move(best_x));
}

BinarySolution tabu_search(const QuboMatrix& q, std::vector<std::uint8_t> start,
                           const SolverConfig& config) {
  if (start.size() != q.n()) throw InputError("start vector dimension mismatch");
  const std::size_t n = q.n();
  if (n == 0) return evaluate_solution(q, std::move(start));

  LocalState state(q, std::move(start));
  const int tenure =
      config.tabu.tenure > 0 ? config.tabu.tenure
                             : std::min<int>(static_cast<int>(n), 7 + static_cast<int>(n) / 10);
  const int max_steps =
      config.tabu.max_steps > 0 ? config.tabu.max_steps : 25 * static_cast<int>(n);

  std::vector<int> tabu_until(n, 0);
  std::vector<std::uint8_t> best_x = state.x;
  double best = state.value;
  int no_improve = 0;

  for (int step = 1; step <= max_steps; ++step) {
    int chosen = -1;
    double chosen_gain = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      const bool tabu = tabu_until[j] > step;
      const bool aspirated = state.value + state.gains[j] > best;
      if (tabu && !aspirated) continue;
      if (state.gains[j] > chosen_gain) {
        chosen_gain = state.gains[j];
        chosen = static_cast<int>(j);
      }
    }
    if (chosen < 0) break;
    state.flip(static_cast<std::size_t>(chosen));
    tabu_until[chosen] = step + tenure;
    if (state.value > best) {
      best = state.value;
      best_x = state.x;
      no_improve = 0;
    } else if (++no_improve > config.tabu.max_no_improve) {
      break;
    }
  }
  return evaluate_solution(q, std::move(best_x));
}

std::vector<int> select_high_impact(const QuboMatrix& q, std::span<const std::uint8_t> x,
                                    int m) {
  if (m < 0 || static_cast<std::size_t>(m) > q.n()) {
    throw InputError("high-impact selection requires 0 <= m <= n");
  }
  std::vector<int> order(q.n());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> impact(q.n());
  for (std::size_t j = 0; j < q.n(); ++j) impact[j] = std::abs(flip_gain(q, x, j));
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (impact[a] != impact[b]) return impact[a] > impact[b];
    return a < b;
  });
  std::vector<int> out(order.begin(), order.begin() + m);
  std::sort(out.begin(), out.end());
  return out;
}

QuboMatrix extract_subproblem(const QuboMatrix& q, std::span<const std::uint8_t> x,
                              std::span<const int> free_indices) {
  if (x.size() != q.n()) throw InputError("assignment dimension mismatch");
  std::vector<char> is_free(q.n(), 0);
  for (int idx : free_indices) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= q.n()) {
      throw InputError("free index out of range");
    }
    is_free[idx] = 1;
  }
  std::vector<int> clamped_active;
  for (std::size_t i = 0; i < q.n(); ++i) {
    if (!is_free[i] && x[i]) clamped_active.push_back(static_cast<int>(i));
  }

  const std::size_t m = free_indices.size();
  QuboMatrix sub(m);
  double offset = q.offset();
  for (int a : clamped_active) {
    for (int b : clamped_active) offset += q.at(a, b);
  }
  sub.set_offset(offset);
  for (std::size_t a = 0; a < m; ++a) {
    const std::size_t ja = static_cast<std::size_t>(free_indices[a]);
    double diag = q.at(ja, ja);
    for (int c : clamped_active) diag += 2.0 * q.at(ja, c);
    sub.set(a, a, diag);
    for (std::size_t b = a + 1; b < m; ++b) {
      const double v = q.at(ja, static_cast<std::size_t>(free_indices[b]));
      if (v != 0.0) sub.set(a, b, v);
    }
  }
  return sub;
}

BinarySolution brute_force(const QuboMatrix& q, const PartitionScheme* partition) {
  const std::size_t n = q.n();
  if (n > 24) throw InputError("brute force refuses n > 24");
  if (partition) partition->validate(n);
  if (n == 0) return evaluate_solution(q, {}, partition);

  std::vector<int> subset_of(n, 0);
  std::vector<int> count;
  std::vector<int> quota;
  int violated_subsets = 0;
  if (partition) {
    count.assign(partition->subsets.size(), 0);
    quota = partition->quotas;
    for (std::size_t k = 0; k < partition->subsets.size(); ++k) {
      for (int idx : partition->subsets[k]) subset_of[idx] = static_cast<int>(k);
      if (quota[k] != 0) ++violated_subsets;
    }
  }

  std::vector<std::uint8_t> x(n, 0);
  double value = objective_value(q, x);
  bool have_best = !partition || violated_subsets == 0;
  std::vector<std::uint8_t> best_x = x;
  double best = value;

  const std::uint64_t total = 1ULL << n;
  std::uint64_t gray = 0;
  for (std::uint64_t k = 1; k < total; ++k) {
    const std::uint64_t next_gray = k ^ (k >> 1);
    const auto j = static_cast<std::size_t>(std::countr_zero(gray ^ next_gray));
    gray = next_gray;
    value += flip_gain(q, x, j);
    x[j] ^= 1;
    if (partition) {
      const int s = subset_of[j];
      const int before = std::abs(count[s] - quota[s]);
      count[s] += x[j] ? 1 : -1;
      const int after = std::abs(count[s] - quota[s]);
      if (before == 0 && after != 0) ++violated_subsets;
      if (before != 0 && after == 0) --violated_subsets;
      if (violated_subsets != 0) continue;
    }
    if (!have_best || value > best ||
        (value == best && std::lexicographical_compare(x.begin(), x.end(), best_x.begin(),
                                                       best_x.end()))) {
      have_best = true;
      best = value;
      best_x = x;
    }
  }
  if (!have_best) throw InputError("partition admits no feasible assignment");
  return evaluate_solution(q, std::move(best_x), partition);
}

BinarySolution brute_force(const QuboMatrix& q, int p) {
  const auto partition = make_single_partition(q.n(), p);
  return brute_force(q, &partition);
}

// --- backends ---------------------------------------------------------------

namespace {

class ExhaustiveBackend final : public AnnealerBackend {
 public:
  explicit ExhaustiveBackend(std::size_t max_n) : max_n_(max_n) {}
  std::string name() const override { return "exhaustive"; }
  std::vector<std::uint8_t> solve(const QuboMatrix& subproblem,
                                  std::chrono::milliseconds) override {
    if (subproblem.n() > max_n_) {
      throw InputError("exhaustive backend refuses sub-problems with n > " +
                       std::to_string(max_n_));
    }
    return brute_force(subproblem).bits;
  }

 private:
  std::size_t max_n_;
};

class SaBackend final : public AnnealerBackend {
 public:
  SaBackend(SaParams params, std::uint64_t base_seed)
      : params_(params), base_seed_(base_seed) {}
  std::string name() const override { return "sa"; }
  std::vector<std::uint8_t> solve(const QuboMatrix& subproblem,
                                  std::chrono::milliseconds) override {
    SolverConfig cfg;
    cfg.sa = params_;
    // Content-derived seed keeps results independent of submission order.
    const std::string text = subproblem.to_text();
    cfg.seed = derive_seed(base_seed_, fnv1a(text.data(), text.size()));
    return simulated_annealing(subproblem, std::vector<std::uint8_t>(subproblem.n(), 0), cfg)
        .bits;
  }

 private:
  SaParams params_;
  std::uint64_t base_seed_;
};

}  // namespace

std::string solve_serialized(AnnealerBackend& backend, const std::string& matrix_text,
                             std::chrono::milliseconds budget) {
  const QuboMatrix sub = QuboMatrix::from_text(matrix_text);
  const auto bits = backend.solve(sub, budget);
  if (bits.size() != sub.n()) {
    throw NumericalError("backend returned assignment of wrong dimension");
  }
  std::string out(bits.size(), '0');
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) out[i] = '1';
  }
  return out;
}

std::unique_ptr<AnnealerBackend> make_exhaustive_backend(std::size_t max_n) {
  return std::make_unique<ExhaustiveBackend>(max_n);
}

std::unique_ptr<AnnealerBackend> make_sa_backend(SaParams params, std::uint64_t base_seed) {
  return std::make_unique<SaBackend>(params, base_seed);
}

DefaultBackends default_backends() {
  return {make_exhaustive_backend(20), make_sa_backend()};
}

// --- hybrid loop ------------------------------------------------------------

SolverReport hybrid_solve(const QuboMatrix& q, const SolverConfig& config,
                          AnnealerBackend& backend, const PartitionScheme* partition) {
  if (config.max_iterations < 1) throw InputError("max_iterations must be >= 1");
  if (!(config.max_time_ms > 0.0)) throw InputError("max_time_ms must be > 0");
  const std::size_t n = q.n();
  if (config.subproblem_size < 1 || static_cast<std::size_t>(config.subproblem_size) > n) {
    if (n > 0) throw InputError("subproblem_size must lie in [1, n]");
  }
  if (partition) partition->validate(n);
  const auto start_time = Clock::now();

  SolverReport report;
  if (n == 0) {
    report.best = evaluate_solution(q, {}, partition);
    return report;
  }

  std::vector<std::uint8_t> incumbent =
      partition ? greedy_feasible_start(q, *partition) : std::vector<std::uint8_t>(n, 0);
  double incumbent_value = objective_value(q, incumbent);
  std::vector<std::uint8_t> best_x = incumbent;
  double best_value = incumbent_value;
  report.trace.push_back({0, "init", incumbent_value, true});

  const int m = config.subproblem_size;
  const int full_blocks = static_cast<int>((n + m - 1) / m);
  const int max_blocks = config.max_subproblem_blocks > 0
                             ? std::min(config.max_subproblem_blocks, full_blocks)
                             : full_blocks;

  for (int k = 1; k <= config.max_iterations; ++k) {
    if (elapsed_ms(start_time) >= config.max_time_ms) break;
    report.iterations = k;

    SolverConfig sa_cfg = config;
    sa_cfg.seed = derive_seed(config.seed, static_cast<std::uint64_t>(k), 0x5a);
    BinarySolution sa_sol, tb_sol;
    if (config.parallel_branches) {
      auto sa_future = std::async(std::launch::async, [&] {
        return simulated_annealing(q, incumbent, sa_cfg);
      });
      tb_sol = tabu_search(q, incumbent, config);
      sa_sol = sa_future.get();
    } else {
      sa_sol = simulated_annealing(q, incumbent, sa_cfg);
      tb_sol = tabu_search(q, incumbent, config);
    }
    report.trace.push_back({k, "sa", sa_sol.objective, true});
    report.trace.push_back({k, "tabu", tb_sol.objective, true});

    // Deterministic choice of the classical incumbent, ties to SA.
    std::vector<std::uint8_t>& mid =
        tb_sol.objective > sa_sol.objective ? tb_sol.bits : sa_sol.bits;
    double mid_value = std::max(sa_sol.objective, tb_sol.objective);

    // Backend branch over disjoint high-impact blocks.
    std::vector<std::uint8_t> qa_x;
    double qa_value = -std::numeric_limits<double>::infinity();
    {
      std::vector<int> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::vector<double> impact(n);
      for (std::size_t j = 0; j < n; ++j) impact[j] = std::abs(flip_gain(q, mid, j));
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (impact[a] != impact[b]) return impact[a] > impact[b];
        return a < b;
      });
      for (int block = 0; block < max_blocks; ++block) {
        if (elapsed_ms(start_time) >= config.max_time_ms) break;
        const std::size_t lo = static_cast<std::size_t>(block) * m;
        if (lo >= n) break;
        const std::size_t hi = std::min(n, lo + m);
        std::vector<int> free_idx(order.begin() + lo, order.begin() + hi);
        std::sort(free_idx.begin(), free_idx.end());
        try {
          const QuboMatrix sub = extract_subproblem(q, mid, free_idx);
          const auto budget = std::chrono::milliseconds(
              static_cast<long>(std::max(1.0, config.backend_budget_ms)));
          const auto bits = backend.solve(sub, budget);
          if (bits.size() != sub.n()) {
            throw NumericalError("backend returned assignment of wrong dimension");
          }
          std::vector<std::uint8_t> candidate = mid;
          for (std::size_t a = 0; a < free_idx.size(); ++a) candidate[free_idx[a]] = bits[a];
          const double value = objective_value(q, candidate);
          if (value > qa_value) {
            qa_value = value;
            qa_x = std::move(candidate);
          }
        } catch (const std::exception&) {
          report.trace.push_back({k, backend.name(), 0.0, false});
        }
      }
    }
    if (!qa_x.empty()) report.trace.push_back({k, backend.name(), qa_value, true});

    // Keep the best of the three branches.
    if (qa_value > mid_value) {
      incumbent = std::move(qa_x);
      incumbent_value = qa_value;
    } else {
      incumbent = std::move(mid);
      incumbent_value = mid_value;
    }
    if (incumbent_value > best_value) {
      best_value = incumbent_value;
      best_x = incumbent;
    }
  }

  report.best = evaluate_solution(q, std::move(best_x), partition);
  report.wall_time_seconds = elapsed_ms(start_time) / 1000.0;
  return report;
}

}  // namespace transitopt
