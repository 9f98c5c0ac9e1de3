#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "transitopt/qubo.hpp"

namespace transitopt {

struct SaParams {
  double initial_temperature = 0.0;  // 0: max |flip gain| at the start point
  double final_temperature = 0.0;    // 0: 1e-3 * initial
  double cooling = 0.96;             // geometric decay per temperature level
  int sweeps_per_temperature = 2;    // n flip attempts per sweep
};

struct TabuParams {
  int tenure = 0;           // 0: min(n, 7 + n/10)
  int max_no_improve = 60;  // stop after this many non-improving moves
  int max_steps = 0;        // 0: 25 * n
};

struct SolverConfig {
  int max_iterations = 8;            // outer hybrid iterations (K)
  double max_time_ms = 60000.0;      // wall-clock budget (T)
  int subproblem_size = 16;          // high-impact block size (m)
  int max_subproblem_blocks = 0;     // 0: ceil(n / m), each variable at most once
  double backend_budget_ms = 100.0;  // per sub-problem call
  SaParams sa;
  TabuParams tabu;
  std::uint64_t seed = 1;
  bool parallel_branches = false;  // run SA/TS concurrently; results identical
};

/// Pluggable solver for clamped sub-problems. Implementations must return
/// an assignment of exactly the sub-problem's dimension and must be safe
/// to call repeatedly; determinism across call orders is expected from the
/// bundled backends.
class AnnealerBackend {
 public:
  virtual ~AnnealerBackend() = default;
  virtual std::string name() const = 0;
  virtual std::vector<std::uint8_t> solve(const QuboMatrix& subproblem,
                                          std::chrono::milliseconds budget) = 0;
};

/// Wire-format surface: parses the serialized matrix text, solves, and
/// returns the assignment as a '0'/'1' string.
std::string solve_serialized(AnnealerBackend& backend, const std::string& matrix_text,
                             std::chrono::milliseconds budget);

/// Exact enumeration backend; refuses sub-problems above max_n variables.
std::unique_ptr<AnnealerBackend> make_exhaustive_backend(std::size_t max_n = 20);

/// Simulated-annealing backend. Seeding is content-derived so results do
/// not depend on the order sub-problems are submitted in.
std::unique_ptr<AnnealerBackend> make_sa_backend(SaParams params = {},
                                                 std::uint64_t base_seed = 1);

struct DefaultBackends {
  std::unique_ptr<AnnealerBackend> exhaustive;
  std::unique_ptr<AnnealerBackend> sa;
};
DefaultBackends default_backends();

struct TraceEntry {
  int iteration = 0;
  std::string branch;
  double objective = 0.0;
  bool ok = true;
};

struct SolverReport {
  BinarySolution best;
  std::vector<TraceEntry> trace;
  double wall_time_seconds = 0.0;
  int iterations = 0;
};

/// Single-flip simulated annealing, maximizing. Deterministic for a fixed
/// config seed; returns the best assignment visited.
BinarySolution simulated_annealing(const QuboMatrix& q, std::vector<std::uint8_t> start,
                                   const SolverConfig& config);

/// Best-admissible single-flip tabu search with aspiration; deterministic.
BinarySolution tabu_search(const QuboMatrix& q, std::vector<std::uint8_t> start,
                           const SolverConfig& config);

/// The m indices with largest |flip gain| at x, ties to the lower index;
/// returned in ascending index order.
std::vector<int> select_high_impact(const QuboMatrix& q, std::span<const std::uint8_t> x,
                                    int m);

/// Sub-problem over the free indices with everything else clamped to x:
/// the sub objective plus offset reproduces the full objective exactly.
QuboMatrix extract_subproblem(const QuboMatrix& q, std::span<const std::uint8_t> x,
                              std::span<const int> free_indices);

/// Multi-branch search: SA and tabu on the full problem plus backend
/// solves of high-impact sub-problems, combined each iteration. The
/// partition, when given, shapes the initial incumbent and the report's
/// feasibility diagnostics. Backend failures skip that branch for the
/// iteration and are recorded in the trace.
SolverReport hybrid_solve(const QuboMatrix& q, const SolverConfig& config,
                          AnnealerBackend& backend,
                          const PartitionScheme* partition = nullptr);

/// Exact maximizer by exhaustive enumeration (guarded to n <= 24), over
/// assignments satisfying the partition when given; ties go to the
/// lexicographically smallest bit vector.
BinarySolution brute_force(const QuboMatrix& q, const PartitionScheme* partition = nullptr);

/// Convenience overload for the plain fixed-count constraint.
BinarySolution brute_force(const QuboMatrix& q, int p);

}  // namespace transitopt
