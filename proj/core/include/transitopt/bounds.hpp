#pragma once

#include <vector>

#include "transitopt/qubo.hpp"

namespace transitopt {

/// Sum of the p largest diagonal entries of the unconstrained model
/// matrix; an upper bound on any feasible objective because off-diagonal
/// entries are non-positive and exactly p variables are active.
double upper_bound_diagonal(const QuboMatrix& unconstrained, int p);

/// Sum of the p largest eigenvalues; dominates the diagonal bound
/// (Schur-Horn majorization). Throws NumericalError if the eigen
/// decomposition fails.
double upper_bound_eigen(const QuboMatrix& unconstrained, int p);

struct DefinitenessReport {
  std::vector<double> eigenvalues;  // ascending
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  bool positive_definite = false;
};

/// Full spectrum summary. The PD flag uses a relative tolerance of
/// 1e-8 * spectral radius to guard against sign flips near zero.
DefinitenessReport definiteness_report(const QuboMatrix& q);

/// Diagonal shift to positive definiteness: returns q + (epsilon -
/// lambda_min) I when lambda_min <= 0, otherwise q unchanged. On the
/// fixed-cardinality feasible set the objective moves by a constant, so
/// the feasible argmax is preserved.
QuboMatrix pd_shift(const QuboMatrix& q, double epsilon);

}  // namespace transitopt
