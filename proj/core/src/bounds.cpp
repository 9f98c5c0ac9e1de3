#include "transitopt/bounds.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>

#include "transitopt/errors.hpp"

namespace transitopt {

namespace {

std::vector<double> sorted_eigenvalues(const QuboMatrix& q) {
  const auto n = static_cast<Eigen::Index>(q.n());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      m(i, j) = q.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigen decomposition failed");
  }
  std::vector<double> ev(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  std::sort(ev.begin(), ev.end());
  return ev;
}

void check_p(const QuboMatrix& q, int p) {
  if (p < 0 || static_cast<std::size_t>(p) > q.n()) {
    throw InputError("bound requires 0 <= p <= n");
  }
}

}  // namespace

double upper_bound_diagonal(const QuboMatrix& unconstrained, int p) {
  check_p(unconstrained, p);
  std::vector<double> diag = unconstrained.diagonal();
  std::sort(diag.begin(), diag.end(), std::greater<>());
  double sum = 0.0;
  for (int k = 0; k < p; ++k) sum += diag[k];
  return sum;
}

double upper_bound_eigen(const QuboMatrix& unconstrained, int p) {
  check_p(unconstrained, p);
  const auto ev = sorted_eigenvalues(unconstrained);
  double sum = 0.0;
  for (int k = 0; k < p; ++k) sum += ev[ev.size() - 1 - k];
  return sum;
}

DefinitenessReport definiteness_report(const QuboMatrix& q) {
  DefinitenessReport report;
  report.eigenvalues = sorted_eigenvalues(q);
  if (report.eigenvalues.empty()) return report;
  report.min_eigenvalue = report.eigenvalues.front();
  report.max_eigenvalue = report.eigenvalues.back();
  const double radius =
      std::max(std::abs(report.min_eigenvalue), std::abs(report.max_eigenvalue));
  report.positive_definite = report.min_eigenvalue > 1e-8 * radius;
  return report;
}

QuboMatrix pd_shift(const QuboMatrix& q, double epsilon) {
  if (!(epsilon > 0.0)) throw InputError("pd_shift requires epsilon > 0");
  const auto ev = sorted_eigenvalues(q);
  if (ev.empty() || ev.front() > 0.0) return q;
  const double shift = epsilon - ev.front();
  QuboMatrix out = q;
  for (std::size_t i = 0; i < out.n(); ++i) out.set(i, i, out.at(i, i) + shift);
  return out;
}

}  // namespace transitopt
