#pragma once

#include <vector>

#include "cpbures/matrix.hpp"
#include "cpbures/sdp.hpp"

namespace cpbures {

/// minimize over ||C|| <= 1 (C is r1 x r2 complex) the largest eigenvalue of
///   D(C) = base - 2 Herm(sum_ij C_ij G_ij),
/// with generators G_ij stored row-major in (i, j).
struct AffineSpectralProblem {
  CMat base;
  Eigen::Index r1 = 0;
  Eigen::Index r2 = 0;
  std::vector<CMat> generators;

  const CMat& generator(Eigen::Index i, Eigen::Index j) const { return generators[i * r2 + j]; }
  /// Throws DimensionMismatch / NonHermitian on malformed data.
  void validate() const;
  CMat objective_matrix(const CMat& c) const;
  /// lambda_max(D(C)).
  double evaluate(const CMat& c) const;
};

struct SpectralReport {
  /// lambda_max(D(C*)) at the returned (feasible) optimizer.
  double value = 0.0;
  /// Dual bound; value - lower_bound is the certified gap.
  double lower_bound = 0.0;
  double gap = 0.0;
  CMat optimizer;
  int iterations = 0;
  sdp::SolveStatus status = sdp::SolveStatus::IterLimit;
};

/// Projects onto the spectral-norm ball by clipping singular values at 1.
CMat project_to_ball(const CMat& c);

/// Solves the problem as an LMI in (t, Re C, Im C):
///   t I - D(C) >= 0,  [[I, C], [C^*, I]] >= 0.
/// A non-converged solve is returned with status IterLimit and the best pair.
SpectralReport minimize_spectral(const AffineSpectralProblem& problem, double tol = 1e-8,
                                 bool parallel = true);

}  // namespace cpbures
