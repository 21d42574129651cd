#include "cpbures/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace cpbures {

void AffineSpectralProblem::validate() const {
  require_hermitian(base);
  if (r1 <= 0 || r2 <= 0 || static_cast<Eigen::Index>(generators.size()) != r1 * r2) {
    throw Error(ErrorKind::DimensionMismatch, "generator count differs from r1 * r2");
  }
  for (const CMat& g : generators) {
    if (g.rows() != base.rows() || g.cols() != base.cols()) {
      throw Error(ErrorKind::DimensionMismatch, "generator size differs from the base matrix");
    }
  }
}

CMat AffineSpectralProblem::objective_matrix(const CMat& c) const {
  CMat sum = CMat::Zero(base.rows(), base.cols());
  for (Eigen::Index i = 0; i < r1; ++i) {
    for (Eigen::Index j = 0; j < r2; ++j) sum += c(i, j) * generator(i, j);
  }
  return base - sum - sum.adjoint();
}

double AffineSpectralProblem::evaluate(const CMat& c) const {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(objective_matrix(c)), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

CMat project_to_ball(const CMat& c) {
  if (c.size() == 0) return c;
  Eigen::JacobiSVD<CMat> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVec s = svd.singularValues();
  if (s(0) <= 1.0) return c;
  const RVec clipped = s.cwiseMin(1.0);
  return svd.matrixU() * clipped.cast<cplx>().asDiagonal() * svd.matrixV().adjoint();
}

SpectralReport minimize_spectral(const AffineSpectralProblem& problem, double tol, bool parallel) {
  problem.validate();
  const Eigen::Index m = problem.base.rows();
  const Eigen::Index r1 = problem.r1, r2 = problem.r2;

  double scale = op_norm(problem.base);
  double gmax = 0.0;
  for (const CMat& g : problem.generators) gmax = std::max(gmax, op_norm(g));
  scale = std::max(scale, gmax);

  SpectralReport out;
  out.optimizer = CMat::Zero(r1, r2);
  if (gmax == 0.0 || scale == 0.0) {
    out.value = problem.evaluate(out.optimizer);
    out.lower_bound = out.value;
    out.status = sdp::SolveStatus::Converged;
    return out;
  }

  sdp::LmiBuilder lmi;
  const int t = lmi.add_variable(1.0);
  const int obj = lmi.add_complex_block(static_cast<int>(m));
  const int ball = lmi.add_complex_block(static_cast<int>(r1 + r2));
  lmi.set_constant(obj, -problem.base / scale);
  lmi.add_coefficient(t, obj, CMat::Identity(m, m));
  lmi.set_constant(ball, CMat::Identity(r1 + r2, r1 + r2));

  std::vector<int> re_var(r1 * r2), im_var(r1 * r2);
  for (Eigen::Index i = 0; i < r1; ++i) {
    for (Eigen::Index j = 0; j < r2; ++j) {
      const CMat g = problem.generator(i, j) / scale;
      const int re = lmi.add_variable(0.0);
      const int im = lmi.add_variable(0.0);
      re_var[i * r2 + j] = re;
      im_var[i * r2 + j] = im;
      lmi.add_coefficient(re, obj, g + g.adjoint());
      lmi.add_coefficient(im, obj, cplx(0.0, 1.0) * (g - g.adjoint()));
      lmi.add_coefficient_entry(re, ball, static_cast<int>(i), static_cast<int>(r1 + j), 1.0);
      lmi.add_coefficient_entry(im, ball, static_cast<int>(i), static_cast<int>(r1 + j), cplx(0.0, 1.0));
    }
  }

  sdp::SolverOptions opt;
  opt.tol = sdp::scaled_tolerance(tol, scale);
  opt.parallel = parallel;
  opt.verbose = std::getenv("CPBURES_TRACE") != nullptr;
  const sdp::SolveReport rep = sdp::solve_sdp(lmi.build(), opt);

  CMat c(r1, r2);
  for (Eigen::Index k = 0; k < r1 * r2; ++k) {
    c(k / r2, k % r2) = cplx(rep.y(re_var[k]), rep.y(im_var[k]));
  }
  out.optimizer = project_to_ball(c);
  out.value = problem.evaluate(out.optimizer);
  out.lower_bound = std::min(rep.lower_bound * scale, out.value);
  out.gap = out.value - out.lower_bound;
  out.iterations = rep.iterations;
  out.status = rep.status;
  return out;
}

}  // namespace cpbures
