#include "cpbures/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <tuple>
#include <cstdio>

#include "cpbures/schur.hpp"

namespace cpbures::sdp {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::IterLimit: return "IterLimit";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::Unbounded: return "Unbounded";
  }
  return "Unknown";
}

void SdpProblem::validate() const {
  if (constant.size() != block_sizes.size()) {
    throw Error(ErrorKind::DimensionMismatch, "constant term has the wrong number of blocks");
  }
  for (std::size_t b = 0; b < block_sizes.size(); ++b) {
    const RMat& f0 = constant[b];
    if (f0.rows() != block_sizes[b] || f0.cols() != block_sizes[b]) {
      throw Error(ErrorKind::DimensionMismatch, "constant block has the wrong size");
    }
    if ((f0 - f0.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, f0.cwiseAbs().maxCoeff())) {
      throw Error(ErrorKind::NonHermitian, "constant block is not symmetric");
    }
  }
  if (objective.size() != num_variables()) {
    throw Error(ErrorKind::DimensionMismatch, "objective length differs from the variable count");
  }
  for (const SparseBlockMatrix& f : coefficients) {
    int last = -1;
    for (const BlockEntries& be : f) {
      if (be.block <= last || be.block >= static_cast<int>(block_sizes.size())) {
        throw Error(ErrorKind::DimensionMismatch, "coefficient blocks must be ascending and in range");
      }
      last = be.block;
      for (const Entry& e : be.entries) {
        if (e.row < 0 || e.col < 0 || e.row >= block_sizes[be.block] || e.col >= block_sizes[be.block]) {
          throw Error(ErrorKind::DimensionMismatch, "coefficient entry out of range");
        }
      }
    }
  }
}

BlockMatrix evaluate_lmi(const SdpProblem& problem, const RVec& y) {
  BlockMatrix out = problem.constant;
  for (int i = 0; i < problem.num_variables(); ++i) {
    const double yi = y(i);
    if (yi == 0.0) continue;
    for (const BlockEntries& be : problem.coefficients[i]) {
      RMat& ob = out[be.block];
      for (const Entry& e : be.entries) ob(e.row, e.col) += yi * e.value;
    }
  }
  return out;
}

double min_eigenvalue(const BlockMatrix& m) {
  double lo = std::numeric_limits<double>::infinity();
  for (const RMat& b : m) {
    if (b.size() == 0) continue;
    Eigen::SelfAdjointEigenSolver<RMat> es(b, Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues()(0));
  }
  return lo;
}

namespace {

double dot(const BlockMatrix& a, const BlockMatrix& b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k].cwiseProduct(b[k]).sum();
  return acc;
}

double frobenius(const BlockMatrix& a) { return std::sqrt(dot(a, a)); }

double frobenius(const SparseBlockMatrix& f) {
  double acc = 0.0;
  for (const BlockEntries& be : f) {
    for (const Entry& e : be.entries) acc += e.value * e.value;
  }
  return std::sqrt(acc);
}

BlockMatrix scaled_identity(const std::vector<int>& sizes, double value) {
  BlockMatrix out;
  out.reserve(sizes.size());
  for (int n : sizes) out.push_back(value * RMat::Identity(n, n));
  return out;
}

void axpy(BlockMatrix& y, double a, const BlockMatrix& x) {
  for (std::size_t k = 0; k < y.size(); ++k) y[k] += a * x[k];
}

void add_combination(BlockMatrix& out, const std::vector<SparseBlockMatrix>& f, const RVec& w) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double wi = w(static_cast<Eigen::Index>(i));
    if (wi == 0.0) continue;
    for (const BlockEntries& be : f[i]) {
      RMat& ob = out[be.block];
      for (const Entry& e : be.entries) ob(e.row, e.col) += wi * e.value;
    }
  }
}

// Largest alpha with m + alpha * dm still positive semidefinite; +inf when unbounded.
double max_step(const BlockMatrix& m, const BlockMatrix& dm) {
  double alpha = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (m[k].size() == 0) continue;
    Eigen::LLT<RMat> llt(m[k]);
    if (llt.info() != Eigen::Success) return 0.0;
    const RMat l_inv_dm = llt.matrixL().solve(dm[k]);
    const RMat w = llt.matrixL().solve(l_inv_dm.transpose());
    Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (w + w.transpose()), Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues()(0);
    if (lo < 0.0) alpha = std::min(alpha, -1.0 / lo);
  }
  return alpha;
}

bool invert_spd(const BlockMatrix& m, BlockMatrix& inv) {
  inv.resize(m.size());
  for (std::size_t k = 0; k < m.size(); ++k) {
    Eigen::LLT<RMat> llt(m[k]);
    if (llt.info() != Eigen::Success) return false;
    inv[k] = llt.solve(RMat::Identity(m[k].rows(), m[k].cols()));
    inv[k] = 0.5 * (inv[k] + inv[k].transpose());
  }
  return true;
}

struct Direction {
  RVec dy;
  BlockMatrix dx;
  BlockMatrix ds;
};

class InteriorPoint {
 public:
  InteriorPoint(const SdpProblem& p, const SolverOptions& o) : p_(p), opt_(o) {}

  SolveReport run();

 private:
  Direction direction(double target, const BlockMatrix* corr) const;
  bool factor_schur();

  const SdpProblem& p_;
  const SolverOptions& opt_;
  BlockMatrix x_, s_, s_inv_, rd_;
  RVec y_, rp_;
  Eigen::LDLT<RMat> schur_;
};

bool InteriorPoint::factor_schur() {
  RMat m = opt_.parallel ? schur_complement_parallel(p_.coefficients, x_, s_inv_)
                         : schur_complement_serial(p_.coefficients, x_, s_inv_);
  if (m.size() == 0) return true;
  schur_.compute(m);
  if (schur_.info() == Eigen::Success && schur_.isPositive()) return true;
  const double shift = 1e-14 * std::max(1.0, m.diagonal().cwiseAbs().maxCoeff());
  m.diagonal().array() += shift;
  schur_.compute(m);
  return schur_.info() == Eigen::Success;
}

Direction InteriorPoint::direction(double target, const BlockMatrix* corr) const {
  const std::size_t nb = x_.size();
  BlockMatrix r(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    RMat base = target * s_inv_[k] - x_[k] - x_[k] * rd_[k] * s_inv_[k];
    if (corr != nullptr) base -= (*corr)[k] * s_inv_[k];
    r[k] = std::move(base);
  }
  Direction d;
  const RVec rhs = inner_products(p_.coefficients, r) - rp_;
  d.dy = rhs.size() > 0 ? RVec(schur_.solve(rhs)) : RVec(rhs);
  d.ds = rd_;
  add_combination(d.ds, p_.coefficients, d.dy);
  d.dx.resize(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    RMat dx = target * s_inv_[k] - x_[k] - x_[k] * d.ds[k] * s_inv_[k];
    if (corr != nullptr) dx -= (*corr)[k] * s_inv_[k];
    d.dx[k] = 0.5 * (dx + dx.transpose());
  }
  return d;
}

SolveReport InteriorPoint::run() {
  const int n_var = p_.num_variables();
  double dim = 0.0;
  for (int b : p_.block_sizes) dim += b;
  const double root_dim = std::sqrt(std::max(1.0, dim));

  double xi = std::max(10.0, root_dim);
  double eta = std::max({10.0, root_dim, frobenius(p_.constant)});
  for (int i = 0; i < n_var; ++i) {
    const double fn = frobenius(p_.coefficients[i]);
    xi = std::max(xi, dim * (1.0 + std::abs(p_.objective(i))) / (1.0 + fn));
    eta = std::max(eta, fn);
  }
  x_ = scaled_identity(p_.block_sizes, xi);
  s_ = scaled_identity(p_.block_sizes, eta);
  y_ = RVec::Zero(n_var);

  const double c_norm = p_.objective.norm();
  const double f0_norm = frobenius(p_.constant);
  double max_f_norm = 0.0;
  for (const auto& f : p_.coefficients) max_f_norm = std::max(max_f_norm, frobenius(f));

  SolveReport rep;
  // Late iterations can lose feasibility to rounding, so an unsuccessful
  // solve reports the iterate that came closest to the stopping test.
  SolveReport best;
  double best_merit = std::numeric_limits<double>::infinity();
  auto give_up = [&]() {
    best.status = SolveStatus::IterLimit;
    best.iterations = rep.iterations;
    return best;
  };
  double best_gap = std::numeric_limits<double>::infinity();
  int stall = 0;

  for (int it = 0;; ++it) {
    rd_ = evaluate_lmi(p_, y_);
    axpy(rd_, -1.0, s_);
    rp_ = p_.objective - inner_products(p_.coefficients, x_);

    const double pobj = p_.objective.dot(y_);
    const double dobj = -dot(p_.constant, x_);
    const double gap = std::abs(pobj - dobj);
    const double scale = std::max(1.0, 0.5 * (std::abs(pobj) + std::abs(dobj)));
    const double pinf = rp_.norm() / (1.0 + c_norm);
    const double dinf = frobenius(rd_) / (1.0 + f0_norm);

    rep.value = pobj;
    rep.lower_bound = dobj;
    rep.y = y_;
    rep.dual = x_;
    rep.gap = gap;
    rep.primal_infeasibility = pinf;
    rep.dual_infeasibility = dinf;
    rep.iterations = it;

    if (opt_.verbose) {
      std::fprintf(stderr, "%3d pobj % .12e dobj % .12e gap %.3e pinf %.3e dinf %.3e\n", it, pobj,
                   dobj, gap, pinf, dinf);
    }
    if (gap <= opt_.tol * scale && pinf <= opt_.feasibility_tol && dinf <= opt_.feasibility_tol) {
      rep.status = SolveStatus::Converged;
      return rep;
    }
    const double merit = std::max({gap / (opt_.tol * scale), pinf / opt_.feasibility_tol,
                                   dinf / opt_.feasibility_tol});
    if (merit < best_merit) {
      best_merit = merit;
      best = rep;
    }

    // Normalized infeasibility certificate: X >= 0, F_i . X ~ 0, F0 . X = -1.
    if (dobj > 0.0) {
      BlockMatrix cert = x_;
      for (RMat& b : cert) b /= dobj;
      const double residual = inner_products(p_.coefficients, cert).norm() * (1.0 + max_f_norm);
      if (residual <= 1e-8 && (n_var == 0 || dobj > 1e6 * (1.0 + c_norm))) {
        rep.status = SolveStatus::Infeasible;
        rep.dual = std::move(cert);
        return rep;
      }
    }
    if (pobj < -1e8 * (1.0 + f0_norm)) {
      BlockMatrix ray = evaluate_lmi(p_, y_ / -pobj);
      axpy(ray, 1.0 / pobj, p_.constant);
      if (min_eigenvalue(ray) >= -1e-8) {
        rep.status = SolveStatus::Unbounded;
        return rep;
      }
    }

    if (it >= opt_.max_iterations) {
      return give_up();
    }
    if (gap < best_gap * 0.999) {
      best_gap = gap;
      stall = 0;
    } else if (++stall > opt_.stall_iterations) {
      return give_up();
    }

    if (!invert_spd(s_, s_inv_) || !factor_schur()) {
      return give_up();
    }
    const double mu = dot(x_, s_) / dim;

    const Direction pred = direction(0.0, nullptr);
    const double ap_pred = std::min(1.0, max_step(x_, pred.dx));
    const double ad_pred = std::min(1.0, max_step(s_, pred.ds));

    BlockMatrix xa = x_, sa = s_;
    axpy(xa, ap_pred, pred.dx);
    axpy(sa, ad_pred, pred.ds);
    const double mu_aff = dot(xa, sa) / dim;
    const double expon = std::max(1.0, 3.0 * std::pow(std::min(ap_pred, ad_pred), 2));
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, expon), 0.0, 1.0);

    BlockMatrix corr(x_.size());
    for (std::size_t k = 0; k < x_.size(); ++k) corr[k] = pred.dx[k] * pred.ds[k];
    const Direction d = direction(sigma * mu, &corr);

    const double gamma = 0.9 + 0.09 * std::min(ap_pred, ad_pred);
    const double ap = std::min(1.0, gamma * max_step(x_, d.dx));
    const double ad = std::min(1.0, gamma * max_step(s_, d.ds));
    if (ap < 1e-12 && ad < 1e-12) return give_up();
    axpy(x_, ap, d.dx);
    axpy(s_, ad, d.ds);
    y_ += ad * d.dy;
    for (RMat& b : x_) b = 0.5 * (b + b.transpose());
    for (RMat& b : s_) b = 0.5 * (b + b.transpose());
  }
}

}  // namespace

SolveReport solve_sdp(const SdpProblem& problem, const SolverOptions& options) {
  problem.validate();
  if (!(options.tol > 0.0)) throw Error(ErrorKind::SolverFailure, "tolerance must be positive");
  InteriorPoint ipm(problem, options);
  return ipm.run();
}

int LmiBuilder::add_variable(double cost) {
  costs_.push_back(cost);
  return static_cast<int>(costs_.size()) - 1;
}

int LmiBuilder::add_complex_block(int dim) {
  blocks_.push_back({dim, true});
  constants_.push_back(CMat::Zero(dim, dim));
  return static_cast<int>(blocks_.size()) - 1;
}

int LmiBuilder::add_real_block(int dim) {
  blocks_.push_back({dim, false});
  constants_.push_back(CMat::Zero(dim, dim));
  return static_cast<int>(blocks_.size()) - 1;
}

void LmiBuilder::set_constant(int block, const CMat& value) {
  const int d = blocks_.at(block).dim;
  if (value.rows() != d || value.cols() != d) {
    throw Error(ErrorKind::DimensionMismatch, "constant block has the wrong size");
  }
  constants_[block] = value;
}

void LmiBuilder::add_coefficient(int var, int block, const CMat& value) {
  const int d = blocks_.at(block).dim;
  if (value.rows() != d || value.cols() != d) {
    throw Error(ErrorKind::DimensionMismatch, "coefficient block has the wrong size");
  }
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      if (value(r, c) != cplx(0.0)) terms_.push_back({var, block, r, c, value(r, c)});
    }
  }
}

void LmiBuilder::add_coefficient_entry(int var, int block, int r, int c, cplx value) {
  terms_.push_back({var, block, r, c, value});
  if (r != c) terms_.push_back({var, block, c, r, std::conj(value)});
}

SdpProblem LmiBuilder::build() const {
  SdpProblem p;
  std::vector<int> offset;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const BlockInfo& info = blocks_[b];
    p.block_sizes.push_back(info.complex ? 2 * info.dim : info.dim);
    if (info.complex) {
      p.constant.push_back(real_embedding(constants_[b]));
    } else {
      p.constant.push_back(constants_[b].real());
    }
    p.constant.back() = 0.5 * (p.constant.back() + p.constant.back().transpose());
  }

  std::map<std::tuple<int, int, int, int>, double> acc;
  for (const Term& t : terms_) {
    const BlockInfo& info = blocks_.at(t.block);
    const int d = info.dim;
    if (info.complex) {
      acc[{t.var, t.block, t.row, t.col}] += t.value.real();
      acc[{t.var, t.block, d + t.row, d + t.col}] += t.value.real();
      acc[{t.var, t.block, t.row, d + t.col}] += -t.value.imag();
      acc[{t.var, t.block, d + t.row, t.col}] += t.value.imag();
    } else {
      acc[{t.var, t.block, t.row, t.col}] += t.value.real();
    }
  }

  p.coefficients.assign(costs_.size(), {});
  for (const auto& [key, value] : acc) {
    if (value == 0.0) continue;
    const auto [var, block, row, col] = key;
    SparseBlockMatrix& f = p.coefficients.at(var);
    if (f.empty() || f.back().block != block) f.push_back({block, {}});
    f.back().entries.push_back({row, col, value});
  }
  p.objective = Eigen::Map<const RVec>(costs_.data(), static_cast<Eigen::Index>(costs_.size()));
  return p;
}

}  // namespace cpbures::sdp
