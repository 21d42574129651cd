#include "cpbures/bures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numbers>
#include <sstream>

#include "cpbures/random.hpp"

namespace cpbures {

const char* to_string(Formulation f) {
  switch (f) {
    case Formulation::Intertwiner: return "intertwiner";
    case Formulation::Extension: return "extension";
    case Formulation::ClosedFormStates: return "closed_form_states";
    case Formulation::ClosedFormUnitary: return "closed_form_unitary";
    case Formulation::BruteForceUpper: return "brute_force_upper";
  }
  return "unknown";
}

namespace {

void require_same_dims(Eigen::Index n1, Eigen::Index m1, Eigen::Index n2, Eigen::Index m2) {
  if (n1 != n2 || m1 != m2) {
    std::ostringstream os;
    os << "maps act M_" << n1 << " -> M_" << m1 << " and M_" << n2 << " -> M_" << m2;
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
}

void require_converged(sdp::SolveStatus status, int iterations, double gap) {
  if (status == sdp::SolveStatus::Converged) return;
  std::ostringstream os;
  os << "solver ended with status " << sdp::to_string(status) << " after " << iterations
     << " iterations (gap " << gap << ")";
  throw Error(ErrorKind::SolverFailure, os.str());
}

constexpr double kSmallObjective = 1e-4;
constexpr double kFinestTol = 1e-13;

}  // namespace

AffineSpectralProblem intertwiner_problem(const GnsModule& g1, const GnsModule& g2) {
  if (g1.n != g2.n || g1.m != g2.m) {
    throw Error(ErrorKind::DimensionMismatch, "modules are over different algebras");
  }
  AffineSpectralProblem p;
  p.base = hermitian_part(inner(g1.cyclic, g1.cyclic) + inner(g2.cyclic, g2.cyclic));
  p.r1 = g1.rank();
  p.r2 = g2.rank();
  p.generators.reserve(static_cast<std::size_t>(p.r1 * p.r2));
  for (const CMat& k1 : g1.cyclic.blocks) {
    for (const CMat& k2 : g2.cyclic.blocks) p.generators.push_back(k1.adjoint() * k2);
  }
  return p;
}

BuresResult bures_intertwiner(const KrausSet& k1, const KrausSet& k2, double tol) {
  require_same_dims(k1.dim_in, k1.dim_out, k2.dim_in, k2.dim_out);
  const GnsModule g1 = build_gns(k1);
  const GnsModule g2 = build_gns(k2);
  const AffineSpectralProblem problem = intertwiner_problem(g1, g2);
  SpectralReport rep = minimize_spectral(problem, tol);
  require_converged(rep.status, rep.iterations, rep.gap);
  if (rep.value < kSmallObjective) {
    // beta is the square root of the objective, so a small objective needs a
    // much smaller absolute gap before beta itself is accurate to tol.
    const SpectralReport fine = minimize_spectral(problem, std::max(kFinestTol, tol * tol));
    if (fine.status == sdp::SolveStatus::Converged && fine.value <= rep.value) rep = fine;
  }

  BuresResult out;
  out.formulation = Formulation::Intertwiner;
  out.objective = std::max(0.0, rep.value);
  out.value = std::sqrt(out.objective);
  out.lower_bound = std::max(0.0, rep.lower_bound);
  out.gap = rep.gap;
  out.iterations = rep.iterations;
  out.status = rep.status;
  out.witness = rep.optimizer;
  return out;
}

BuresResult bures_intertwiner(const CpMap& phi1, const CpMap& phi2, double tol) {
  require_same_dims(phi1.dim_in(), phi1.dim_out(), phi2.dim_in(), phi2.dim_out());
  if (phi1.choi() == phi2.choi()) {
    // Identical inputs share their minimal Kraus stack, so C = I is exact.
    const Eigen::Index r = phi1.kraus().rank();
    const AffineSpectralProblem p = intertwiner_problem(build_gns(phi1), build_gns(phi2));
    const CMat c = CMat::Identity(r, r);
    BuresResult out;
    out.objective = std::max(0.0, p.evaluate(c));
    out.value = std::sqrt(out.objective);
    out.witness = c;
    return out;
  }
  return bures_intertwiner(phi1.kraus(), phi2.kraus(), tol);
}

BuresResult bures_extension(const CpMap& phi1, const CpMap& phi2, double tol) {
  require_same_dims(phi1.dim_in(), phi1.dim_out(), phi2.dim_in(), phi2.dim_out());
  const Eigen::Index n = phi1.dim_in(), m = phi1.dim_out();
  const CMat& j1 = phi1.choi();
  const CMat& j2 = phi2.choi();
  const CMat base = unit_image(j1, n, m) + unit_image(j2, n, m);
  const double scale = std::max({op_norm(j1), op_norm(j2), op_norm(base)});

  // Any feasible Y satisfies Y = P1 Y P2 with P_k the range projection of J_k,
  // so the solve runs over Z in Y = V1 Z V2*. This keeps the LMI strictly feasible.
  auto range_of = [](const CMat& j) {
    const HermEig e = herm_eig(j);
    const double cut = 1e-10 * std::max(1.0, e.values.cwiseAbs().maxCoeff());
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < e.values.size(); ++k) {
      if (e.values(k) > cut) keep.push_back(k);
    }
    CMat v(j.rows(), static_cast<Eigen::Index>(keep.size()));
    RVec lambda(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) {
      v.col(static_cast<Eigen::Index>(k)) = e.vectors.col(keep[k]);
      lambda(static_cast<Eigen::Index>(k)) = e.values(keep[k]);
    }
    return std::pair{v, lambda};
  };
  const auto [v1, l1] = range_of(j1);
  const auto [v2, l2] = range_of(j2);
  const Eigen::Index r1 = v1.cols(), r2 = v2.cols();

  sdp::LmiBuilder lmi;
  const int t = lmi.add_variable(1.0);
  const int obj = lmi.add_complex_block(static_cast<int>(m));
  const int ext = lmi.add_complex_block(static_cast<int>(r1 + r2));
  lmi.set_constant(obj, -hermitian_part(base) / scale);
  lmi.add_coefficient(t, obj, CMat::Identity(m, m));
  CMat diag = CMat::Zero(r1 + r2, r1 + r2);
  diag.topLeftCorner(r1, r1) = (l1 / scale).cast<cplx>().asDiagonal();
  diag.bottomRightCorner(r2, r2) = (l2 / scale).cast<cplx>().asDiagonal();
  lmi.set_constant(ext, diag);

  // Z_ab contributes v1_a v2_b* to Y, and the diagonal input blocks of that
  // outer product sum to G_ab in phi12(1).
  const cplx iu(0.0, 1.0);
  std::vector<int> re_var(r1 * r2), im_var(r1 * r2);
  for (Eigen::Index a = 0; a < r1; ++a) {
    for (Eigen::Index b = 0; b < r2; ++b) {
      const int re = lmi.add_variable(0.0);
      const int im = lmi.add_variable(0.0);
      re_var[a * r2 + b] = re;
      im_var[a * r2 + b] = im;
      const int row = static_cast<int>(a), col = static_cast<int>(r1 + b);
      lmi.add_coefficient_entry(re, ext, row, col, 1.0);
      lmi.add_coefficient_entry(im, ext, row, col, iu);
      CMat g = CMat::Zero(m, m);
      for (Eigen::Index i = 0; i < n; ++i) {
        g += v1.col(a).segment(i * m, m) * v2.col(b).segment(i * m, m).adjoint();
      }
      lmi.add_coefficient(re, obj, g + g.adjoint());
      lmi.add_coefficient(im, obj, iu * g - iu * g.adjoint());
    }
  }

  const sdp::SdpProblem problem = lmi.build();
  auto solve = [&](double solve_tol) {
    sdp::SolverOptions opt;
    opt.tol = sdp::scaled_tolerance(solve_tol, scale);
    opt.verbose = std::getenv("CPBURES_TRACE") != nullptr;
    const sdp::SolveReport rep = sdp::solve_sdp(problem, opt);

    CMat z(r1, r2);
    for (Eigen::Index k = 0; k < r1 * r2; ++k) {
      z(k / r2, k % r2) = scale * cplx(rep.y(re_var[k]), rep.y(im_var[k]));
    }
    const CMat y = v1 * z * v2.adjoint();
    CMat cross = CMat::Zero(m, m);
    for (Eigen::Index i = 0; i < n; ++i) cross += y.block(i * m, i * m, m, m);
    const CMat dmat = hermitian_part(base - cross - cross.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> es(dmat, Eigen::EigenvaluesOnly);

    BuresResult out;
    out.formulation = Formulation::Extension;
    out.objective = std::max(0.0, es.eigenvalues().maxCoeff());
    out.value = std::sqrt(out.objective);
    out.lower_bound = std::max(0.0, rep.lower_bound * scale);
    out.gap = std::abs(out.objective - rep.lower_bound * scale);
    out.iterations = rep.iterations;
    out.status = rep.status;
    out.witness = y;
    return out;
  };

  BuresResult out = solve(tol);
  require_converged(out.status, out.iterations, out.gap);
  if (out.objective < kSmallObjective) {
    const BuresResult fine = solve(std::max(kFinestTol, tol * tol));
    if (fine.status == sdp::SolveStatus::Converged && fine.objective <= out.objective) out = fine;
  }
  return out;
}

double bures_states_classical(std::span<const double> p, std::span<const double> q) {
  auto check = [](std::span<const double> v, const char* name) {
    double total = 0.0;
    for (double x : v) {
      if (!(x >= 0.0) || !std::isfinite(x)) {
        throw Error(ErrorKind::NotProbability, std::string(name) + " has a negative or non-finite entry");
      }
      total += x;
    }
    if (v.empty() || std::abs(total - 1.0) > 1e-9) {
      throw Error(ErrorKind::NotProbability, std::string(name) + " does not sum to 1");
    }
  };
  check(p, "p");
  check(q, "q");
  if (p.size() != q.size()) throw Error(ErrorKind::NotProbability, "p and q have different lengths");
  double overlap = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) overlap += std::sqrt(p[i] * q[i]);
  return std::numbers::sqrt2 * std::sqrt(std::max(0.0, 1.0 - overlap));
}

CpMap classical_state_map(std::span<const double> p) {
  const auto n = static_cast<Eigen::Index>(p.size());
  KrausSet ks{n, 1, {}};
  for (Eigen::Index i = 0; i < n; ++i) {
    if (p[i] < 0.0) throw Error(ErrorKind::NotProbability, "negative weight");
    CMat k = CMat::Zero(n, 1);
    k(i, 0) = std::sqrt(p[i]);
    ks.blocks.push_back(std::move(k));
  }
  return CpMap::from_kraus(ks);
}

double bures_id_unitary(const CMat& u) {
  if (u.rows() != u.cols()) throw Error(ErrorKind::NonSquare, "unitary must be square");
  const Eigen::Index n = u.rows();
  const double defect = op_norm(u.adjoint() * u - CMat::Identity(n, n));
  if (defect > 1e-9) {
    std::ostringstream os;
    os << "||u^* u - I|| = " << defect;
    throw Error(ErrorKind::NotUnitary, os.str());
  }
  Eigen::ComplexEigenSolver<CMat> ces(u, false);
  std::vector<double> phase;
  for (Eigen::Index k = 0; k < n; ++k) phase.push_back(std::arg(ces.eigenvalues()(k)));
  std::sort(phase.begin(), phase.end());

  // Ad_u ignores the global phase of u, so rotate the eigenphases onto the
  // centre of the shortest arc that contains them; the remaining minimax over
  // real lambda is then the optimum over the unit disc.
  const double two_pi = 2.0 * std::numbers::pi;
  double widest_gap = two_pi - (phase.back() - phase.front());
  double gap_end = phase.front() + two_pi;
  for (std::size_t k = 1; k < phase.size(); ++k) {
    if (phase[k] - phase[k - 1] > widest_gap) {
      widest_gap = phase[k] - phase[k - 1];
      gap_end = phase[k];
    }
  }
  const double arc = two_pi - widest_gap;
  const double centre = gap_end + 0.5 * arc;

  std::vector<double> cosines;
  for (double t : phase) cosines.push_back(std::cos(t - centre));
  auto worst = [&](double lambda) {
    double w = 0.0;
    for (double c : cosines) w = std::max(w, std::abs(1.0 - lambda * c));
    return w;
  };
  double lo = -1.0, hi = 1.0;
  while (hi - lo > 1e-10) {
    const double a = lo + (hi - lo) / 3.0;
    const double b = hi - (hi - lo) / 3.0;
    if (worst(a) <= worst(b)) {
      hi = b;
    } else {
      lo = a;
    }
  }
  const double best = std::min({worst(0.5 * (lo + hi)), worst(1.0), worst(-1.0)});
  return std::numbers::sqrt2 * std::sqrt(best);
}

CpMap unitary_conjugation(const CMat& u) {
  return CpMap::from_kraus(KrausSet{u.rows(), u.cols(), {u}});
}

CpMap identity_map(Eigen::Index n) {
  return CpMap::from_kraus(KrausSet{n, n, {CMat::Identity(n, n)}});
}

double brute_force_upper(const CpMap& phi1, const CpMap& phi2, int samples, std::uint64_t seed) {
  require_same_dims(phi1.dim_in(), phi1.dim_out(), phi2.dim_in(), phi2.dim_out());
  const AffineSpectralProblem p = intertwiner_problem(build_gns(phi1), build_gns(phi2));
  const Eigen::Index r1 = p.r1, r2 = p.r2;
  double best = std::max(0.0, p.evaluate(CMat::Zero(r1, r2)));
  if (samples >= 2) best = std::min(best, std::max(0.0, p.evaluate(CMat::Identity(r1, r2))));
  Rng rng(seed);
  std::uniform_real_distribution<double> radius(0.0, 1.0);
  for (int k = 2; k < samples; ++k) {
    const CMat g = random_complex(rng, r1, r2);
    Eigen::JacobiSVD<CMat> svd(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
    CMat c = svd.matrixU() * svd.matrixV().adjoint();
    if (k % 2 == 1) c *= radius(rng);
    best = std::min(best, std::max(0.0, p.evaluate(c)));
  }
  return std::sqrt(best);
}

RMat pairwise_bures(const std::vector<CpMap>& maps, double tol, bool parallel) {
  const auto k = static_cast<Eigen::Index>(maps.size());
  for (const CpMap& phi : maps) {
    require_same_dims(maps.front().dim_in(), maps.front().dim_out(), phi.dim_in(), phi.dim_out());
  }
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i + 1; j < k; ++j) pairs.emplace_back(i, j);
  }
  RMat out = RMat::Zero(k, k);
  std::exception_ptr failure;
  const auto count = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::ptrdiff_t t = 0; t < count; ++t) {
    const auto [i, j] = pairs[static_cast<std::size_t>(t)];
    try {
      const double v = bures_intertwiner(maps[i], maps[j], tol).value;
      out(i, j) = v;
      out(j, i) = v;
    } catch (...) {
#pragma omp critical(cpbures_pairwise_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

BoundReport bound_report(const CpMap& phi1, const CpMap& phi2, double tol) {
  BoundReport r;
  r.beta = bures_intertwiner(phi1, phi2, tol).value;
  const CMat diff = difference_choi(phi1, phi2);
  r.cb = cb_norm(diff, phi1.dim_in(), phi1.dim_out(), tol).value;
  r.lower = r.cb / (std::sqrt(cp_norm(phi1)) + std::sqrt(cp_norm(phi2)));
  r.upper = std::sqrt(r.cb);
  r.op_norm = level1_norm_sampled(diff, phi1.dim_in(), phi1.dim_out(), 2000, 0);
  r.ok = r.lower - 1e-6 <= r.beta && r.beta <= r.upper + 1e-6;
  return r;
}

RigidityDecomposition rigidity_decompose(const CpMap& phi, double tol) {
  if (phi.dim_in() != phi.dim_out()) {
    throw Error(ErrorKind::NonSquare, "rigidity needs a map from an algebra to itself");
  }
  const Eigen::Index n = phi.dim_in();
  const CpMap id = identity_map(n);
  const GnsModule g_id = build_gns(id);
  const GnsModule g_phi = build_gns(phi);
  const double jscale = std::max(1.0, op_norm(phi.choi()));

  double solve_tol = tol;
  for (int attempt = 0; attempt < 2; ++attempt, solve_tol /= 10.0) {
    const BuresResult res = bures_intertwiner(id, phi, solve_tol);
    const CMat witness = project_to_ball(*res.witness);
    const CMat c = pairing(g_id, g_phi, Intertwiner(witness));
    const CMat residual = phi.choi() - choi_from_kraus(KrausSet{n, n, {c}});
    const HermEig e = herm_eig(hermitian_part(residual));
    const double lmin = e.values(0);
    if (lmin < -tol * jscale) {
      if (attempt == 0) continue;
      std::ostringstream os;
      os << "residual Choi matrix has eigenvalue " << lmin;
      throw Error(ErrorKind::ResidualNotCP, os.str());
    }

    RigidityDecomposition out;
    out.c = c;
    out.witness = witness;
    out.beta_id = res.value;
    out.residual_min_eigenvalue = lmin;
    out.psi_choi = e.vectors * e.values.cwiseMax(0.0).cast<cplx>().asDiagonal() * e.vectors.adjoint();
    if (e.values.maxCoeff() > 1e-12 * jscale) out.psi = CpMap::from_choi(n, n, out.psi_choi);
    out.c_min_singular_value = min_singular_value(c);
    out.c_invertible = out.c_min_singular_value > tol;
    return out;
  }
  throw Error(ErrorKind::ResidualNotCP, "unreachable");
}

}  // namespace cpbures
