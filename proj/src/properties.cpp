#include "cpbures/properties.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "cpbures/random.hpp"

namespace cpbures {

namespace {

using Trial = std::function<double(Rng&)>;

struct Suite {
  const char* name;
  Trial trial;
};

Eigen::Index draw(Rng& rng, Eigen::Index lo, Eigen::Index hi) {
  return std::uniform_int_distribution<Eigen::Index>(lo, hi)(rng);
}

CpMap draw_map(Rng& rng, const SuiteOptions& o) {
  return random_cpmap(rng, o.dim, o.dim, draw(rng, 1, std::max<Eigen::Index>(1, o.max_rank)));
}

double beta(const CpMap& a, const CpMap& b, double tol) { return bures_intertwiner(a, b, tol).value; }

// The state rho as a CP map into C, with Kraus columns sqrt(lambda) v.
CpMap state_map(const CMat& rho) {
  const HermEig e = herm_eig(rho);
  KrausSet ks{rho.rows(), 1, {}};
  for (Eigen::Index k = 0; k < e.values.size(); ++k) {
    if (e.values(k) > 1e-14) ks.blocks.push_back(std::sqrt(e.values(k)) * e.vectors.col(k));
  }
  return CpMap::from_kraus(ks);
}

// The same map presented through a unitarily mixed Kraus stack, so the two
// Choi matrices agree only up to rounding.
CpMap rotated_copy(Rng& rng, const CpMap& phi) {
  const KrausSet& ks = phi.kraus();
  const CMat w = random_unitary(rng, ks.rank());
  KrausSet mixed{ks.dim_in, ks.dim_out, {}};
  for (Eigen::Index i = 0; i < ks.rank(); ++i) {
    CMat k = CMat::Zero(ks.dim_in, ks.dim_out);
    for (Eigen::Index j = 0; j < ks.rank(); ++j) k += w(i, j) * ks.blocks[j];
    mixed.blocks.push_back(std::move(k));
  }
  return CpMap::from_kraus(mixed);
}

double central_defect(const Stack& y, Eigen::Index n) {
  double worst = op_norm(inner(y, y) - CMat::Identity(n, n));
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index q = 0; q < n; ++q) {
      const CMat e = matrix_unit(n, n, p, q);
      const Stack d = act(e, y, CMat::Identity(n, n)) - act(CMat::Identity(n, n), y, e);
      worst = std::max(worst, norm(d));
    }
  }
  return worst;
}

std::vector<Suite> make_suites(const SuiteOptions& o) {
  const double tol = o.tol;
  std::vector<Suite> s;

  s.push_back({"metric_identity", [&o, tol](Rng& rng) {
                 const CpMap phi = draw_map(rng, o);
                 const double same = beta(phi, phi, tol);
                 const double rotated = beta(phi, rotated_copy(rng, phi), tol);
                 return 1e-6 - std::max(same, rotated);
               }});

  s.push_back({"metric_symmetry", [&o, tol](Rng& rng) {
                 const CpMap phi = draw_map(rng, o), psi = draw_map(rng, o);
                 return 1e-6 - std::abs(beta(phi, psi, tol) - beta(psi, phi, tol));
               }});

  s.push_back({"metric_triangle", [&o, tol](Rng& rng) {
                 const CpMap phi = draw_map(rng, o), chi = draw_map(rng, o);
                 // Every third trial puts psi on an endpoint, where the
                 // inequality is tight.
                 const bool endpoint = std::uniform_int_distribution<int>(0, 2)(rng) == 0;
                 const CpMap psi = endpoint ? phi : draw_map(rng, o);
                 const double legs = o.triangle_leg_scale * (beta(phi, psi, tol) + beta(psi, chi, tol));
                 return legs + 1e-5 - beta(phi, chi, tol);
               }});

  s.push_back({"ampliation", [&o, tol](Rng& rng) {
                 const CpMap phi = draw_map(rng, o), psi = draw_map(rng, o);
                 const double b1 = beta(phi, psi, tol);
                 const double b2 = beta(amplify(phi, 2), amplify(psi, 2), tol);
                 return 1e-4 - std::abs(b1 - b2);
               }});

  s.push_back({"composition", [&o, tol](Rng& rng) {
                 const CpMap phi1 = draw_map(rng, o), phi2 = draw_map(rng, o);
                 const CpMap psi1 = draw_map(rng, o), psi2 = draw_map(rng, o);
                 const double lhs = beta(compose(psi1, phi1), compose(psi2, phi2), tol);
                 const double rhs = std::sqrt(cp_norm(phi1)) * beta(psi1, psi2, tol) +
                                    std::sqrt(cp_norm(psi2)) * beta(phi1, phi2, tol);
                 return rhs + 1e-5 - lhs;
               }});

  s.push_back({"perturbation_sum", [&o, tol](Rng& rng) {
                 const CpMap phi1 = draw_map(rng, o), phi2 = draw_map(rng, o);
                 return std::sqrt(cp_norm(phi2)) + 1e-6 - beta(phi1, add(phi1, phi2), tol);
               }});

  s.push_back({"perturbation_norm", [&o, tol](Rng& rng) {
                 std::uniform_real_distribution<double> level(0.2, 1.0);
                 CpMap phi1 = draw_map(rng, o), phi2 = draw_map(rng, o);
                 phi1 = scale(phi1, level(rng) / cp_norm(phi1));
                 phi2 = scale(phi2, level(rng) / cp_norm(phi2));
                 return 2.0 * beta(phi1, phi2, tol) + 1e-6 - std::abs(cp_norm(phi1) - cp_norm(phi2));
               }});

  s.push_back({"cb_bounds", [&o, tol](Rng& rng) {
                 const CpMap phi = draw_map(rng, o), psi = draw_map(rng, o);
                 const BoundReport r = bound_report(phi, psi, tol);
                 return std::min(r.beta - (r.lower - 1e-6), r.upper + 1e-6 - r.beta);
               }});

  s.push_back({"state_compression", [&o, tol](Rng& rng) {
                 const CpMap phi = draw_map(rng, o), psi = draw_map(rng, o);
                 const double full = beta(phi, psi, tol);
                 double worst = std::numeric_limits<double>::infinity();
                 for (Eigen::Index k = 1; k <= 2; ++k) {
                   const CpMap sigma = state_map(random_density(rng, k * o.dim));
                   const double compressed =
                       beta(compose(sigma, amplify(phi, k)), compose(sigma, amplify(psi, k)), tol);
                   worst = std::min(worst, full + 1e-5 - compressed);
                 }
                 return worst;
               }});

  s.push_back({"formulation_equivalence", [tol](Rng& rng) {
                 const Eigen::Index n = draw(rng, 1, 3), m = draw(rng, 1, 3);
                 const CpMap phi = random_cpmap(rng, n, m, draw(rng, 1, 3));
                 const CpMap psi = random_cpmap(rng, n, m, draw(rng, 1, 3));
                 return 1e-5 - std::abs(bures_intertwiner(phi, psi, tol).value -
                                        bures_extension(phi, psi, tol).value);
               }});

  s.push_back({"witness_consistency", [&o, tol](Rng& rng) {
                 const CpMap phi = draw_map(rng, o), psi = draw_map(rng, o);
                 const BuresResult r = bures_intertwiner(phi, psi, tol);
                 const AffineSpectralProblem p = intertwiner_problem(build_gns(phi), build_gns(psi));
                 const double at_witness = std::max(0.0, p.evaluate(*r.witness));
                 return std::max(r.gap, 1e-12) - std::abs(at_witness - r.value * r.value);
               }});

  s.push_back({"oracle_floor", [&o, tol](Rng& rng) {
                 const CpMap phi = draw_map(rng, o), psi = draw_map(rng, o);
                 const double upper = brute_force_upper(phi, psi, 500, rng());
                 return upper - (beta(phi, psi, tol) - 1e-6);
               }});

  s.push_back({"rigidity_center", [&o, tol](Rng& rng) {
                 const Eigen::Index n = o.dim;
                 const CMat h = random_hermitian(rng, n);
                 const CMat c0 = 0.9 * CMat::Identity(n, n) + 0.05 * h / op_norm(h);
                 CpMap extra = draw_map(rng, o);
                 extra = scale(extra, 0.01 / cp_norm(extra));
                 const CpMap phi = add(CpMap::from_kraus(KrausSet{n, n, {c0}}), extra);
                 const RigidityDecomposition d = rigidity_decompose(phi, tol);
                 if (d.beta_id >= 1.0 - 1e-3) return 0.0;
                 const std::optional<Stack> y = center_unit_vector(build_gns(phi));
                 if (!y) return -1.0;
                 return 1e-6 - central_defect(*y, n);
               }});

  return s;
}

}  // namespace

bool SuiteReport::passed() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& r) { return r.passed(); });
}

SuiteReport property_suites(const SuiteOptions& options) {
  SuiteReport report;
  if (options.trials <= 0) return report;
  const std::vector<Suite> suites = make_suites(options);
  for (std::size_t index = 0; index < suites.size(); ++index) {
    std::seed_seq seq{options.seed, static_cast<std::uint64_t>(index)};
    Rng rng(seq);
    SuiteResult result;
    result.name = suites[index].name;
    result.worst_margin = std::numeric_limits<double>::infinity();
    for (int t = 0; t < options.trials; ++t) {
      double margin = 0.0;
      std::string message;
      try {
        margin = suites[index].trial(rng);
        if (!(margin >= 0.0)) message = "trial " + std::to_string(t) + " margin " + std::to_string(margin);
      } catch (const Error& e) {
        margin = -std::numeric_limits<double>::infinity();
        message = "trial " + std::to_string(t) + ": " + e.what();
      }
      ++result.trials;
      result.worst_margin = std::min(result.worst_margin, margin);
      if (!message.empty()) {
        ++result.failures;
        if (result.first_failure.empty()) result.first_failure = message;
      }
    }
    report.suites.push_back(std::move(result));
  }
  return report;
}

}  // namespace cpbures
