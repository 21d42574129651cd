// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cpbures/bures.hpp"
#include "cpbures/json_io.hpp"
#include "cpbures/properties.hpp"
#include "cpbures/random.hpp"
#include "oracles.hpp"
#include "worked_examples.hpp"

using namespace cpbures;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      detail << " [" << what << "]";
    }
  }
};

std::string fixture(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

void transpose_gap(Outcome& out) {
  const CpMap phi1 = read_cpmap(fixture("transpose_gap_phi1.json"));
  const CpMap phi2 = read_cpmap(fixture("transpose_gap_phi2.json"));
  const BuresResult r = bures_intertwiner(phi1, phi2);
  const double target = worked::kTransposeGapObjective;
  const BoundReport b = bound_report(phi1, phi2);
  out.detail << "beta=" << r.value << " cb=" << b.cb << " op_norm=" << b.op_norm;
  out.require(std::abs(r.value * r.value - target) <= 1e-4, "beta^2");
  out.require(std::abs(b.cb - 2.0) <= 1e-4, "cb");
  out.require(std::abs(b.op_norm - 1.0) <= 1e-3, "op_norm");
  out.require(b.op_norm < r.value * r.value && r.value * r.value < b.cb, "strict chain");
}

void classical_states(Outcome& out) {
  Rng rng(2);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t len = 1 + t % 4;
    const auto p = random_probability(rng, len), q = random_probability(rng, len);
    const double solved = bures_intertwiner(classical_state_map(p), classical_state_map(q)).value;
    worst = std::max(worst, std::abs(solved - oracle::classical_states(p, q)));
  }
  out.detail << "max_err=" << worst;
  out.require(worst <= 1e-5, "closed form");
}

void unattained(Outcome& out) {
  const CpMap e11 = read_cpmap(fixture("unattained_phi1.json"));
  const CpMap e12 = read_cpmap(fixture("unattained_phi2.json"));
  const auto grid = oracle::scalar_ball_minimum(CMat::Identity(2, 2), worked::m2(0, 1, 0, 0));
  const double beta = bures_intertwiner(e11, e12).value;
  double module_min = 1e9;
  const CMat a1 = worked::m2(1, 0, 0, 0), a2 = worked::m2(0, 1, 0, 0);
  for (int i = 0; i < 90; ++i) {
    for (int j = 0; j < 90; ++j) {
      const cplx l1 = std::polar(1.0, 2 * std::numbers::pi * i / 90);
      const cplx l2 = std::polar(1.0, 2 * std::numbers::pi * j / 90);
      const CMat d = l1 * a1 - l2 * a2;
      module_min = std::min(module_min, std::sqrt(op_norm(d.adjoint() * d)));
    }
  }
  out.detail << "beta=" << beta << " grid=" << std::sqrt(grid.value) << " fixed_module=" << module_min;
  out.require(std::abs(std::sqrt(grid.value) - 1.0) <= 1e-5, "grid oracle");
  out.require(std::abs(beta - 1.0) <= 1e-5, "solver");
  out.require(std::abs(module_min - std::sqrt(2.0)) <= 1e-12, "fixed module");
}

void unitary(Outcome& out) {
  Rng rng(4);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const Eigen::Index n = 2 + t % 2;
    const CMat u = random_unitary(rng, n);
    const double solved = bures_intertwiner(identity_map(n), unitary_conjugation(u)).value;
    worst = std::max(worst, std::abs(solved - bures_id_unitary(u)));
  }
  out.detail << "max_err=" << worst;
  out.require(worst <= 1e-5, "closed form");
}

void equivalence(Outcome& out) {
  Rng rng(5);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const CpMap a = random_cpmap(rng, 2, 2, 1 + t % 3), b = random_cpmap(rng, 2, 2, 1 + (t / 3) % 3);
    worst = std::max(worst, std::abs(bures_intertwiner(a, b).value - bures_extension(a, b).value));
  }
  out.detail << "max_diff=" << worst;
  out.require(worst <= 1e-5, "formulations");
}

void cb_bounds(Outcome& out) {
  Rng rng(6);
  double worst = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 50; ++t) {
    const CpMap a = random_cpmap(rng, 2, 2, 1 + t % 3), b = random_cpmap(rng, 2, 2, 1 + (t / 3) % 3);
    const BoundReport r = bound_report(a, b);
    const double lower = r.cb / (std::sqrt(cp_norm(a)) + std::sqrt(cp_norm(b)));
    const double upper = std::sqrt(r.cb);
    worst = std::min({worst, r.beta - (lower - 1e-6), upper + 1e-6 - r.beta});
  }
  out.detail << "worst_margin=" << worst;
  out.require(worst >= 0.0, "bounds");
}

void suites(Outcome& out) {
  SuiteOptions o;
  o.seed = 42;
  o.trials = 50;
  const SuiteReport r = property_suites(o);
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& s : r.suites) {
    worst = std::min(worst, s.worst_margin);
    out.require(s.passed(), s.name + ": " + s.first_failure);
  }
  out.detail << "suites=" << r.suites.size() << " worst_margin=" << worst;
}

void rigidity(Outcome& out) {
  Rng rng(8);
  for (int t = 0; t < 5; ++t) {
    const CMat h = random_hermitian(rng, 2);
    const CMat c0 = 0.9 * CMat::Identity(2, 2) + 0.05 * h / op_norm(h);
    CpMap small = random_cpmap(rng, 2, 2, 2);
    small = scale(small, 0.01 / cp_norm(small));
    const CpMap phi = add(unitary_conjugation(c0), small);
    const RigidityDecomposition d = rigidity_decompose(phi);
    const auto y = center_unit_vector(build_gns(phi));
    out.require(d.beta_id < 1.0, "beta_id");
    out.require(d.c_invertible && d.c_min_singular_value > 1e-3, "invertible c");
    out.require(d.residual_min_eigenvalue >= -1e-7, "residual CP");
    out.require(y.has_value() && std::abs(norm(*y) - 1.0) <= 1e-6, "central unit vector");
    if (t == 0) out.detail << "beta_id=" << d.beta_id << " smin=" << d.c_min_singular_value;
  }
  const RigidityDecomposition corner = rigidity_decompose(read_cpmap(fixture("unattained_phi2.json")));
  out.detail << " corner_beta_id=" << corner.beta_id;
  out.require(!corner.c_invertible, "corner map");
}

void oracle_floor(Outcome& out) {
  Rng rng(9);
  double worst = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 10; ++t) {
    const CpMap a = random_cpmap(rng, 2, 2, 1 + t % 3), b = random_cpmap(rng, 2, 2, 1 + (t / 3) % 3);
    const double upper = brute_force_upper(a, b, 10000, 1000 + t);
    worst = std::min(worst, upper - (bures_intertwiner(a, b).value - 1e-6));
  }
  out.detail << "worst_margin=" << worst;
  out.require(worst >= 0.0, "floor");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
      {"transpose gap", transpose_gap}, {"classical states", classical_states},
      {"unattained infimum", unattained}, {"unitary conjugation", unitary},
      {"formulation equivalence", equivalence}, {"cb-norm bounds", cb_bounds},
      {"property suites", suites},      {"rigidity", rigidity},
      {"oracle floor", oracle_floor},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(out);
    } catch (const std::exception& e) {
      out.ok = false;
      out.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %zu %s: %s (%.1fs)\n", out.ok ? "PASS" : "FAIL", i + 1, criteria[i].first,
                out.detail.str().c_str(), secs);
    std::fflush(stdout);
    failed += out.ok ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
