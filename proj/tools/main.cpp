// Command-line front end: reads CP maps from JSON and prints JSON reports, or a
// CSV table for `matrix`.
//
// Exit codes: 0 success, 1 property suite failure, 2 parse or validation
// error, 3 solver failure.

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cpbures/bures.hpp"
#include "cpbures/json_io.hpp"
#include "cpbures/properties.hpp"

namespace {

using cpbures::CpMap;
using cpbures::Error;
using cpbures::ErrorKind;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitSuiteFailed = 1;
constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;

struct Job {
  std::string command;
  std::vector<std::string> inputs;
  std::string formulation = "auto";
  double tol = 1e-8;
  std::uint64_t seed = 0;
  std::string output;
  int trials = 50;
  int dim = 2;
  bool serial = false;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error(ErrorKind::ValidationError, "cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::vector<CpMap> load(const std::vector<std::string>& paths) {
  std::vector<CpMap> maps;
  maps.reserve(paths.size());
  for (const auto& p : paths) maps.push_back(cpbures::read_cpmap(p));
  return maps;
}

void require_count(const Job& job, std::size_t lo, std::size_t hi) {
  const std::size_t k = job.inputs.size();
  if (k < lo || k > hi) {
    std::ostringstream os;
    os << job.command << " takes ";
    if (lo == hi) {
      os << lo;
    } else if (hi == std::size_t(-1)) {
      os << "at least " << lo;
    } else {
      os << lo << " to " << hi;
    }
    os << " input file(s), got " << k;
    throw Error(ErrorKind::ValidationError, os.str());
  }
}

json base_report(const Job& job) {
  json r;
  r["command"] = job.command;
  r["inputs"] = job.inputs;
  return r;
}

json run_bures(const Job& job) {
  require_count(job, 2, 2);
  const auto maps = load(job.inputs);
  json r = base_report(job);
  const bool want_int = job.formulation != "extension";
  const bool want_ext = job.formulation != "intertwiner";
  std::optional<cpbures::BuresResult> in, ex;
  if (want_int) in = cpbures::bures_intertwiner(maps[0], maps[1], job.tol);
  if (want_ext) ex = cpbures::bures_extension(maps[0], maps[1], job.tol);

  const cpbures::BuresResult& primary = in ? *in : *ex;
  r["formulation"] = job.formulation;
  r["value"] = primary.value;
  r["gap"] = primary.gap;
  if (in && ex) {
    r["values"] = {{"intertwiner", in->value},
                   {"extension", ex->value},
                   {"difference", std::abs(in->value - ex->value)}};
    r["gap"] = std::max(in->gap, ex->gap);
  }
  if (primary.witness) r["witness"] = cpbures::matrix_to_json(*primary.witness);
  return r;
}

json run_cbnorm(const Job& job) {
  require_count(job, 2, 2);
  const auto maps = load(job.inputs);
  const auto res = cpbures::cb_norm(cpbures::difference_choi(maps[0], maps[1]), maps[0].dim_in(),
                                    maps[0].dim_out(), job.tol);
  json r = base_report(job);
  r["formulation"] = "cb_norm_sdp";
  r["value"] = res.value;
  r["gap"] = res.report.gap;
  return r;
}

json run_bounds(const Job& job) {
  require_count(job, 2, 2);
  const auto maps = load(job.inputs);
  const auto b = cpbures::bound_report(maps[0], maps[1], job.tol);
  json r = base_report(job);
  r["formulation"] = "intertwiner";
  r["value"] = b.beta;
  r["values"] = {{"beta", b.beta}, {"cb", b.cb},           {"lower", b.lower},
                 {"upper", b.upper}, {"op_norm", b.op_norm}, {"ok", b.ok}};
  r["gap"] = job.tol;
  return r;
}

json run_rigidity(const Job& job) {
  require_count(job, 1, 1);
  const CpMap phi = cpbures::read_cpmap(job.inputs[0]);
  const auto d = cpbures::rigidity_decompose(phi, job.tol);
  const bool central = d.beta_id < 1.0 && cpbures::center_unit_vector(cpbures::build_gns(phi)).has_value();
  json r = base_report(job);
  r["formulation"] = "intertwiner";
  r["value"] = d.beta_id;
  r["values"] = {{"beta_id", d.beta_id},
                 {"c_invertible", d.c_invertible},
                 {"c_min_singular_value", d.c_min_singular_value},
                 {"residual_min_eigenvalue", d.residual_min_eigenvalue},
                 {"center_unit_vector", central}};
  r["c"] = cpbures::matrix_to_json(d.c);
  r["witness"] = cpbures::matrix_to_json(d.witness);
  r["gap"] = job.tol;
  return r;
}

json run_verify(const Job& job) {
  require_count(job, 1, 1);
  const CpMap phi = cpbures::read_cpmap(job.inputs[0]);
  const cpbures::HermEig e = cpbures::herm_eig(phi.choi());
  json r = base_report(job);
  r["value"] = cpbures::cp_norm(phi);
  r["values"] = {{"dim_in", phi.dim_in()},
                 {"dim_out", phi.dim_out()},
                 {"kraus_rank", phi.kraus().rank()},
                 {"cp_norm", cpbures::cp_norm(phi)},
                 {"choi_min_eigenvalue", e.values.minCoeff()}};
  return r;
}

json run_suite(const Job& job, bool& passed) {
  cpbures::SuiteOptions o;
  o.seed = job.seed;
  o.trials = job.trials;
  o.dim = job.dim;
  o.tol = job.tol;
  const auto rep = cpbures::property_suites(o);
  json suites = json::array();
  for (const auto& s : rep.suites) {
    json e = {{"name", s.name}, {"trials", s.trials}, {"failures", s.failures}, {"passed", s.passed()}};
    // Infinite margins are not representable in JSON.
    e["worst_margin"] = std::isfinite(s.worst_margin) ? json(s.worst_margin) : json(nullptr);
    if (!s.first_failure.empty()) e["first_failure"] = s.first_failure;
    suites.push_back(std::move(e));
  }
  passed = rep.passed();
  json r = base_report(job);
  r["value"] = passed;
  r["values"] = {{"seed", job.seed}, {"trials", job.trials}, {"dim", job.dim}, {"suites", suites}};
  return r;
}

void run_matrix(const Job& job, std::ostream& out) {
  require_count(job, 2, std::size_t(-1));
  const auto maps = load(job.inputs);
  const cpbures::RMat beta = cpbures::pairwise_bures(maps, job.tol, !job.serial);
  out << std::setprecision(17);
  for (std::size_t i = 0; i < job.inputs.size(); ++i) out << (i ? "," : "") << job.inputs[i];
  out << "\n";
  for (Eigen::Index i = 0; i < beta.rows(); ++i) {
    for (Eigen::Index j = 0; j < beta.cols(); ++j) out << (j ? "," : "") << beta(i, j);
    out << "\n";
  }
}

int exit_code_for(ErrorKind kind) {
  return kind == ErrorKind::SolverFailure ? kExitSolver : kExitValidation;
}

const char* category_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SolverFailure: return "SolverFailure";
    case ErrorKind::ParseError: return "ParseError";
    default: return "ValidationError";
  }
}

int dispatch(const Job& job) {
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  };
  try {
    Output out(job.output);
    if (job.command == "matrix") {
      run_matrix(job, out.stream());
      return kExitOk;
    }
    json report;
    bool passed = true;
    if (job.command == "bures") report = run_bures(job);
    else if (job.command == "cbnorm") report = run_cbnorm(job);
    else if (job.command == "bounds") report = run_bounds(job);
    else if (job.command == "rigidity") report = run_rigidity(job);
    else if (job.command == "verify") report = run_verify(job);
    else report = run_suite(job, passed);
    report["elapsed_ms"] = elapsed();
    out.stream() << cpbures::dump_json(report) << "\n";
    return passed ? kExitOk : kExitSuiteFailed;
  } catch (const Error& e) {
    json report = base_report(job);
    report["error"] = {{"category", category_for(e.kind())},
                       {"kind", cpbures::to_string(e.kind())},
                       {"message", e.detail()}};
    report["elapsed_ms"] = elapsed();
    std::cerr << category_for(e.kind()) << ": " << e.what() << "\n";
    std::cout << cpbures::dump_json(report) << "\n";
    return exit_code_for(e.kind());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bures distance between completely positive maps on matrix algebras"};
  app.require_subcommand(1);
  Job job;

  auto common = [&job](CLI::App* sub) {
    sub->add_option("--tol", job.tol, "Solver tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--seed", job.seed, "Random seed");
    sub->add_option("--output", job.output, "Write the report here instead of stdout");
    sub->add_option("--formulation", job.formulation, "Bures formulation")
        ->check(CLI::IsMember({"intertwiner", "extension", "auto"}));
  };

  struct Command {
    const char* name;
    const char* help;
    const char* files;
  };
  const Command commands[] = {
      {"bures", "Bures distance between two maps", "A.json B.json"},
      {"cbnorm", "cb norm of the difference of two maps", "A.json B.json"},
      {"bounds", "Bures distance against its cb-norm bounds", "A.json B.json"},
      {"rigidity", "Decompose phi(b) = c* b c + psi(b) near the identity", "A.json"},
      {"verify", "Parse and validate a map file", "A.json"},
      {"matrix", "CSV of pairwise Bures distances", "files..."},
  };
  for (const Command& s : commands) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("files", job.inputs, s.files)->required();
    common(sub);
    if (std::string(s.name) == "matrix") {
      sub->add_flag("--serial", job.serial, "Solve the pairs one after another");
    }
  }
  CLI::App* suite = app.add_subcommand("suite", "Randomized metric and bound property suites");
  suite->add_option("--trials", job.trials, "Trials per suite")->check(CLI::NonNegativeNumber);
  suite->add_option("--dim", job.dim, "Matrix size of the random maps")->check(CLI::Range(1, 4));
  common(suite);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }
  job.command = app.get_subcommands().front()->get_name();
  return dispatch(job);
}
