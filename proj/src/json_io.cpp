#include "cpbures/json_io.hpp"

#include <fstream>
#include <optional>
#include <sstream>

namespace cpbures {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

cplx scalar_from_json(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    fail("complex entries must be [re, im] pairs of numbers");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

// Reads `j` as a list of dim_in x dim_out matrices, or returns nothing when
// the shape does not fit.
std::optional<std::vector<CMat>> blocks_from_json(const nlohmann::json& j, Eigen::Index n, Eigen::Index m) {
  if (!j.is_array() || j.empty()) return std::nullopt;
  std::vector<CMat> blocks;
  try {
    for (const auto& b : j) blocks.push_back(matrix_from_json(b));
  } catch (const Error&) {
    return std::nullopt;
  }
  for (const CMat& b : blocks) {
    if (b.rows() != n || b.cols() != m) return std::nullopt;
  }
  return blocks;
}

Eigen::Index get_dim(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) fail(std::string("missing \"") + key + "\"");
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() <= 0) {
    fail(std::string("\"") + key + "\" must be a positive integer");
  }
  return static_cast<Eigen::Index>(v.get<long long>());
}

}  // namespace

nlohmann::json matrix_to_json(const CMat& a) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < a.cols(); ++c) row.push_back({a(r, c).real(), a(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

CMat matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) fail("a matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array() || j[0].empty()) fail("matrix rows must be non-empty arrays");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  CMat a(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) fail("matrix rows differ in length");
    for (Eigen::Index c = 0; c < cols; ++c) a(r, c) = scalar_from_json(row[static_cast<std::size_t>(c)]);
  }
  return a;
}

CpMap cpmap_from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail("a CP map must be a JSON object");
  const bool has_kraus = j.contains("kraus");
  const bool has_choi = j.contains("choi");
  if (has_kraus == has_choi) fail("exactly one of \"kraus\" and \"choi\" must be present");
  const Eigen::Index n = get_dim(j, "dim_in");
  const Eigen::Index m = get_dim(j, "dim_out");

  if (has_choi) return CpMap::from_choi(n, m, matrix_from_json(j.at("choi")));

  const auto& kj = j.at("kraus");
  KrausSet ks{n, m, {}};
  // Nesting depth alone cannot tell a list of real matrices from one matrix
  // of [re, im] pairs, so the declared dimensions decide.
  if (auto list = blocks_from_json(kj, n, m)) {
    ks.blocks = std::move(*list);
  } else if (auto single = blocks_from_json(nlohmann::json::array({kj}), n, m)) {
    ks.blocks = std::move(*single);
  } else {
    fail("\"kraus\" must be a list of " + std::to_string(n) + " x " + std::to_string(m) + " matrices");
  }
  return CpMap::from_kraus(ks);
}

nlohmann::json cpmap_to_json(const CpMap& phi, MapEncoding encoding) {
  nlohmann::json j;
  j["dim_in"] = phi.dim_in();
  j["dim_out"] = phi.dim_out();
  if (encoding == MapEncoding::Choi) {
    j["choi"] = matrix_to_json(phi.choi());
  } else {
    nlohmann::json blocks = nlohmann::json::array();
    for (const CMat& k : phi.kraus().blocks) blocks.push_back(matrix_to_json(k));
    j["kraus"] = std::move(blocks);
  }
  return j;
}

CpMap read_cpmap(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail(path.string() + ": " + e.what());
  }
  try {
    return cpmap_from_json(j);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.detail());
  }
}

void write_cpmap(const std::filesystem::path& path, const CpMap& phi, MapEncoding encoding) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::ValidationError, "cannot write " + path.string());
  out << dump_json(cpmap_to_json(phi, encoding)) << "\n";
}

std::string dump_json(const nlohmann::json& j, int indent) {
  // nlohmann emits the shortest decimal string that parses back to the same
  // double, which never needs more than 17 significant digits.
  return j.dump(indent);
}

}  // namespace cpbures
