#include "cpbures/schur.hpp"

namespace cpbures::sdp {
namespace {

double block_pair_term(const BlockEntries& fi, const BlockEntries& fj, const RMat& x,
                       const RMat& s_inv) {
  double acc = 0.0;
  for (const Entry& a : fi.entries) {
    for (const Entry& c : fj.entries) {
      acc += a.value * c.value * x(a.col, c.row) * s_inv(c.col, a.row);
    }
  }
  return acc;
}

double schur_entry(const SparseBlockMatrix& fi, const SparseBlockMatrix& fj, const BlockMatrix& x,
                   const BlockMatrix& s_inv) {
  double acc = 0.0;
  auto it = fi.begin();
  auto jt = fj.begin();
  while (it != fi.end() && jt != fj.end()) {
    if (it->block < jt->block) {
      ++it;
    } else if (jt->block < it->block) {
      ++jt;
    } else {
      acc += block_pair_term(*it, *jt, x[it->block], s_inv[it->block]);
      ++it;
      ++jt;
    }
  }
  return acc;
}

}  // namespace

RMat schur_complement_serial(const std::vector<SparseBlockMatrix>& coefficients,
                             const BlockMatrix& x, const BlockMatrix& s_inv) {
  const auto n = static_cast<Eigen::Index>(coefficients.size());
  RMat m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      m(i, j) = schur_entry(coefficients[i], coefficients[j], x, s_inv);
      m(j, i) = m(i, j);
    }
  }
  return m;
}

RMat schur_complement_parallel(const std::vector<SparseBlockMatrix>& coefficients,
                               const BlockMatrix& x, const BlockMatrix& s_inv) {
  const auto n = static_cast<Eigen::Index>(coefficients.size());
  RMat m(n, n);
  // Row lengths shrink with i, so rows are handed out dynamically.
#pragma omp parallel for schedule(dynamic, 4)
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      m(i, j) = schur_entry(coefficients[i], coefficients[j], x, s_inv);
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) m(i, j) = m(j, i);
  }
  return m;
}

RVec inner_products(const std::vector<SparseBlockMatrix>& coefficients, const BlockMatrix& w) {
  RVec out(static_cast<Eigen::Index>(coefficients.size()));
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    double acc = 0.0;
    for (const BlockEntries& be : coefficients[i]) {
      const RMat& wb = w[be.block];
      for (const Entry& e : be.entries) acc += e.value * wb(e.row, e.col);
    }
    out(static_cast<Eigen::Index>(i)) = acc;
  }
  return out;
}

}  // namespace cpbures::sdp
