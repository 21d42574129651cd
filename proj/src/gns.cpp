#include "cpbures/gns.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cpbures {

CMat inner(const Stack& x, const Stack& y) {
  if (x.size() != y.size() || x.blocks.empty()) {
    throw Error(ErrorKind::DimensionMismatch, "stacks have different lengths");
  }
  CMat out = x.blocks[0].adjoint() * y.blocks[0];
  for (Eigen::Index i = 1; i < x.size(); ++i) out += x.blocks[i].adjoint() * y.blocks[i];
  return out;
}

double norm(const Stack& x) { return std::sqrt(op_norm(inner(x, x))); }

Stack act(const CMat& a, const Stack& x, const CMat& b) {
  Stack out;
  out.blocks.reserve(x.blocks.size());
  for (const CMat& k : x.blocks) out.blocks.push_back(a * k * b);
  return out;
}

Stack operator-(const Stack& x, const Stack& y) {
  if (x.size() != y.size()) throw Error(ErrorKind::DimensionMismatch, "stacks have different lengths");
  Stack out = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) out.blocks[i] -= y.blocks[i];
  return out;
}

Stack mix(const CMat& c, const Stack& x) {
  if (c.cols() != x.size() || x.blocks.empty()) {
    throw Error(ErrorKind::DimensionMismatch, "mixing matrix does not match the stack length");
  }
  Stack out;
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    CMat acc = CMat::Zero(x.blocks[0].rows(), x.blocks[0].cols());
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      if (c(i, j) != cplx(0.0)) acc += c(i, j) * x.blocks[j];
    }
    out.blocks.push_back(std::move(acc));
  }
  return out;
}

Stack direct_sum(const Stack& x, const Stack& y) {
  Stack out = x;
  out.blocks.insert(out.blocks.end(), y.blocks.begin(), y.blocks.end());
  return out;
}

Stack zero_stack(Eigen::Index r, Eigen::Index n, Eigen::Index m) {
  return Stack{std::vector<CMat>(static_cast<std::size_t>(r), CMat::Zero(n, m))};
}

CMat GnsModule::represent(const CMat& a) const {
  return inner(cyclic, act(a, cyclic, CMat::Identity(m, m)));
}

GnsModule build_gns(const CpMap& phi) { return build_gns(phi.kraus()); }

GnsModule build_gns(const KrausSet& ks) {
  ks.validate();
  GnsModule g;
  g.n = ks.dim_in;
  g.m = ks.dim_out;
  g.cyclic.blocks = ks.blocks;
  return g;
}

Intertwiner::Intertwiner(CMat c) : c_(std::move(c)) {
  const double nrm = op_norm(c_);
  if (nrm > 1.0 + 1e-9) {
    std::ostringstream os;
    os << "||C|| = " << nrm;
    throw Error(ErrorKind::NotContraction, os.str());
  }
}

namespace {

void require_compatible(const GnsModule& g1, const GnsModule& g2, const Intertwiner& c) {
  if (g1.n != g2.n || g1.m != g2.m) {
    throw Error(ErrorKind::DimensionMismatch, "modules are over different algebras");
  }
  if (c.matrix().rows() != g1.rank() || c.matrix().cols() != g2.rank()) {
    std::ostringstream os;
    os << "intertwiner is " << c.matrix().rows() << "x" << c.matrix().cols() << ", modules have ranks "
       << g1.rank() << " and " << g2.rank();
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
}

CVec vectorize(const Stack& x) {
  Eigen::Index total = 0;
  for (const CMat& b : x.blocks) total += b.size();
  CVec v(total);
  Eigen::Index k = 0;
  for (const CMat& b : x.blocks) {
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
      for (Eigen::Index j = 0; j < b.cols(); ++j) v(k++) = b(i, j);
    }
  }
  return v;
}

Stack unvectorize(const CVec& v, Eigen::Index r, Eigen::Index n, Eigen::Index m) {
  Stack x = zero_stack(r, n, m);
  Eigen::Index k = 0;
  for (CMat& b : x.blocks) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) b(i, j) = v(k++);
    }
  }
  return x;
}

}  // namespace

CMat pairing(const GnsModule& g1, const GnsModule& g2, const Intertwiner& c) {
  require_compatible(g1, g2, c);
  return inner(g1.cyclic, mix(c.matrix(), g2.cyclic));
}

std::pair<Stack, Stack> defect_embed(const GnsModule& g1, const GnsModule& g2,
                                     const Intertwiner& c) {
  require_compatible(g1, g2, c);
  const CMat& cm = c.matrix();
  const Eigen::Index r2 = g2.rank();
  const CMat defect = psd_sqrt(hermitian_part(CMat::Identity(r2, r2) - cm.adjoint() * cm));

  Stack z1 = direct_sum(g1.cyclic, zero_stack(r2, g1.n, g1.m));
  Stack z2 = direct_sum(mix(cm, g2.cyclic), mix(defect, g2.cyclic));

  const CMat id_m = CMat::Identity(g2.m, g2.m);
  const double scale = std::max(1.0, op_norm(inner(g2.cyclic, g2.cyclic)));
  for (Eigen::Index p = 0; p < g2.n; ++p) {
    for (Eigen::Index q = 0; q < g2.n; ++q) {
      const CMat e = matrix_unit(g2.n, g2.n, p, q);
      const double err = op_norm(inner(z2, act(e, z2, id_m)) - g2.represent(e));
      if (err > 1e-9 * scale) {
        std::ostringstream os;
        os << "defect embedding does not represent phi2 (error " << err << ")";
        throw Error(ErrorKind::NotContraction, os.str());
      }
    }
  }
  return {std::move(z1), std::move(z2)};
}

GnsModule minimal_basis(const GnsModule& g) {
  const Eigen::Index n = g.n, m = g.m, r = g.rank();
  std::vector<CVec> basis;
  const double x_scale = std::max(1.0, vectorize(g.cyclic).norm());
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index q = 0; q < n; ++q) {
      const CMat left = matrix_unit(n, n, p, q);
      for (Eigen::Index s = 0; s < m; ++s) {
        for (Eigen::Index t = 0; t < m; ++t) {
          CVec v = vectorize(act(left, g.cyclic, matrix_unit(m, m, s, t)));
          // two passes of modified Gram-Schmidt
          for (int pass = 0; pass < 2; ++pass) {
            for (const CVec& b : basis) v -= b.dot(v) * b;
          }
          const double nv = v.norm();
          if (nv > kBasisDropTol * x_scale) basis.push_back(v / nv);
        }
      }
    }
  }
  GnsModule out = g;
  std::vector<Stack> stacks;
  stacks.reserve(basis.size());
  for (const CVec& b : basis) stacks.push_back(unvectorize(b, r, n, m));
  out.minimal_basis = std::move(stacks);
  out.is_minimal = true;
  return out;
}

std::optional<Stack> center_unit_vector(const GnsModule& g) {
  if (g.n != g.m) throw Error(ErrorKind::NonSquare, "center requires A = B");
  const GnsModule gm = g.minimal_basis ? g : minimal_basis(g);
  const std::vector<Stack>& basis = *gm.minimal_basis;
  const Eigen::Index n = g.n, r = g.rank();
  const auto k = static_cast<Eigen::Index>(basis.size());
  if (k == 0) return std::nullopt;

  // Column j: vec(b B_j - B_j b) stacked over the matrix units b = E_pq.
  const Eigen::Index block_len = r * n * n;
  CMat system(n * n * block_len, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = 0; q < n; ++q) {
        const CMat e = matrix_unit(n, n, p, q);
        const CMat id = CMat::Identity(n, n);
        const Stack comm = act(e, basis[j], id) - act(id, basis[j], e);
        system.block((p * n + q) * block_len, j, block_len, 1) = vectorize(comm);
      }
    }
  }
  Eigen::JacobiSVD<CMat> svd(system, Eigen::ComputeFullV);
  const RVec& sv = svd.singularValues();
  const double smax = std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  // Null space: right singular vectors with singular value below the cutoff,
  // plus any columns beyond the row count.
  Eigen::Index null_col = -1;
  for (Eigen::Index c = 0; c < k; ++c) {
    const double s = c < sv.size() ? sv(c) : 0.0;
    if (s <= kCenterCutoff * smax) {
      null_col = c;
      break;
    }
  }
  if (null_col < 0) return std::nullopt;

  const CVec alpha = svd.matrixV().col(null_col);
  Stack y = zero_stack(r, n, n);
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < r; ++i) y.blocks[i] += alpha(j) * basis[j].blocks[i];
  }
  const CMat gram = inner(y, y);
  const double lambda = gram.trace().real() / static_cast<double>(n);
  const double dev = op_norm(gram - lambda * CMat::Identity(n, n));
  if (!(lambda > 0.0) || dev > 1e-8 * std::max(1.0, lambda)) {
    std::ostringstream os;
    os << "central vector has Gram deviating from a scalar by " << dev;
    throw Error(ErrorKind::CenterNotScalarGram, os.str());
  }
  for (CMat& b : y.blocks) b /= std::sqrt(lambda);
  return y;
}

}  // namespace cpbures
