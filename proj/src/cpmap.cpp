#include "cpbures/cpmap.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cpbures/random.hpp"

namespace cpbures {

void KrausSet::validate() const {
  if (dim_in <= 0 || dim_out <= 0) {
    throw Error(ErrorKind::DimensionMismatch, "Kraus dimensions must be positive");
  }
  if (blocks.empty()) throw Error(ErrorKind::ZeroMap, "empty Kraus set");
  for (const CMat& k : blocks) {
    if (k.rows() != dim_in || k.cols() != dim_out) {
      std::ostringstream os;
      os << "Kraus block is " << k.rows() << "x" << k.cols() << ", expected " << dim_in << "x"
         << dim_out;
      throw Error(ErrorKind::DimensionMismatch, os.str());
    }
  }
}

CMat choi_from_kraus(const KrausSet& ks) {
  ks.validate();
  const Eigen::Index n = ks.dim_in, m = ks.dim_out;
  CMat w(n * m, ks.rank());
  for (Eigen::Index k = 0; k < ks.rank(); ++k) {
    const CMat kad = ks.blocks[k].adjoint();  // m x n, column i is the i-th block of w_k
    for (Eigen::Index i = 0; i < n; ++i) w.block(i * m, k, m, 1) = kad.col(i);
  }
  return w * w.adjoint();
}

KrausSet kraus_from_choi(const CMat& choi, Eigen::Index dim_in, Eigen::Index dim_out, double tol) {
  const Eigen::Index n = dim_in, m = dim_out;
  if (choi.rows() != n * m || choi.cols() != n * m) {
    throw Error(ErrorKind::DimensionMismatch, "Choi matrix size differs from dim_in * dim_out");
  }
  const HermEig e = herm_eig(choi);
  const double lmax = e.values(e.values.size() - 1);
  if (!(lmax > 0.0)) throw Error(ErrorKind::ZeroMap, "Choi matrix has no positive eigenvalue");
  if (e.values(0) < -kChoiPsdTol * std::max(1.0, lmax)) {
    std::ostringstream os;
    os << "Choi matrix has eigenvalue " << e.values(0);
    throw Error(ErrorKind::NotPsd, os.str());
  }
  KrausSet ks{n, m, {}};
  for (Eigen::Index c = e.values.size() - 1; c >= 0; --c) {
    if (e.values(c) <= tol * lmax) break;
    const CVec w = std::sqrt(e.values(c)) * e.vectors.col(c);
    CMat k(n, m);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index s = 0; s < m; ++s) k(i, s) = std::conj(w(i * m + s));
    }
    ks.blocks.push_back(std::move(k));
  }
  return ks;
}

CpMap CpMap::from_kraus(const KrausSet& ks, double rank_tol) {
  ks.validate();
  return from_choi(ks.dim_in, ks.dim_out, choi_from_kraus(ks), rank_tol);
}

CpMap CpMap::from_choi(Eigen::Index dim_in, Eigen::Index dim_out, const CMat& choi,
                       double rank_tol) {
  if (dim_in <= 0 || dim_out <= 0) {
    throw Error(ErrorKind::DimensionMismatch, "dimensions must be positive");
  }
  if (choi.rows() != dim_in * dim_out || choi.cols() != dim_in * dim_out) {
    std::ostringstream os;
    os << "Choi matrix is " << choi.rows() << "x" << choi.cols() << ", expected "
       << dim_in * dim_out << " square";
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
  if (!all_finite(choi)) throw Error(ErrorKind::ValidationError, "Choi matrix has non-finite entries");
  require_hermitian(choi);
  CMat j = hermitian_part(choi);
  if (op_norm(j) <= 1e-14) throw Error(ErrorKind::ZeroMap, "the zero map is not admissible");
  KrausSet ks = kraus_from_choi(j, dim_in, dim_out, rank_tol);
  return CpMap(dim_in, dim_out, std::move(j), std::move(ks));
}

CMat apply(const CpMap& phi, const CMat& a) {
  if (a.rows() != phi.dim_in() || a.cols() != phi.dim_in()) {
    throw Error(ErrorKind::DimensionMismatch, "argument size differs from the input algebra");
  }
  CMat out = CMat::Zero(phi.dim_out(), phi.dim_out());
  for (const CMat& k : phi.kraus().blocks) out += k.adjoint() * a * k;
  return out;
}

CMat apply_choi(const CMat& choi, Eigen::Index dim_in, Eigen::Index dim_out, const CMat& a) {
  if (a.rows() != dim_in || a.cols() != dim_in || choi.rows() != dim_in * dim_out) {
    throw Error(ErrorKind::DimensionMismatch, "argument size differs from the input algebra");
  }
  CMat out = CMat::Zero(dim_out, dim_out);
  for (Eigen::Index i = 0; i < dim_in; ++i) {
    for (Eigen::Index j = 0; j < dim_in; ++j) {
      if (a(i, j) != cplx(0.0)) out += a(i, j) * choi.block(i * dim_out, j * dim_out, dim_out, dim_out);
    }
  }
  return out;
}

CpMap compose(const CpMap& psi, const CpMap& phi) {
  if (phi.dim_out() != psi.dim_in()) {
    throw Error(ErrorKind::DimensionMismatch, "psi's input algebra differs from phi's output");
  }
  KrausSet ks{phi.dim_in(), psi.dim_out(), {}};
  for (const CMat& k : phi.kraus().blocks) {
    for (const CMat& l : psi.kraus().blocks) ks.blocks.push_back(k * l);
  }
  return CpMap::from_kraus(ks);
}

CpMap amplify(const CpMap& phi, Eigen::Index k) {
  if (k < 1) throw Error(ErrorKind::DimensionMismatch, "ampliation factor must be positive");
  if (k == 1) return phi;
  const CMat id = CMat::Identity(k, k);
  KrausSet ks{k * phi.dim_in(), k * phi.dim_out(), {}};
  for (const CMat& block : phi.kraus().blocks) ks.blocks.push_back(kron(id, block));
  return CpMap::from_kraus(ks);
}

CMat amplify_choi(const CMat& choi, Eigen::Index dim_in, Eigen::Index dim_out, Eigen::Index k) {
  const Eigen::Index n = dim_in, m = dim_out;
  const Eigen::Index out_dim = k * m;
  CMat jk = CMat::Zero(k * n * out_dim, k * n * out_dim);
  // row ((s,i),(u,a)) with u = s, column ((t,j),(v,b)) with v = t
  for (Eigen::Index s = 0; s < k; ++s) {
    for (Eigen::Index t = 0; t < k; ++t) {
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
          const Eigen::Index row = (s * n + i) * out_dim + s * m;
          const Eigen::Index col = (t * n + j) * out_dim + t * m;
          jk.block(row, col, m, m) = choi.block(i * m, j * m, m, m);
        }
      }
    }
  }
  return jk;
}

CpMap add(const CpMap& a, const CpMap& b) {
  if (a.dim_in() != b.dim_in() || a.dim_out() != b.dim_out()) {
    throw Error(ErrorKind::DimensionMismatch, "maps act between different algebras");
  }
  return CpMap::from_choi(a.dim_in(), a.dim_out(), a.choi() + b.choi());
}

CpMap scale(const CpMap& phi, double factor) {
  if (!(factor > 0.0)) throw Error(ErrorKind::ZeroMap, "scale factor must be positive");
  return CpMap::from_choi(phi.dim_in(), phi.dim_out(), factor * phi.choi());
}

CMat unit_image(const CMat& choi, Eigen::Index dim_in, Eigen::Index dim_out) {
  CMat out = CMat::Zero(dim_out, dim_out);
  for (Eigen::Index i = 0; i < dim_in; ++i) out += choi.block(i * dim_out, i * dim_out, dim_out, dim_out);
  return out;
}

double cp_norm(const CpMap& phi) {
  return op_norm(unit_image(phi.choi(), phi.dim_in(), phi.dim_out()));
}

CMat difference_choi(const CpMap& phi1, const CpMap& phi2) {
  if (phi1.dim_in() != phi2.dim_in() || phi1.dim_out() != phi2.dim_out()) {
    throw Error(ErrorKind::DimensionMismatch, "maps act between different algebras");
  }
  return phi1.choi() - phi2.choi();
}

CbNormResult cb_norm(const CMat& choi, Eigen::Index dim_in, Eigen::Index dim_out, double tol) {
  const Eigen::Index n = dim_in, m = dim_out, d = n * m;
  if (choi.rows() != d || choi.cols() != d) {
    throw Error(ErrorKind::DimensionMismatch, "Choi matrix size differs from dim_in * dim_out");
  }
  require_hermitian(choi, 1e-9);
  const CMat j = hermitian_part(choi);
  const double jn = op_norm(j);
  if (jn == 0.0) {
    sdp::SolveReport exact;
    exact.status = sdp::SolveStatus::Converged;
    return {0.0, exact};
  }

  // Solve for the normalized map so the solver sees O(1) data.
  sdp::LmiBuilder lmi;
  const int t = lmi.add_variable(1.0);
  const int big = lmi.add_complex_block(static_cast<int>(2 * d));
  const int unit1 = lmi.add_complex_block(static_cast<int>(m));
  const int unit2 = lmi.add_complex_block(static_cast<int>(m));
  CMat f0 = CMat::Zero(2 * d, 2 * d);
  f0.topRightCorner(d, d) = j / jn;
  f0.bottomLeftCorner(d, d) = j.adjoint() / jn;
  lmi.set_constant(big, f0);
  lmi.add_coefficient(t, unit1, CMat::Identity(m, m));
  lmi.add_coefficient(t, unit2, CMat::Identity(m, m));

  for (int side = 0; side < 2; ++side) {
    const int offset = side == 0 ? 0 : static_cast<int>(d);
    const int unit = side == 0 ? unit1 : unit2;
    for (Eigen::Index p = 0; p < d; ++p) {
      for (Eigen::Index q = p; q < d; ++q) {
        const bool same_input = (p / m) == (q / m);
        const int ps = static_cast<int>(p % m), qs = static_cast<int>(q % m);
        const int re = lmi.add_variable(0.0);
        lmi.add_coefficient_entry(re, big, offset + static_cast<int>(p), offset + static_cast<int>(q), 1.0);
        if (same_input) lmi.add_coefficient_entry(re, unit, ps, qs, -1.0);
        if (p == q) continue;
        const int im = lmi.add_variable(0.0);
        lmi.add_coefficient_entry(im, big, offset + static_cast<int>(p), offset + static_cast<int>(q), cplx(0.0, 1.0));
        if (same_input) lmi.add_coefficient_entry(im, unit, ps, qs, cplx(0.0, -1.0));
      }
    }
  }

  sdp::SolverOptions opt;
  opt.tol = tol;
  sdp::SolveReport rep = sdp::solve_sdp(lmi.build(), opt);
  if (rep.status != sdp::SolveStatus::Converged) {
    std::ostringstream os;
    os << "cb-norm SDP ended with status " << sdp::to_string(rep.status) << " after "
       << rep.iterations << " iterations (gap " << rep.gap << ")";
    throw Error(ErrorKind::SolverFailure, os.str());
  }
  const double value = rep.value * jn;
  rep.value *= jn;
  rep.lower_bound *= jn;
  rep.gap *= jn;
  return {value, std::move(rep)};
}

double level1_norm_sampled(const CMat& choi, Eigen::Index dim_in, Eigen::Index dim_out,
                           int samples, std::uint64_t seed) {
  Rng rng(seed);
  double best = op_norm(apply_choi(choi, dim_in, dim_out, CMat::Identity(dim_in, dim_in)));
  for (int k = 0; k < samples; ++k) {
    const CMat u = random_unitary(rng, dim_in);
    best = std::max(best, op_norm(apply_choi(choi, dim_in, dim_out, u)));
  }
  return best;
}

}  // namespace cpbures
