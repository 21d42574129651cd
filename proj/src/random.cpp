#include "cpbures/random.hpp"

#include <cmath>

namespace cpbures {

CMat random_complex(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CMat out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double re = nd(rng);
      const double im = nd(rng);
      out(i, j) = cplx(re, im);
    }
  }
  return out;
}

CMat random_unitary(Rng& rng, Eigen::Index n) {
  const CMat g = random_complex(rng, n, n);
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ() * CMat::Identity(n, n);
  const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < n; ++k) {
    const cplx d = r(k, k);
    if (std::abs(d) > 0.0) q.col(k) *= d / std::abs(d);
  }
  return q;
}

CMat random_hermitian(Rng& rng, Eigen::Index n) {
  const CMat g = random_complex(rng, n, n);
  return 0.5 * (g + g.adjoint());
}

CpMap random_cpmap(Rng& rng, Eigen::Index dim_in, Eigen::Index dim_out, Eigen::Index rank) {
  KrausSet ks{dim_in, dim_out, {}};
  for (Eigen::Index k = 0; k < rank; ++k) ks.blocks.push_back(random_complex(rng, dim_in, dim_out));
  return CpMap::from_kraus(ks);
}

std::vector<double> random_probability(Rng& rng, std::size_t length) {
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  std::vector<double> p(length);
  double total = 0.0;
  for (double& v : p) {
    v = ud(rng);
    total += v;
  }
  for (double& v : p) v /= total;
  return p;
}

CMat random_density(Rng& rng, Eigen::Index n) {
  const CMat g = random_complex(rng, n, n);
  CMat rho = g * g.adjoint();
  return rho / rho.trace().real();
}

}  // namespace cpbures
