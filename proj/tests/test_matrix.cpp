#include <doctest.h>

#include "cpbures/matrix.hpp"
#include "cpbures/random.hpp"

using namespace cpbures;

TEST_CASE("herm_eig reconstructs the input with ascending eigenvalues") {
  Rng rng(1);
  const CMat h = random_hermitian(rng, 4);
  const HermEig e = herm_eig(h);
  for (Eigen::Index k = 1; k < e.values.size(); ++k) CHECK(e.values(k - 1) <= e.values(k));
  const CMat back = e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint();
  CHECK((back - h).norm() < 1e-12);
  CHECK((e.vectors.adjoint() * e.vectors - CMat::Identity(4, 4)).norm() < 1e-12);
}

TEST_CASE("herm_eig fixes the phase of each eigenvector") {
  Rng rng(2);
  const HermEig e = herm_eig(random_hermitian(rng, 3));
  for (Eigen::Index c = 0; c < 3; ++c) {
    Eigen::Index idx = 0;
    e.vectors.col(c).cwiseAbs().maxCoeff(&idx);
    CHECK(e.vectors(idx, c).imag() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(e.vectors(idx, c).real() > 0.0);
  }
}

TEST_CASE("require_hermitian rejects non-square and non-Hermitian input") {
  CMat rect = CMat::Zero(2, 3);
  CHECK_THROWS_AS(require_hermitian(rect), Error);
  CMat a(2, 2);
  a << 1.0, 2.0, 0.0, 1.0;
  try {
    require_hermitian(a);
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonHermitian);
  }
  a(1, 0) = 2.0 + 1e-13;
  CHECK_NOTHROW(require_hermitian(a));
}

TEST_CASE("op_norm and min_singular_value of a diagonal matrix") {
  CMat d = CMat::Zero(3, 3);
  d.diagonal() << 3.0, -0.5, cplx(0.0, 2.0);
  CHECK(op_norm(d) == doctest::Approx(3.0));
  CHECK(min_singular_value(d) == doctest::Approx(0.5));
  CHECK(min_singular_value(CMat::Zero(2, 2)) == 0.0);
}

TEST_CASE("psd_sqrt squares back and clamps tiny negative eigenvalues") {
  Rng rng(3);
  const CMat g = random_complex(rng, 3, 3);
  const CMat p = g * g.adjoint();
  const CMat r = psd_sqrt(p);
  CHECK((r * r - p).norm() < 1e-10);
  CMat nearly = CMat::Zero(2, 2);
  nearly(0, 0) = 1.0;
  nearly(1, 1) = -1e-12;
  CHECK(psd_sqrt(nearly)(1, 1) == cplx(0.0));
  nearly(1, 1) = -0.1;
  CHECK_THROWS_AS(psd_sqrt(nearly), Error);
}

TEST_CASE("is_psd uses a relative tolerance") {
  CMat h = CMat::Zero(2, 2);
  h(0, 0) = 100.0;
  h(1, 1) = -1e-8;
  CHECK(is_psd(h, 1e-9));
  CHECK_FALSE(is_psd(h, 1e-12));
}

TEST_CASE("kron places the first factor outermost") {
  const CMat a = matrix_unit(2, 2, 0, 1);
  CMat b(2, 2);
  b << 1.0, 2.0, 3.0, 4.0;
  const CMat k = kron(a, b);
  CHECK(k.rows() == 4);
  CHECK(k.block(0, 2, 2, 2) == b);
  CHECK(k.block(0, 0, 2, 2).norm() == 0.0);
  CHECK(k.block(2, 0, 2, 2).norm() == 0.0);
}

TEST_CASE("real_embedding preserves the spectrum with doubled multiplicity") {
  Rng rng(4);
  const CMat h = random_hermitian(rng, 3);
  const RMat r = real_embedding(h);
  CHECK(r.rows() == 6);
  CHECK((r - r.transpose()).norm() < 1e-14);
  Eigen::SelfAdjointEigenSolver<RMat> es(r);
  const RVec lam = herm_eig(h).values;
  for (Eigen::Index k = 0; k < 3; ++k) {
    CHECK(es.eigenvalues()(2 * k) == doctest::Approx(lam(k)));
    CHECK(es.eigenvalues()(2 * k + 1) == doctest::Approx(lam(k)));
  }
}

TEST_CASE("all_finite spots NaN and infinity") {
  CMat a = CMat::Identity(2, 2);
  CHECK(all_finite(a));
  a(0, 1) = cplx(0.0, std::numeric_limits<double>::quiet_NaN());
  CHECK_FALSE(all_finite(a));
  a(0, 1) = std::numeric_limits<double>::infinity();
  CHECK_FALSE(all_finite(a));
}

TEST_CASE("error kinds have stable names") {
  CHECK(std::string(to_string(ErrorKind::NotPsd)) == "NotPsd");
  CHECK(std::string(to_string(ErrorKind::SolverFailure)) == "SolverFailure");
  const Error e(ErrorKind::ParseError, "bad input");
  CHECK(std::string(e.what()) == "ParseError: bad input");
  CHECK(e.detail() == "bad input");
}
