#include <doctest.h>

#include "cpbures/cpmap.hpp"
#include "cpbures/random.hpp"
#include "oracles.hpp"
#include "worked_examples.hpp"

using namespace cpbures;
using worked::m2;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::ValidationError;
}

CMat transpose_choi(Eigen::Index n) {
  CMat j = CMat::Zero(n * n, n * n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) j.block(a * n, b * n, n, n) = matrix_unit(n, n, b, a);
  }
  return j;
}

}  // namespace

TEST_CASE("choi_from_kraus matches the defining sum") {
  Rng rng(10);
  const KrausSet ks{2, 3, {random_complex(rng, 2, 3), random_complex(rng, 2, 3)}};
  CHECK((choi_from_kraus(ks) - oracle::choi_by_definition(ks.blocks)).norm() < 1e-12);
}

TEST_CASE("kraus_from_choi returns a minimal set of the same map") {
  Rng rng(11);
  const CpMap phi = random_cpmap(rng, 2, 2, 6);
  CHECK(phi.kraus().rank() == 4);
  CHECK((choi_from_kraus(phi.kraus()) - phi.choi()).norm() < 1e-10);
  const CpMap low = random_cpmap(rng, 3, 2, 2);
  CHECK(low.kraus().rank() == 2);
}

TEST_CASE("transpose-gap maps evaluate as stated") {
  const auto [phi1, phi2] = worked::transpose_gap();
  CHECK((cpbures::apply(phi2, m2(1, 2, 3, 4)) - m2(8, 0, 0, 2)).norm() < 1e-12);
  CHECK((cpbures::apply(phi1, m2(1, 0, 0, 0)) - m2(1, 0, 0, 2)).norm() < 1e-12);
  CHECK((cpbures::apply(phi1, m2(1, 2, 3, 4)) - m2(9, 3, 2, 6)).norm() < 1e-12);
  CHECK(cp_norm(phi1) == doctest::Approx(3.0));
  CHECK(phi1.kraus().rank() == 4);
  CHECK(phi2.kraus().rank() == 2);
  // The difference is the transpose map.
  CHECK((difference_choi(phi1, phi2) - transpose_choi(2)).norm() < 1e-12);
}

TEST_CASE("apply_choi agrees with the Kraus form") {
  Rng rng(12);
  const CpMap phi = random_cpmap(rng, 3, 2, 2);
  const CMat a = random_complex(rng, 3, 3);
  CHECK((apply_choi(phi.choi(), 3, 2, a) - cpbures::apply(phi, a)).norm() < 1e-10);
}

TEST_CASE("construction errors") {
  CHECK(kind_of([] { CpMap::from_kraus(KrausSet{2, 2, {}}); }) == ErrorKind::ZeroMap);
  CHECK(kind_of([] { CpMap::from_kraus(KrausSet{2, 2, {CMat::Zero(2, 3)}}); }) ==
        ErrorKind::DimensionMismatch);
  CHECK(kind_of([] { CpMap::from_kraus(KrausSet{2, 2, {CMat::Zero(2, 2)}}); }) == ErrorKind::ZeroMap);
  CMat neg = CMat::Identity(4, 4);
  neg(3, 3) = -0.1;
  CHECK(kind_of([&] { CpMap::from_choi(2, 2, neg); }) == ErrorKind::NotPsd);
  CMat skew = CMat::Identity(4, 4);
  skew(0, 1) = 1.0;
  CHECK(kind_of([&] { CpMap::from_choi(2, 2, skew); }) == ErrorKind::NonHermitian);
  CHECK(kind_of([] { CpMap::from_choi(2, 2, CMat::Identity(3, 3)); }) == ErrorKind::DimensionMismatch);
  CMat bad = CMat::Identity(4, 4);
  bad(2, 2) = std::numeric_limits<double>::quiet_NaN();
  CHECK(kind_of([&] { CpMap::from_choi(2, 2, bad); }) == ErrorKind::ValidationError);
}

TEST_CASE("compose, amplify, add and scale follow their definitions") {
  Rng rng(13);
  const CpMap phi = random_cpmap(rng, 2, 3, 2);
  const CpMap psi = random_cpmap(rng, 3, 2, 2);
  const CMat a = random_hermitian(rng, 2);
  CHECK((cpbures::apply(compose(psi, phi), a) - cpbures::apply(psi, cpbures::apply(phi, a))).norm() < 1e-9);
  CHECK((cpbures::apply(add(phi, phi), a) - 2.0 * cpbures::apply(phi, a)).norm() < 1e-9);
  CHECK((cpbures::apply(scale(phi, 0.25), a) - 0.25 * cpbures::apply(phi, a)).norm() < 1e-10);

  const CpMap phi2 = amplify(phi, 2);
  CHECK(phi2.dim_in() == 4);
  CHECK(phi2.dim_out() == 6);
  const CMat big = random_hermitian(rng, 4);
  const CMat out = cpbures::apply(phi2, big);
  for (int s = 0; s < 2; ++s) {
    for (int t = 0; t < 2; ++t) {
      CHECK((out.block(3 * s, 3 * t, 3, 3) - cpbures::apply(phi, big.block(2 * s, 2 * t, 2, 2))).norm() < 1e-9);
    }
  }
  CHECK((amplify_choi(phi.choi(), 2, 3, 2) - phi2.choi()).norm() < 1e-9);
}

TEST_CASE("unit_image is the partial trace over the input") {
  Rng rng(14);
  const CpMap phi = random_cpmap(rng, 3, 2, 3);
  CHECK((unit_image(phi.choi(), 3, 2) - cpbures::apply(phi, CMat::Identity(3, 3))).norm() < 1e-10);
}

TEST_CASE("cb norm of the transpose map is the matrix size") {
  CHECK(cb_norm(transpose_choi(2), 2, 2).value == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(cb_norm(transpose_choi(3), 3, 3).value == doctest::Approx(3.0).epsilon(1e-7));
}

TEST_CASE("cb norm of a CP map is its norm") {
  Rng rng(15);
  for (int k = 0; k < 3; ++k) {
    const CpMap phi = random_cpmap(rng, 2, 3, 1 + k);
    CHECK(cb_norm(phi.choi(), 2, 3).value == doctest::Approx(cp_norm(phi)).epsilon(1e-6));
  }
}

TEST_CASE("cb norm is stable under ampliation") {
  Rng rng(16);
  const CpMap a = random_cpmap(rng, 2, 2, 2), b = random_cpmap(rng, 2, 2, 2);
  const double one = cb_norm(difference_choi(a, b), 2, 2).value;
  const double two = cb_norm(amplify_choi(difference_choi(a, b), 2, 2, 2), 4, 4).value;
  CHECK(std::abs(one - two) <= 1e-5 * std::max(1.0, one));
}

TEST_CASE("sampled level-one norm of the transpose is one") {
  const double v = level1_norm_sampled(transpose_choi(2), 2, 2, 2000, 3);
  CHECK(v == doctest::Approx(1.0).epsilon(1e-3));
  const auto [phi1, phi2] = worked::transpose_gap();
  CHECK(level1_norm_sampled(difference_choi(phi1, phi2), 2, 2, 2000, 3) == doctest::Approx(1.0).epsilon(1e-3));
}
