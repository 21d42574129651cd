#include <doctest.h>

#include "cpbures/gns.hpp"
#include "cpbures/random.hpp"
#include "worked_examples.hpp"

using namespace cpbures;
using worked::m2;

namespace {

CpMap identity(Eigen::Index n) { return CpMap::from_kraus(KrausSet{n, n, {CMat::Identity(n, n)}}); }

Eigen::Index basis_size(const GnsModule& g) { return static_cast<Eigen::Index>(g.minimal_basis->size()); }

}  // namespace

TEST_CASE("build_gns uses the minimal Kraus stack as cyclic vector") {
  const GnsModule g = build_gns(identity(3));
  CHECK(g.rank() == 1);
  CHECK_FALSE(g.is_minimal);
  CHECK((g.cyclic.blocks[0] - CMat::Identity(3, 3)).norm() < 1e-12);

  const auto [e11, e12] = worked::unattained();
  CHECK((build_gns(e11).cyclic.blocks[0] - m2(1, 0, 0, 0)).norm() < 1e-12);

  const auto [phi1, phi2] = worked::transpose_gap();
  CHECK(build_gns(phi1).rank() == 4);
}

TEST_CASE("the cyclic vector represents the map") {
  Rng rng(20);
  const CpMap phi = random_cpmap(rng, 3, 2, 2);
  const GnsModule g = build_gns(phi);
  for (int k = 0; k < 3; ++k) {
    const CMat a = random_complex(rng, 3, 3);
    CHECK((g.represent(a) - cpbures::apply(phi, a)).norm() < 1e-10);
  }
}

TEST_CASE("stack algebra") {
  Rng rng(21);
  const Stack x{{random_complex(rng, 2, 3), random_complex(rng, 2, 3)}};
  const Stack y{{random_complex(rng, 2, 3), random_complex(rng, 2, 3)}};
  const CMat ip = inner(x, y);
  CHECK((ip - (x.blocks[0].adjoint() * y.blocks[0] + x.blocks[1].adjoint() * y.blocks[1])).norm() < 1e-12);
  CHECK(norm(x) == doctest::Approx(std::sqrt(op_norm(inner(x, x)))));
  const CMat c = random_complex(rng, 2, 2);
  const Stack mixed = mix(c, x);
  CHECK((mixed.blocks[1] - (c(1, 0) * x.blocks[0] + c(1, 1) * x.blocks[1])).norm() < 1e-12);
  const Stack sum = direct_sum(x, zero_stack(1, 2, 3));
  CHECK(sum.size() == 3);
  CHECK((inner(sum, sum) - inner(x, x)).norm() < 1e-12);
  const CMat a = random_complex(rng, 2, 2), b = random_complex(rng, 3, 3);
  CHECK((act(a, x, b).blocks[0] - a * x.blocks[0] * b).norm() < 1e-12);
  CHECK(norm(x - x) == 0.0);
}

TEST_CASE("intertwiners must be contractions") {
  CHECK_NOTHROW(Intertwiner(CMat::Identity(2, 2)));
  CHECK_NOTHROW(Intertwiner(CMat::Identity(2, 2) * (1.0 + 1e-10)));
  CHECK_THROWS_AS(Intertwiner(CMat::Identity(2, 2) * 1.01), Error);
}

TEST_CASE("pairing on the same module with C = I is phi(1)") {
  Rng rng(22);
  const CpMap phi = random_cpmap(rng, 2, 2, 3);
  const GnsModule g = build_gns(phi);
  const CMat p = pairing(g, g, Intertwiner(CMat::Identity(g.rank(), g.rank())));
  CHECK((p - cpbures::apply(phi, CMat::Identity(2, 2))).norm() < 1e-10);
  CHECK(pairing(g, g, Intertwiner(CMat::Zero(g.rank(), g.rank()))).norm() == 0.0);
}

TEST_CASE("pairing of the corner maps is c E12") {
  const auto [e11, e12] = worked::unattained();
  const cplx c(0.3, -0.4);
  CMat cm(1, 1);
  cm(0, 0) = c;
  const CMat p = pairing(build_gns(e11), build_gns(e12), Intertwiner(cm));
  CHECK((p - c * m2(0, 1, 0, 0)).norm() < 1e-14);
}

TEST_CASE("pairing rejects mismatched shapes") {
  Rng rng(23);
  const GnsModule g1 = build_gns(random_cpmap(rng, 2, 2, 2));
  const GnsModule g2 = build_gns(random_cpmap(rng, 2, 2, 3));
  CHECK_THROWS_AS(pairing(g1, g2, Intertwiner(CMat::Zero(3, 3))), Error);
  const GnsModule g3 = build_gns(random_cpmap(rng, 3, 2, 1));
  CHECK_THROWS_AS(pairing(g1, g3, Intertwiner(CMat::Zero(2, 1))), Error);
}

TEST_CASE("defect_embed reproduces the Gram identity") {
  Rng rng(24);
  const CpMap phi1 = random_cpmap(rng, 2, 2, 2), phi2 = random_cpmap(rng, 2, 2, 3);
  const GnsModule g1 = build_gns(phi1), g2 = build_gns(phi2);
  const CMat one = CMat::Identity(2, 2);
  for (int k = 0; k < 5; ++k) {
    CMat c = random_complex(rng, 2, 3);
    c /= op_norm(c) * (1.0 + 0.5 * k);
    const Intertwiner w(c);
    const auto [z1, z2] = defect_embed(g1, g2, w);
    const CMat p = pairing(g1, g2, w);
    const CMat expected = cpbures::apply(phi1, one) + cpbures::apply(phi2, one) - p - p.adjoint();
    CHECK((inner(z1 - z2, z1 - z2) - expected).norm() < 1e-9);
    CHECK((inner(z2, z2) - cpbures::apply(phi2, one)).norm() < 1e-9);
  }
}

TEST_CASE("defect_embed at C = 0 gives orthogonal representatives") {
  const auto [e11, e12] = worked::unattained();
  const auto [z1, z2] = defect_embed(build_gns(e11), build_gns(e12), Intertwiner(CMat::Zero(1, 1)));
  const CMat gram = inner(z1 - z2, z1 - z2);
  CHECK((gram - CMat::Identity(2, 2)).norm() < 1e-12);
  CHECK(norm(z1 - z2) == doctest::Approx(1.0));
}

TEST_CASE("defect_embed at C = I on one module leaves no defect") {
  Rng rng(25);
  const GnsModule g = build_gns(random_cpmap(rng, 2, 2, 2));
  const auto [z1, z2] = defect_embed(g, g, Intertwiner(CMat::Identity(2, 2)));
  CHECK(norm(z1 - z2) < 1e-7);
}

TEST_CASE("minimal module dimensions") {
  const GnsModule id = minimal_basis(build_gns(identity(3)));
  CHECK(id.is_minimal);
  CHECK(basis_size(id) == 9);

  const auto [e11, e12] = worked::unattained();
  CHECK(basis_size(minimal_basis(build_gns(e11))) == 4);

  const GnsModule padded = minimal_basis(build_gns(KrausSet{2, 2, {m2(1, 0, 0, 0), CMat::Zero(2, 2)}}));
  CHECK(basis_size(padded) == 4);

  Rng rng(26);
  const GnsModule g = minimal_basis(build_gns(random_cpmap(rng, 2, 3, 2)));
  const auto& basis = *g.minimal_basis;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const double ip = inner(basis[i], basis[j]).trace().real();
      CHECK(ip == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("center of the identity module is the unit") {
  const auto y = center_unit_vector(build_gns(identity(2)));
  REQUIRE(y.has_value());
  CHECK((inner(*y, *y) - CMat::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("center of a compressed identity plus noise") {
  // phi(b) = c^* b c + tr(b) I / 4 with c = I / sqrt(2).
  KrausSet ks{2, 2, {CMat::Identity(2, 2) / std::sqrt(2.0)}};
  for (int p = 0; p < 2; ++p) {
    for (int q = 0; q < 2; ++q) ks.blocks.push_back(0.5 * matrix_unit(2, 2, p, q));
  }
  const auto y = center_unit_vector(build_gns(CpMap::from_kraus(ks)));
  REQUIRE(y.has_value());
  CHECK((inner(*y, *y) - CMat::Identity(2, 2)).norm() < 1e-9);
}

TEST_CASE("the corner map e12 still has a central unit vector") {
  // The generated submodule is all of M_2 with the ordinary actions, so the
  // unit itself is central; only the decomposition's c fails to be invertible.
  const auto [e11, e12] = worked::unattained();
  const auto y = center_unit_vector(build_gns(e12));
  REQUIRE(y.has_value());
  CHECK((inner(*y, *y) - CMat::Identity(2, 2)).norm() < 1e-9);
  for (int p = 0; p < 2; ++p) {
    for (int q = 0; q < 2; ++q) {
      const CMat e = matrix_unit(2, 2, p, q);
      CHECK(norm(act(e, *y, CMat::Identity(2, 2)) - act(CMat::Identity(2, 2), *y, e)) < 1e-9);
    }
  }
}

TEST_CASE("center_unit_vector needs a square algebra pair") {
  Rng rng(27);
  CHECK_THROWS_AS(center_unit_vector(build_gns(random_cpmap(rng, 2, 3, 1))), Error);
}
