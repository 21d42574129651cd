#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cpbures/cpmap.hpp"

namespace cpbures {

/// Element of the module C^r (x) M_{n x m}: r blocks of size n x m.
/// Left action a.x.b = (a x_i b)_i, inner product <x, y> = sum_i x_i^* y_i.
struct Stack {
  std::vector<CMat> blocks;

  Eigen::Index size() const { return static_cast<Eigen::Index>(blocks.size()); }
};

/// <x, y> in M_m.
CMat inner(const Stack& x, const Stack& y);
/// ||x|| = ||<x, x>||^{1/2}.
double norm(const Stack& x);
Stack act(const CMat& a, const Stack& x, const CMat& b);
Stack operator-(const Stack& x, const Stack& y);
/// Stack mixing: (C x)_i = sum_j C_ij x_j.
Stack mix(const CMat& c, const Stack& x);
/// x (+) y in the direct sum of the two stack modules.
Stack direct_sum(const Stack& x, const Stack& y);
/// Zero stack with r blocks of size n x m.
Stack zero_stack(Eigen::Index r, Eigen::Index n, Eigen::Index m);

/// Finite-dimensional GNS module for a CP map M_n -> M_m with cyclic vector
/// given by a Kraus stack, so that <x, a x> = phi(a).
struct GnsModule {
  Eigen::Index n = 0;
  Eigen::Index m = 0;
  Stack cyclic;
  /// Orthonormal basis (trace inner product) of span{a x b}, when computed.
  std::optional<std::vector<Stack>> minimal_basis;
  bool is_minimal = false;

  Eigen::Index rank() const { return cyclic.size(); }
  /// phi(a) = <x, a x>.
  CMat represent(const CMat& a) const;
};

/// Full module C^r (x) M_{n x m} with the minimal Kraus stack as cyclic vector.
GnsModule build_gns(const CpMap& phi);
/// Same for an arbitrary (possibly padded or redundant) Kraus set.
GnsModule build_gns(const KrausSet& ks);

/// Bilinear contraction C (x) id between stack modules; C is r1 x r2.
class Intertwiner {
 public:
  /// Throws NotContraction if ||C|| > 1 + 1e-9.
  explicit Intertwiner(CMat c);
  const CMat& matrix() const { return c_; }

 private:
  CMat c_;
};

/// <x1, Phi x2> = sum_ij C_ij K_i^(1)* K_j^(2).
CMat pairing(const GnsModule& g1, const GnsModule& g2, const Intertwiner& c);

/// Representatives z1 = x1 (+) 0 and z2 = C x2 (+) sqrt(I - C^* C) x2 of phi1, phi2
/// in E1 (+) E2. Verifies <z2, a z2> = phi2(a) on matrix units.
std::pair<Stack, Stack> defect_embed(const GnsModule& g1, const GnsModule& g2,
                                     const Intertwiner& c);

inline constexpr double kBasisDropTol = 1e-10;
inline constexpr double kCenterCutoff = 1e-9;

/// Orthonormal basis of span{E_pq x E_st} by Gram-Schmidt over generators in
/// lexicographic (p, q, s, t) order.
GnsModule minimal_basis(const GnsModule& g);

/// A unit vector y (<y, y> = 1) in the center {y : b y = y b}, or nullopt when
/// the center is trivial. Requires n == m; computes the basis if missing.
std::optional<Stack> center_unit_vector(const GnsModule& g);

}  // namespace cpbures
