#pragma once

// The worked examples as in-code maps; the JSON files under fixtures/ carry
// the same data for the command-line tests.

#include <cmath>
#include <utility>

#include "cpbures/cpmap.hpp"

namespace worked {

using cpbures::CMat;
using cpbures::CpMap;
using cpbures::KrausSet;

inline CMat m2(double a, double b, double c, double d) {
  CMat m(2, 2);
  m << a, b, c, d;
  return m;
}

/// phi1(a) = [[a11 + 2 a22, a21], [a12, a22 + 2 a11]] and
/// phi2(a) = diag(2 a22, 2 a11), so phi1 - phi2 is the transpose map.
/// Kraus blocks are the 2 x 2 pieces of the stacked representing vectors.
inline std::pair<CpMap, CpMap> transpose_gap() {
  const double s = std::sqrt(1.5), h = 1.0 / std::sqrt(2.0);
  const CpMap phi1 = CpMap::from_kraus(KrausSet{
      2, 2, {m2(1, 0, 0, 0), m2(0, 0, 0, 1), m2(0, s, s, 0), m2(0, h, -h, 0)}});
  const CpMap phi2 = CpMap::from_kraus(KrausSet{2, 2, {m2(0, 1, 1, 0), m2(0, 1, -1, 0)}});
  return {phi1, phi2};
}

/// a -> e11^* a e11 and a -> e12^* a e12.
inline std::pair<CpMap, CpMap> unattained() {
  return {CpMap::from_kraus(KrausSet{2, 2, {m2(1, 0, 0, 0)}}),
          CpMap::from_kraus(KrausSet{2, 2, {m2(0, 1, 0, 0)}})};
}

inline const double kTransposeGapObjective = 5.0 - std::sqrt(2.0) - std::sqrt(6.0);

}  // namespace worked
