#pragma once

#include <cstdint>
#include <vector>

#include "cpbures/matrix.hpp"
#include "cpbures/sdp.hpp"

namespace cpbures {

/// Kraus blocks K_i of size dim_in x dim_out acting as a -> sum_i K_i^* a K_i.
struct KrausSet {
  Eigen::Index dim_in = 0;
  Eigen::Index dim_out = 0;
  std::vector<CMat> blocks;

  Eigen::Index rank() const { return static_cast<Eigen::Index>(blocks.size()); }
  /// Throws DimensionMismatch if a block has the wrong shape or the set is empty.
  void validate() const;
};

inline constexpr double kChoiPsdTol = 1e-8;
inline constexpr double kKrausRankTol = 1e-10;

/// Choi matrix J = sum_ij E_ij (x) phi(E_ij), input index outermost.
CMat choi_from_kraus(const KrausSet& ks);

/// Minimal Kraus set from a PSD Choi matrix. Eigenvalues at or below
/// tol * lambda_max are dropped; blocks ordered by descending eigenvalue.
KrausSet kraus_from_choi(const CMat& choi, Eigen::Index dim_in, Eigen::Index dim_out,
                         double tol = kKrausRankTol);

/// A nonzero completely positive map M_n -> M_m. The minimal Kraus set is
/// computed once at construction, so values are immutable and shareable.
class CpMap {
 public:
  static CpMap from_kraus(const KrausSet& ks, double rank_tol = kKrausRankTol);
  static CpMap from_choi(Eigen::Index dim_in, Eigen::Index dim_out, const CMat& choi,
                         double rank_tol = kKrausRankTol);

  Eigen::Index dim_in() const { return dim_in_; }
  Eigen::Index dim_out() const { return dim_out_; }
  const CMat& choi() const { return choi_; }
  const KrausSet& kraus() const { return kraus_; }

 private:
  CpMap(Eigen::Index n, Eigen::Index m, CMat choi, KrausSet ks)
      : dim_in_(n), dim_out_(m), choi_(std::move(choi)), kraus_(std::move(ks)) {}

  Eigen::Index dim_in_;
  Eigen::Index dim_out_;
  CMat choi_;
  KrausSet kraus_;
};

/// phi(a) = sum_i K_i^* a K_i.
CMat apply(const CpMap& phi, const CMat& a);

/// Applies the (not necessarily CP) map with the given Choi matrix.
CMat apply_choi(const CMat& choi, Eigen::Index dim_in, Eigen::Index dim_out, const CMat& a);

/// psi o phi.
CpMap compose(const CpMap& psi, const CpMap& phi);

/// Entrywise ampliation phi_k on M_k(M_n), the M_k factor outermost.
CpMap amplify(const CpMap& phi, Eigen::Index k);

CpMap add(const CpMap& a, const CpMap& b);
CpMap scale(const CpMap& phi, double factor);

/// Choi matrix of the ampliation of an arbitrary Hermiticity-preserving map.
CMat amplify_choi(const CMat& choi, Eigen::Index dim_in, Eigen::Index dim_out, Eigen::Index k);

/// ||phi|| = ||phi(1)||.
double cp_norm(const CpMap& phi);

/// phi(1), i.e. the partial trace of the Choi matrix over the input factor.
CMat unit_image(const CMat& choi, Eigen::Index dim_in, Eigen::Index dim_out);

struct CbNormResult {
  double value;
  sdp::SolveReport report;
};

/// Completely bounded norm of the map with the given Choi matrix, from
///   min t  s.t.  [[P1, J], [J^*, P2]] >= 0,  t I - P1(1) >= 0,  t I - P2(1) >= 0,
/// where P1(1), P2(1) are partial traces over the input factor.
/// Throws SolverFailure if the solver does not converge.
CbNormResult cb_norm(const CMat& choi, Eigen::Index dim_in, Eigen::Index dim_out,
                     double tol = 1e-8);

/// Choi matrix of phi1 - phi2.
CMat difference_choi(const CpMap& phi1, const CpMap& phi2);

/// sup over sampled unitaries a of ||Phi(a)||: a sampled lower estimate of
/// the level-one operator norm (unitaries are the extreme points of the ball).
double level1_norm_sampled(const CMat& choi, Eigen::Index dim_in, Eigen::Index dim_out,
                           int samples, std::uint64_t seed);

}  // namespace cpbures
