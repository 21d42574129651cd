#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cpbures/cpmap.hpp"
#include "cpbures/gns.hpp"
#include "cpbures/spectral.hpp"

namespace cpbures {

enum class Formulation { Intertwiner, Extension, ClosedFormStates, ClosedFormUnitary, BruteForceUpper };

const char* to_string(Formulation f);

struct BuresResult {
  double value = 0.0;
  Formulation formulation = Formulation::Intertwiner;
  /// Intertwiner C (r1 x r2) or off-diagonal extension Choi block.
  std::optional<CMat> witness;
  /// Squared-distance objective at the witness and its certified lower bound.
  double objective = 0.0;
  double lower_bound = 0.0;
  double gap = 0.0;
  int iterations = 0;
  sdp::SolveStatus status = sdp::SolveStatus::Converged;
};

inline constexpr double kDefaultTol = 1e-8;

/// The problem whose optimum is beta^2: base phi1(1) + phi2(1), generators
/// K_i^(1)* K_j^(2) from the two Kraus stacks.
AffineSpectralProblem intertwiner_problem(const GnsModule& g1, const GnsModule& g2);

/// beta(phi1, phi2) from the intertwiner formulation on the minimal GNS modules.
BuresResult bures_intertwiner(const CpMap& phi1, const CpMap& phi2, double tol = kDefaultTol);

/// Same on explicitly given (possibly padded) Kraus stacks.
BuresResult bures_intertwiner(const KrausSet& k1, const KrausSet& k2, double tol = kDefaultTol);

/// beta(phi1, phi2) from the CP-extension SDP over [[J1, Y], [Y^*, J2]] >= 0.
BuresResult bures_extension(const CpMap& phi1, const CpMap& phi2, double tol = kDefaultTol);

/// sqrt(2) (1 - sum_i sqrt(p_i q_i))^{1/2}. Throws NotProbability.
double bures_states_classical(std::span<const double> p, std::span<const double> q);

/// State a -> sum_i p_i a_ii on M_n as a CP map into C (Kraus sqrt(p_i) e_i).
CpMap classical_state_map(std::span<const double> p);

/// beta(id, a -> u^* a u) for a unitary u. Throws NotUnitary.
double bures_id_unitary(const CMat& u);

/// a -> u^* a u.
CpMap unitary_conjugation(const CMat& u);
CpMap identity_map(Eigen::Index n);

/// Minimum of sqrt(lambda_max(D(C))) over sampled feasible C: C = 0 first,
/// then the padded identity, then polar-projected random contractions.
double brute_force_upper(const CpMap& phi1, const CpMap& phi2, int samples, std::uint64_t seed);

/// Symmetric matrix of pairwise beta values with a zero diagonal. Only the
/// upper triangle is solved; with `parallel` the pairs are spread over OpenMP
/// threads. The first error raised by any pair is rethrown.
RMat pairwise_bures(const std::vector<CpMap>& maps, double tol = kDefaultTol, bool parallel = true);

struct BoundReport {
  double beta = 0.0;
  double cb = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  /// Sampled level-one operator norm of phi1 - phi2.
  double op_norm = 0.0;
  bool ok = false;
};

BoundReport bound_report(const CpMap& phi1, const CpMap& phi2, double tol = kDefaultTol);

struct RigidityDecomposition {
  CMat c;
  /// Choi matrix of psi = phi - c^*(.)c after clamping.
  CMat psi_choi;
  /// Absent when psi vanishes.
  std::optional<CpMap> psi;
  double beta_id = 0.0;
  bool c_invertible = false;
  double c_min_singular_value = 0.0;
  /// lambda_min of the unclamped residual Choi matrix.
  double residual_min_eigenvalue = 0.0;
  /// The intertwiner witness (1 x r).
  CMat witness;
};

/// phi(b) = c^* b c + psi(b) from the optimal witness of beta(id, phi).
/// Throws NonSquare, ResidualNotCP.
RigidityDecomposition rigidity_decompose(const CpMap& phi, double tol = kDefaultTol);

}  // namespace cpbures
