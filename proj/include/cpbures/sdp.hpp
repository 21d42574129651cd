#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "cpbures/matrix.hpp"

namespace cpbures::sdp {

/// One nonzero of a symmetric constraint matrix. Both triangles are stored.
struct Entry {
  int row;
  int col;
  double value;
};

/// Nonzeros of one constraint matrix restricted to a single diagonal block.
struct BlockEntries {
  int block;
  std::vector<Entry> entries;
};

/// A sparse block-diagonal symmetric matrix, blocks listed in ascending order.
using SparseBlockMatrix = std::vector<BlockEntries>;

/// Dense block-diagonal symmetric matrix.
using BlockMatrix = std::vector<RMat>;

/// Real linear matrix inequality in standard form:
///
///   minimize    c^T y
///   subject to  F0 + sum_i y_i F_i  is positive semidefinite,
///
/// with F0 and F_i block diagonal with the given block sizes. The conic dual
///
///   maximize  -F0 . X   subject to  F_i . X = c_i,  X >= 0
///
/// is solved simultaneously.
struct SdpProblem {
  std::vector<int> block_sizes;
  BlockMatrix constant;
  std::vector<SparseBlockMatrix> coefficients;
  RVec objective;

  int num_variables() const { return static_cast<int>(coefficients.size()); }
  /// Throws DimensionMismatch / NonHermitian when the data is inconsistent.
  void validate() const;
};

enum class SolveStatus { Converged, IterLimit, Infeasible, Unbounded };

const char* to_string(SolveStatus status);

struct SolveReport {
  /// c^T y at the returned point (an upper bound once feasible).
  double value = 0.0;
  /// -F0 . X, the dual objective (a lower bound once X is feasible).
  double lower_bound = 0.0;
  RVec y;
  /// Dual matrix; for an Infeasible status this holds the normalized certificate.
  BlockMatrix dual;
  double gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  SolveStatus status = SolveStatus::IterLimit;
};

/// Gap tolerance for a problem whose data was divided by `scale`: absolute
/// `tol` on the original values up to scale 10 and relative beyond, where an
/// absolute 1e-8 would exceed what double precision can certify.
inline double scaled_tolerance(double tol, double scale) { return tol / std::clamp(scale, 1.0, 10.0); }

struct SolverOptions {
  double tol = 1e-8;
  double feasibility_tol = 1e-8;
  int max_iterations = 10000;
  bool parallel = true;
  /// Stagnation guard: stop once this many iterations fail to improve the gap.
  int stall_iterations = 25;
  /// Per-iteration trace on stderr.
  bool verbose = false;
};

/// Dense primal-dual interior-point method (HKM direction with a Mehrotra
/// predictor-corrector step) for the LMI above.
SolveReport solve_sdp(const SdpProblem& problem, const SolverOptions& options = {});

/// Assembles complex Hermitian LMIs and embeds them into the real problem
/// through H -> [[Re H, -Im H], [Im H, Re H]].
class LmiBuilder {
 public:
  int add_variable(double cost);
  /// Hermitian block of the given complex dimension (real dimension twice that).
  int add_complex_block(int dim);
  /// Real symmetric block.
  int add_real_block(int dim);

  void set_constant(int block, const CMat& value);
  /// Adds value to the coefficient of variable var in the given block.
  void add_coefficient(int var, int block, const CMat& value);
  /// Coefficient with a single Hermitian pair of entries: value at (r, c) and
  /// conj(value) at (c, r) (or just value on the diagonal).
  void add_coefficient_entry(int var, int block, int r, int c, cplx value);

  int num_variables() const { return static_cast<int>(costs_.size()); }
  SdpProblem build() const;

 private:
  struct BlockInfo {
    int dim;
    bool complex;
  };
  struct Term {
    int var;
    int block;
    int row;
    int col;
    cplx value;
  };
  std::vector<double> costs_;
  std::vector<BlockInfo> blocks_;
  std::vector<CMat> constants_;
  std::vector<Term> terms_;
};

/// Evaluates F0 + sum_i y_i F_i.
BlockMatrix evaluate_lmi(const SdpProblem& problem, const RVec& y);

/// Smallest eigenvalue over all blocks of a block-diagonal matrix.
double min_eigenvalue(const BlockMatrix& m);

}  // namespace cpbures::sdp
