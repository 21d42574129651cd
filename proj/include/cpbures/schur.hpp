#pragma once

#include <vector>

#include "cpbures/sdp.hpp"

namespace cpbures::sdp {

/// Schur complement of the HKM Newton system,
///   M_ij = tr(F_i X F_j S^{-1}),
/// accumulated over matching blocks of the sparse coefficient matrices.
///
/// The serial version is the reference; the OpenMP version splits rows across
/// threads and must agree with it to rounding.
RMat schur_complement_serial(const std::vector<SparseBlockMatrix>& coefficients,
                             const BlockMatrix& x, const BlockMatrix& s_inv);

RMat schur_complement_parallel(const std::vector<SparseBlockMatrix>& coefficients,
                               const BlockMatrix& x, const BlockMatrix& s_inv);

/// F_i . W for every coefficient matrix.
RVec inner_products(const std::vector<SparseBlockMatrix>& coefficients, const BlockMatrix& w);

}  // namespace cpbures::sdp
