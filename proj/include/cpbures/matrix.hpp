#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

#include "cpbures/error.hpp"

namespace cpbures {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-10;

/// Eigen-decomposition of a Hermitian matrix. Eigenvalues ascend; each
/// eigenvector column has its largest-modulus entry real and positive.
struct HermEig {
  RVec values;
  CMat vectors;
};

/// Throws NonSquare / NonHermitian unless ||H - H*|| <= tol * max(1, ||H||).
void require_hermitian(const CMat& h, double tol = kHermitianTol);

/// (H + H*) / 2
CMat hermitian_part(const CMat& m);

HermEig herm_eig(const CMat& h);

/// Largest singular value.
double op_norm(const CMat& m);

/// Smallest of the min(rows, cols) singular values.
double min_singular_value(const CMat& m);

/// True iff lambda_min(H) >= -tol * max(1, ||H||).
bool is_psd(const CMat& h, double tol);

/// Principal square root of a PSD matrix; slightly negative eigenvalues
/// (down to -1e-8 relative) are clamped to zero.
CMat psd_sqrt(const CMat& h);

/// Kronecker product a (x) b with a as the outer factor.
CMat kron(const CMat& a, const CMat& b);

/// Matrix unit E_ij of size rows x cols.
CMat matrix_unit(Eigen::Index rows, Eigen::Index cols, Eigen::Index i, Eigen::Index j);

bool all_finite(const CMat& m);

/// Real embedding [[Re H, -Im H], [Im H, Re H]].
RMat real_embedding(const CMat& h);

}  // namespace cpbures
