#include "cpbures/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cpbures {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonSquare: return "NonSquare";
    case ErrorKind::NonHermitian: return "NonHermitian";
    case ErrorKind::NotPsd: return "NotPsd";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ZeroMap: return "ZeroMap";
    case ErrorKind::NotContraction: return "NotContraction";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::NotProbability: return "NotProbability";
    case ErrorKind::CenterNotScalarGram: return "CenterNotScalarGram";
    case ErrorKind::ResidualNotCP: return "ResidualNotCP";
    case ErrorKind::SolverFailure: return "SolverFailure";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

void require_hermitian(const CMat& h, double tol) {
  if (h.rows() != h.cols()) {
    std::ostringstream os;
    os << "expected a square matrix, got " << h.rows() << "x" << h.cols();
    throw Error(ErrorKind::NonSquare, os.str());
  }
  const double scale = std::max(1.0, op_norm(h));
  const double asym = op_norm(h - h.adjoint());
  if (asym > tol * scale) {
    std::ostringstream os;
    os << "||H - H*|| = " << asym << " exceeds " << tol * scale;
    throw Error(ErrorKind::NonHermitian, os.str());
  }
}

CMat hermitian_part(const CMat& m) { return 0.5 * (m + m.adjoint()); }

HermEig herm_eig(const CMat& h) {
  require_hermitian(h);
  Eigen::SelfAdjointEigenSolver<CMat> solver(hermitian_part(h));
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::SolverFailure, "Hermitian eigensolver did not converge");
  }
  HermEig out{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index c = 0; c < out.vectors.cols(); ++c) {
    Eigen::Index imax = 0;
    out.vectors.col(c).cwiseAbs().maxCoeff(&imax);
    const cplx pivot = out.vectors(imax, c);
    if (std::abs(pivot) > 0.0) {
      out.vectors.col(c) *= std::conj(pivot) / std::abs(pivot);
      out.vectors(imax, c) = std::abs(out.vectors(imax, c));
    }
  }
  return out;
}

double op_norm(const CMat& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  Eigen::JacobiSVD<CMat> svd(m);
  return svd.singularValues()(0);
}

double min_singular_value(const CMat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(m);
  const auto& s = svd.singularValues();
  return s(s.size() - 1);
}

bool is_psd(const CMat& h, double tol) {
  require_hermitian(h);
  if (h.size() == 0) return true;
  const HermEig e = herm_eig(h);
  const double scale = std::max(1.0, e.values.cwiseAbs().maxCoeff());
  return e.values(0) >= -tol * scale;
}

CMat psd_sqrt(const CMat& h) {
  const HermEig e = herm_eig(h);
  if (h.size() == 0) return h;
  const double scale = std::max(1.0, e.values.cwiseAbs().maxCoeff());
  if (e.values(0) < -1e-8 * scale) {
    std::ostringstream os;
    os << "lambda_min = " << e.values(0);
    throw Error(ErrorKind::NotPsd, os.str());
  }
  const RVec roots = e.values.cwiseMax(0.0).cwiseSqrt();
  return e.vectors * roots.cast<cplx>().asDiagonal() * e.vectors.adjoint();
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMat matrix_unit(Eigen::Index rows, Eigen::Index cols, Eigen::Index i, Eigen::Index j) {
  CMat e = CMat::Zero(rows, cols);
  e(i, j) = 1.0;
  return e;
}

bool all_finite(const CMat& m) {
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    const cplx z = m.data()[k];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

RMat real_embedding(const CMat& h) {
  const Eigen::Index n = h.rows();
  RMat out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = h.real();
  out.topRightCorner(n, n) = -h.imag();
  out.bottomLeftCorner(n, n) = h.imag();
  out.bottomRightCorner(n, n) = h.real();
  return out;
}

}  // namespace cpbures
