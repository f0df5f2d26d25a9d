#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>

namespace monolab {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr cplx I{0.0, 1.0};

/// Lower Cholesky factor L with H = L L^*. Throws ModelDomainError when H is
/// not Hermitian positive-definite; `context` is appended to the message.
Mat cholesky_factor(const Mat& H, const std::string& context = {});

/// Relative Hermiticity defect |H - H^*| / |H|.
double hermitian_defect(const Mat& H);

/// Operator norm of the endomorphism M with respect to the metric H
/// (largest singular value in an H-orthonormal frame).
double h_operator_norm(const Mat& M, const Mat& H);

/// Same as h_operator_norm with a precomputed Cholesky factor of H.
double h_operator_norm_chol(const Mat& M, const Mat& L);

/// Real spectrum of an H-self-adjoint endomorphism, ascending.
Eigen::VectorXd h_selfadjoint_eigenvalues(const Mat& M, const Mat& H);

/// Block-diagonal concatenation.
Mat block_diag(const Mat& a, const Mat& b);

/// Largest absolute entry.
double max_abs(const Mat& M);

}  // namespace monolab
