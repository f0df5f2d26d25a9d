#include "monolab/linalg.hpp"

#include "monolab/errors.hpp"

#include <cmath>

namespace monolab {

Mat cholesky_factor(const Mat& H, const std::string& context) {
    if (H.rows() != H.cols() || H.rows() == 0) {
        throw ModelDomainError("metric is not a square matrix" + (context.empty() ? "" : " at " + context));
    }
    if (!H.allFinite()) {
        throw ModelDomainError("metric has non-finite entries" + (context.empty() ? "" : " at " + context));
    }
    if (hermitian_defect(H) > 1e-10) {
        throw ModelDomainError("metric is not Hermitian" + (context.empty() ? "" : " at " + context));
    }
    Eigen::LLT<Mat> llt(0.5 * (H + H.adjoint()));
    if (llt.info() != Eigen::Success) {
        throw ModelDomainError("metric is not positive-definite" + (context.empty() ? "" : " at " + context));
    }
    Mat L = llt.matrixL();
    for (Eigen::Index i = 0; i < L.rows(); ++i) {
        if (!(L(i, i).real() > 0.0)) {
            throw ModelDomainError("metric is not positive-definite" + (context.empty() ? "" : " at " + context));
        }
    }
    return L;
}

double hermitian_defect(const Mat& H) {
    const double scale = H.norm();
    if (scale == 0.0) return 0.0;
    return (H - H.adjoint()).norm() / scale;
}

double h_operator_norm_chol(const Mat& M, const Mat& L) {
    // In the H-orthonormal coordinates z = L^* x the endomorphism reads L^* M L^{-*}.
    const Mat Ladj = L.adjoint();
    const Mat conj = Ladj * M * Ladj.triangularView<Eigen::Upper>().solve(Mat::Identity(L.rows(), L.cols()));
    if (conj.size() == 1) return std::abs(conj(0, 0));
    Eigen::JacobiSVD<Mat> svd(conj);
    return svd.singularValues()(0);
}

double h_operator_norm(const Mat& M, const Mat& H) {
    return h_operator_norm_chol(M, cholesky_factor(H));
}

Eigen::VectorXd h_selfadjoint_eigenvalues(const Mat& M, const Mat& H) {
    const Mat L = cholesky_factor(H);
    const Mat Ladj = L.adjoint();
    Mat conj = Ladj * M * Ladj.triangularView<Eigen::Upper>().solve(Mat::Identity(L.rows(), L.cols()));
    conj = 0.5 * (conj + conj.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> es(conj, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

Mat block_diag(const Mat& a, const Mat& b) {
    Mat out = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
}

double max_abs(const Mat& M) {
    return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff();
}

}  // namespace monolab
