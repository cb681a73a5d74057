#include "latspec/linalg.hpp"

#include "latspec/common.hpp"

#include <lapacke.h>

#include <string>
#include <vector>

namespace latspec {
namespace {

double inf_norm(const Eigen::MatrixXd& A) {
    return A.rows() == 0 ? 0.0 : A.cwiseAbs().rowwise().sum().maxCoeff();
}

// positive inertia of a factored L D L^T (lower storage)
int positive_inertia(const Eigen::MatrixXd& F, const std::vector<lapack_int>& ipiv) {
    const Eigen::Index n = F.rows();
    int pos = 0;
    for (Eigen::Index i = 0; i < n;) {
        if (ipiv[i] > 0) {
            if (F(i, i) > 0.0) ++pos;
            ++i;
            continue;
        }
        // 2x2 pivot block
        const double a = F(i, i), b = F(i + 1, i), c = F(i + 1, i + 1);
        const double det = a * c - b * b;
        if (det < 0.0)
            pos += 1;
        else if (a + c > 0.0)
            pos += 2;
        i += 2;
    }
    return pos;
}

} // namespace

int count_above_inplace(Eigen::MatrixXd& A, double lambda) {
    const Eigen::Index n = A.rows();
    if (n == 0) return 0;
    const double shift = lambda + 1e-12 * inf_norm(A);
    A.diagonal().array() -= shift;
    std::vector<lapack_int> ipiv(n);
    const lapack_int info = LAPACKE_dsytrf(LAPACK_COL_MAJOR, 'L', static_cast<lapack_int>(n), A.data(),
                                           static_cast<lapack_int>(n), ipiv.data());
    if (info < 0) throw Error(ErrorKind::Contract, "dsytrf rejected argument " + std::to_string(-info));
    // info > 0 flags an exactly singular D; the zero pivot is simply not counted as positive
    return positive_inertia(A, ipiv);
}

int count_above(const Eigen::MatrixXd& A, double lambda) {
    if (A.rows() != A.cols()) throw Error(ErrorKind::Contract, "count_above needs a square matrix");
    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw Error(ErrorKind::Contract, "count_above needs a symmetric matrix");
    Eigen::MatrixXd work = A;
    return count_above_inplace(work, lambda);
}

int count_singular_above(const Eigen::MatrixXd& B, double s) {
    const Eigen::Index r = B.rows(), c = B.cols();
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(r + c, r + c);
    K.topLeftCorner(r, r).diagonal().setConstant(-s);
    K.bottomRightCorner(c, c).diagonal().setConstant(-s);
    K.bottomLeftCorner(c, r) = B.transpose();
    K.topRightCorner(r, c) = B;
    return count_above_inplace(K, 0.0);
}

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& A) {
    if (A.rows() != A.cols()) throw Error(ErrorKind::Contract, "symmetric_eigenvalues needs a square matrix");
    Eigen::MatrixXd work = A;
    Eigen::VectorXd w(A.rows());
    if (A.rows() == 0) return w;
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', static_cast<lapack_int>(A.rows()), work.data(),
                                           static_cast<lapack_int>(A.rows()), w.data());
    if (info != 0) throw Error(ErrorKind::Contract, "dsyevd failed with info " + std::to_string(info));
    return w;
}

} // namespace latspec
