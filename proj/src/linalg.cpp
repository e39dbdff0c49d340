#include "cesim/linalg.hpp"

#include <cmath>
#include <sstream>

namespace cesim::linalg {

double max_norm(const CMatrix& m) {
    if (m.size() == 0) return 0.0;
    return m.cwiseAbs().maxCoeff();
}

bool all_finite(const CMatrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            const Complex& z = m(i, j);
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        }
    return true;
}

void require_finite(const CMatrix& m, const char* what) {
    if (!all_finite(m)) {
        std::ostringstream os;
        os << what << ": non-finite matrix entry";
        throw std::invalid_argument(os.str());
    }
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

HermitianEigen hermitian_eigensystem(const CMatrix& m, double tol) {
    if (m.rows() != m.cols())
        throw NotHermitian("hermitian_eigensystem: matrix is not square");
    const double asym = max_norm(m - m.adjoint());
    if (asym > tol) {
        std::ostringstream os;
        os << "hermitian_eigensystem: ||m - m^dag||_max = " << asym
           << " exceeds tol " << tol;
        throw NotHermitian(os.str());
    }
    const CMatrix sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
    if (solver.info() != Eigen::Success)
        throw NoConvergence("hermitian_eigensystem: solver failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

Eigen::Vector4cd general_eigenvalues_4x4(const CMatrix& m) {
    if (m.rows() != 4 || m.cols() != 4)
        throw std::invalid_argument("general_eigenvalues_4x4: expected a 4x4 matrix");
    Eigen::ComplexEigenSolver<CMatrix> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw NoConvergence("general_eigenvalues_4x4: iteration cap exceeded");
    return solver.eigenvalues();
}

Svd svd(const CMatrix& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("svd: expected a square matrix");
    Eigen::JacobiSVD<CMatrix> solver(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (solver.info() != Eigen::Success)
        throw NoConvergence("svd: solver failed");
    return {solver.matrixU(), solver.singularValues(), solver.matrixV().adjoint()};
}

CMatrix partial_transpose(const CMatrix& m, Subsystem which) {
    if (m.rows() != 4 || m.cols() != 4)
        throw std::invalid_argument("partial_transpose: expected a 4x4 matrix");
    CMatrix out(4, 4);
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k)
            for (int j = 0; j < 2; ++j)
                for (int l = 0; l < 2; ++l) {
                    // row index (i,k), col index (j,l); transpose one factor
                    if (which == Subsystem::A)
                        out(2 * j + k, 2 * i + l) = m(2 * i + k, 2 * j + l);
                    else
                        out(2 * i + l, 2 * j + k) = m(2 * i + k, 2 * j + l);
                }
    return out;
}

double clamp_nonnegative_real(Complex z, double tol) {
    if (std::abs(z.imag()) > tol) {
        std::ostringstream os;
        os << "clamp_nonnegative_real: imaginary part " << z.imag()
           << " exceeds tol " << tol;
        throw SpectrumOutOfRange(os.str());
    }
    double re = z.real();
    if (re < 0.0) {
        if (re < -tol) {
            std::ostringstream os;
            os << "clamp_nonnegative_real: negative value " << re
               << " below -tol " << -tol;
            throw SpectrumOutOfRange(os.str());
        }
        re = 0.0;
    }
    return re;
}

} // namespace cesim::linalg
