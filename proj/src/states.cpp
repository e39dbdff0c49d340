#include "cesim/states.hpp"

#include <cmath>
#include <sstream>

namespace cesim {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

const Mat4& collective_from_computational() {
    static const Mat4 u = [] {
        Mat4 m = Mat4::Zero();
        // <0,0|  = (<eg| - <ge|)/sqrt(2)
        m(0, 1) = kInvSqrt2;
        m(0, 2) = -kInvSqrt2;
        // <1,1|  = <ee|
        m(1, 0) = 1.0;
        // <1,0|  = (<eg| + <ge|)/sqrt(2)
        m(2, 1) = kInvSqrt2;
        m(2, 2) = kInvSqrt2;
        // <1,-1| = <gg|
        m(3, 3) = 1.0;
        return m;
    }();
    return u;
}

Vec4 ket_ee() { return Vec4::Unit(0); }
Vec4 ket_eg() { return Vec4::Unit(1); }
Vec4 ket_ge() { return Vec4::Unit(2); }
Vec4 ket_gg() { return Vec4::Unit(3); }

Vec4 ket_singlet() {
    Vec4 v = Vec4::Zero();
    v(1) = kInvSqrt2;
    v(2) = -kInvSqrt2;
    return v;
}

Vec4 ket_triplet0() {
    Vec4 v = Vec4::Zero();
    v(1) = kInvSqrt2;
    v(2) = kInvSqrt2;
    return v;
}

void require_valid_state(const Mat4& m, double tol) {
    linalg::require_finite(m, "DensityMatrix4");
    const double traceErr = std::abs(m.trace() - Complex(1.0, 0.0));
    if (traceErr > tol) {
        std::ostringstream os;
        os << "DensityMatrix4: trace deviates from 1 by " << traceErr;
        throw InvalidState(os.str());
    }
    const double herm = linalg::max_norm(m - m.adjoint());
    if (herm > tol) {
        std::ostringstream os;
        os << "DensityMatrix4: Hermiticity residual " << herm;
        throw InvalidState(os.str());
    }
    Eigen::SelfAdjointEigenSolver<Mat4> solver(0.5 * (m + m.adjoint()));
    if (solver.info() != Eigen::Success)
        throw NoConvergence("DensityMatrix4: eigensolver failed");
    const double minEig = solver.eigenvalues().minCoeff();
    if (minEig < -tol) {
        std::ostringstream os;
        os << "DensityMatrix4: minimum eigenvalue " << minEig;
        throw InvalidState(os.str());
    }
}

DensityMatrix4::DensityMatrix4(const Mat4& matrix, Basis basis)
    : m_(matrix), basis_(basis) {
    require_valid_state(m_);
}

DensityMatrix4 DensityMatrix4::pure(const Vec4& psi, Basis basis) {
    const double n2 = psi.squaredNorm();
    if (n2 <= 0.0)
        throw InvalidState("DensityMatrix4::pure: zero vector");
    return DensityMatrix4((psi * psi.adjoint()) / n2, basis);
}

DensityMatrix4 DensityMatrix4::to_collective() const {
    if (basis_ == Basis::Collective) return *this;
    const Mat4& u = collective_from_computational();
    return DensityMatrix4(u * m_ * u.adjoint(), Basis::Collective);
}

DensityMatrix4 DensityMatrix4::to_computational() const {
    if (basis_ == Basis::Computational) return *this;
    const Mat4& u = collective_from_computational();
    return DensityMatrix4(u.adjoint() * m_ * u, Basis::Computational);
}

DensityMatrix4 DensityMatrix4::in_basis(Basis b) const {
    return b == Basis::Collective ? to_collective() : to_computational();
}

} // namespace cesim
