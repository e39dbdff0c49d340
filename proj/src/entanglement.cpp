#include "cesim/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cesim {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kSqrt2 = 1.41421356237309504880;
}

const Mat4& spin_flip() {
    static const Mat4 f = [] {
        Mat4 m = Mat4::Zero();
        m(0, 3) = -1.0;
        m(1, 2) = 1.0;
        m(2, 1) = 1.0;
        m(3, 0) = -1.0;
        return m;
    }();
    return f;
}

ConcurrenceResult concurrence(const DensityMatrix4& rho) {
    const Mat4 m = rho.to_computational().matrix();
    const Mat4& f = spin_flip();
    // the square roots of the eigenvalues of rho * f * conj(rho) * f are
    // the singular values of sqrt(rho) * f * conj(sqrt(rho)); the SVD
    // form keeps the near-zero ones at full absolute accuracy
    const linalg::HermitianEigen eig = linalg::hermitian_eigensystem(m);
    Eigen::Vector4d roots;
    for (int i = 0; i < 4; ++i)
        roots(i) = std::sqrt(
            linalg::clamp_nonnegative_real(Complex(eig.values(i), 0.0)));
    const Mat4 sqrtRho =
        eig.vectors * roots.asDiagonal().toDenseMatrix().cast<Complex>() *
        eig.vectors.adjoint();
    const Mat4 z = sqrtRho * f * sqrtRho.conjugate();
    const linalg::Svd dec = linalg::svd(z);
    ConcurrenceResult res;
    for (int i = 0; i < 4; ++i) res.sqrtEigs[i] = dec.sigma(i);
    res.lambdaGap =
        res.sqrtEigs[0] - res.sqrtEigs[1] - res.sqrtEigs[2] - res.sqrtEigs[3];
    res.concurrence = std::max(0.0, res.lambdaGap);
    return res;
}

double concurrence_eg_closed_form(double gammaT) {
    return 0.5 * (1.0 - std::exp(-2.0 * gammaT));
}

EeBranches concurrence_ee_branches(double gammaT) {
    const double e2 = std::exp(-2.0 * gammaT);
    EeBranches b;
    b.c1 = -2.0 * e2 * gammaT;
    b.c2 = 2.0 * e2 *
           (gammaT - std::sqrt(std::max(0.0, std::exp(2.0 * gammaT) -
                                                  2.0 * gammaT - 1.0)));
    return b;
}

double Witness::trace_against(const DensityMatrix4& rho) const {
    return (matrix * rho.to_computational().matrix()).trace().real();
}

Witness witness_from_state(const DensityMatrix4& rho) {
    const Mat4 pt = linalg::partial_transpose(rho.to_computational().matrix(),
                                              linalg::Subsystem::A);
    const linalg::Svd dec = linalg::svd(pt);
    const Mat4 w =
        Mat4::Identity() - linalg::partial_transpose(dec.u * dec.vdag,
                                                     linalg::Subsystem::A);
    const double antiherm = linalg::max_norm(w - w.adjoint());
    if (antiherm > 1e-8) {
        std::ostringstream os;
        os << "witness_from_state: anti-Hermitian residual " << antiherm;
        throw SpectrumOutOfRange(os.str());
    }
    return {0.5 * (w + w.adjoint()), WitnessOrigin::FromStateSvd};
}

const Witness& static_witness() {
    static const Witness w = [] {
        Mat4 m = Mat4::Zero();
        m(0, 0) = 1.0 + kInvSqrt2;
        m(1, 2) = kInvSqrt2;
        m(2, 1) = kInvSqrt2;
        m(3, 3) = 1.0 - kInvSqrt2;
        return Witness{m, WitnessOrigin::TimeIndependent};
    }();
    return w;
}

WitnessConcurrence concurrence_from_witness(const DensityMatrix4& rho) {
    const Mat4 m = rho.to_computational().matrix();
    // the decay family is supported on {|eg>,|ge>} ⊕ |gg> with no other
    // populations or coherences
    double deviation = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const bool inFamily = (i >= 1 && i <= 2 && j >= 1 && j <= 2) ||
                                  (i == 3 && j == 3);
            if (!inFamily) deviation = std::max(deviation, std::abs(m(i, j)));
        }
    WitnessConcurrence out;
    out.familyDeviation = deviation;
    out.familyMismatch = deviation > 1e-6;
    out.value = static_witness().trace_against(rho) / (1.0 - kSqrt2);
    return out;
}

} // namespace cesim
