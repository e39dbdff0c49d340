#include "cesim/channel.hpp"

#include <cmath>
#include <sstream>

namespace cesim {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kSqrt2 = 1.41421356237309504880;
}

double KrausSet::completeness_residual() const {
    Mat4 sum = Mat4::Zero();
    for (const Mat4& k : operators) sum += k.adjoint() * k;
    return linalg::max_norm(sum - Mat4::Identity());
}

KrausSet KrausSet::in_basis(Basis b) const {
    if (b == basis) return *this;
    const Mat4& u = collective_from_computational();
    KrausSet out;
    out.labels = labels;
    out.basis = b;
    out.operators.reserve(operators.size());
    for (const Mat4& k : operators) {
        if (b == Basis::Collective)
            out.operators.push_back(u * k * u.adjoint());
        else
            out.operators.push_back(u.adjoint() * k * u);
    }
    return out;
}

Mat4 evolve_collective_entries(const Mat4& rho0, double gammaT) {
    const double e1 = std::exp(-gammaT);        // e^{-Γt}
    const double e2 = e1 * e1;                  // e^{-2Γt}
    const double pump = 2.0 * gammaT * e2;      // |1,1> -> |1,0> feeding
    const double drain11 = 1.0 - e2 - pump;     // |1,1> -> |1,-1> feeding
    const double drain10 = 1.0 - e2;            // |1,0> -> |1,-1> feeding
    const double cross = 2.0 * e1 * (1.0 - e1); // (1,2)-coherence feeding (2,3)

    Mat4 r;
    // collective indices: 0 = |0,0>, 1 = |1,1>, 2 = |1,0>, 3 = |1,-1>
    r(0, 0) = rho0(0, 0);
    r(0, 1) = rho0(0, 1) * e1;
    r(1, 0) = rho0(1, 0) * e1;
    r(0, 2) = rho0(0, 2) * e1;
    r(2, 0) = rho0(2, 0) * e1;
    r(0, 3) = rho0(0, 3);
    r(3, 0) = rho0(3, 0);
    r(1, 1) = rho0(1, 1) * e2;
    r(1, 2) = rho0(1, 2) * e2;
    r(2, 1) = rho0(2, 1) * e2;
    r(1, 3) = rho0(1, 3) * e1;
    r(3, 1) = rho0(3, 1) * e1;
    r(2, 2) = rho0(2, 2) * e2 + rho0(1, 1) * pump;
    r(2, 3) = rho0(2, 3) * e1 + rho0(1, 2) * cross;
    r(3, 2) = rho0(3, 2) * e1 + rho0(2, 1) * cross;
    r(3, 3) = rho0(3, 3) + rho0(1, 1) * drain11 + rho0(2, 2) * drain10;
    return r;
}

DensityMatrix4 evolve_analytic(const DensityMatrix4& rho0, double gammaT) {
    if (!std::isfinite(gammaT) || gammaT < 0.0)
        throw InvalidState("evolve_analytic: gammaT must be finite and >= 0");
    const Basis wanted = rho0.basis();
    const Mat4 evolved =
        evolve_collective_entries(rho0.to_collective().matrix(), gammaT);
    return DensityMatrix4(evolved, Basis::Collective).in_basis(wanted);
}

DensityMatrix4 steady_state(const DensityMatrix4& rho0) {
    const Basis wanted = rho0.basis();
    const Mat4 c = rho0.to_collective().matrix();
    Mat4 r = Mat4::Zero();
    // all exponentials -> 0: only the singlet block and |1,-1> survive,
    // with every triplet population drained into |1,-1>
    r(0, 0) = c(0, 0);
    r(0, 3) = c(0, 3);
    r(3, 0) = c(3, 0);
    r(3, 3) = c(3, 3) + c(1, 1) + c(2, 2);
    return DensityMatrix4(r, Basis::Collective).in_basis(wanted);
}

MapCoefficients map_coefficients(double param, const EnvironmentModel& model) {
    MapCoefficients mc;
    mc.flavor = model.kind;
    mc.param = param;
    if (model.kind == EnvironmentKind::MultimodeVacuum) {
        const double e1 = std::exp(-param);
        const double e2 = e1 * e1;
        mc.M = e1;
        mc.P = std::sqrt(param * e2);
        mc.N = std::sqrt(std::max(0.0, 1.0 - e2 - 2.0 * param * e2));
        mc.Q = 0.5 * (e1 + 1.0);
        mc.R = 0.5 * (e1 - 1.0);
        mc.S = std::sqrt(0.5 * (1.0 - e2));
    } else {
        const double c2 = std::cos(2.0 * param);
        const double s2 = std::sin(2.0 * param);
        const double cs = std::cos(kSqrt2 * param);
        const double ss = std::sin(kSqrt2 * param);
        mc.M = 0.5 * (1.0 + c2);
        mc.P = Complex(0.0, -0.5 * s2);
        mc.N = 0.5 * (-1.0 + c2);
        mc.Q = 0.5 * (1.0 + cs);
        mc.R = 0.5 * (-1.0 + cs);
        mc.S = Complex(0.0, -kInvSqrt2 * ss);
    }
    return mc;
}

KrausCoefficients kraus_coefficients(double gammaT) {
    KrausCoefficients k;
    k.gammaT = gammaT;
    const double e1 = std::exp(-gammaT);
    k.A = e1;
    if (gammaT < kSmallTime) {
        // continuity limit: the channel is the identity, every decay
        // amplitude vanishes and the singular (-1+e^{Γt}) denominators
        // are bypassed
        k.A = 1.0;
        return k;
    }
    if (gammaT > kLargeTime) {
        // asymptotics: the grouped single-excitation branch collapses onto
        // (C,E) -> (0,1); everything transient is below double precision
        // and e^{4Γt} would overflow inside omega
        k.E = 1.0;
        k.H = 1.0;
        k.F = 1.0;
        k.W = 1.0 / kSqrt2;
        return k;
    }
    const double ep1 = std::exp(gammaT);
    const double ep2 = ep1 * ep1;
    const double ep4 = ep2 * ep2;
    const double t = gammaT;
    const double om2 = 17.0 - 32.0 * ep1 + ep4 + ep2 * (14.0 - 4.0 * t) +
                       4.0 * t * (1.0 + t);
    k.omega = std::sqrt(std::max(0.0, om2));
    const double den = 4.0 * (ep1 - 1.0);
    k.alpha1 = (1.0 - ep2 + 2.0 * t - k.omega) / den;
    k.beta1 = (1.0 - ep2 + 2.0 * t + k.omega) / den;
    const double e2 = e1 * e1;
    k.alpha2 = std::sqrt(std::max(0.0, e2 * (-1.0 + ep2 + 2.0 * t - k.omega)));
    k.beta2 = std::sqrt(std::max(0.0, e2 * (-1.0 + ep2 + 2.0 * t + k.omega)));
    const double den2 = 16.0 * (ep1 - 1.0) * (ep1 - 1.0);
    const double g1arg = -1.0 + ep2 - 2.0 * t + k.omega;
    const double g2arg = 1.0 - ep2 + 2.0 * t + k.omega;
    k.gamma1 = std::sqrt(1.0 + g1arg * g1arg / den2);
    k.gamma2 = std::sqrt(1.0 + g2arg * g2arg / den2);
    k.B = k.alpha1 * k.alpha2 / (kSqrt2 * k.gamma1);
    k.C = k.alpha2 / (kSqrt2 * k.gamma1);
    k.D = k.beta1 * k.beta2 / (kSqrt2 * k.gamma2);
    k.E = k.beta2 / (kSqrt2 * k.gamma2);
    // the normalization-consistent double-decay amplitude; equals the
    // coefficient N of the computational-basis map
    k.F = std::sqrt(std::max(0.0, 1.0 - e2 - 2.0 * t * e2));
    k.G = std::sqrt(k.B * k.B + k.D * k.D);
    k.H = std::sqrt(k.C * k.C + k.E * k.E);
    k.X = k.B / kSqrt2;
    k.Y = k.D / kSqrt2;
    k.Z = k.C / kSqrt2;
    k.W = k.E / kSqrt2;
    return k;
}

ClosedFormKraus kraus_closed_form(double gammaT) {
    KrausCoefficients kc = kraus_coefficients(gammaT);
    KrausSet ks;
    ks.basis = Basis::Collective;
    ks.labels = {"M0", "M1A", "M1B", "M2"};
    Mat4 m0 = Mat4::Zero();
    m0(0, 0) = 1.0;
    m0(1, 1) = kc.A;
    m0(2, 2) = kc.A;
    m0(3, 3) = 1.0;
    Mat4 m1a = Mat4::Zero();
    m1a(2, 1) = kc.B;
    m1a(3, 2) = kc.C;
    Mat4 m1b = Mat4::Zero();
    m1b(2, 1) = kc.D;
    m1b(3, 2) = kc.E;
    Mat4 m2 = Mat4::Zero();
    m2(3, 1) = kc.F;
    ks.operators = {m0, m1a, m1b, m2};
    return {ks, kc};
}

namespace {

/// 16x16 block matrix of channel images of collective matrix units.
Eigen::MatrixXcd choi_matrix(double gammaT) {
    Eigen::MatrixXcd c(16, 16);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            Mat4 unit = Mat4::Zero();
            unit(i, j) = 1.0;
            c.block<4, 4>(4 * i, 4 * j) = evolve_collective_entries(unit, gammaT);
        }
    return c;
}

} // namespace

Eigen::VectorXd choi_spectrum(double gammaT) {
    return linalg::hermitian_eigensystem(choi_matrix(gammaT), 1e-9).values;
}

KrausSet kraus_from_choi(double gammaT, double rank_tol) {
    const linalg::HermitianEigen eig =
        linalg::hermitian_eigensystem(choi_matrix(gammaT), 1e-9);
    KrausSet ks;
    ks.basis = Basis::Collective;
    for (int idx = 0; idx < eig.values.size(); ++idx) {
        const double a = eig.values(idx);
        if (a < -1e-8) {
            std::ostringstream os;
            os << "kraus_from_choi: Choi eigenvalue " << a << " at gammaT=" << gammaT;
            throw NegativeChoiEigenvalue(os.str());
        }
        if (a <= rank_tol) continue;
        const Eigen::VectorXcd v = std::sqrt(a) * eig.vectors.col(idx);
        // segment i of the scaled eigenvector becomes column i
        Mat4 op;
        for (int i = 0; i < 4; ++i) op.col(i) = v.segment<4>(4 * i);
        ks.operators.push_back(op);
        ks.labels.push_back("K" + std::to_string(ks.operators.size() - 1));
    }
    return ks;
}

KrausSet kraus_cavity(double gt) {
    const MapCoefficients mc =
        map_coefficients(gt, {EnvironmentKind::SingleModeCavity});
    KrausSet ks;
    ks.basis = Basis::Computational;
    ks.labels = {"K0", "K1", "K2"};
    // computational indices: 0=|ee>, 1=|eg>, 2=|ge>, 3=|gg>
    Mat4 k0 = Mat4::Zero();
    k0(0, 0) = mc.M;
    k0(1, 1) = mc.Q;
    k0(1, 2) = mc.R;
    k0(2, 1) = mc.R;
    k0(2, 2) = mc.Q;
    k0(3, 3) = 1.0;
    Mat4 k1 = Mat4::Zero();
    k1(1, 0) = mc.P;
    k1(2, 0) = mc.P;
    k1(3, 1) = mc.S;
    k1(3, 2) = mc.S;
    Mat4 k2 = Mat4::Zero();
    k2(3, 0) = mc.N;
    ks.operators = {k0, k1, k2};
    return ks;
}

Eigen::MatrixXcd build_dilation(const MapCoefficients& coeffs,
                                const KrausCoefficients& kc,
                                const EnvironmentModel& model) {
    const int envDim = model.env_dimension();
    Eigen::MatrixXcd iso = Eigen::MatrixXcd::Zero(4 * envDim, 4);
    auto at = [envDim](int sys, int env) { return sys * envDim + env; };
    if (model.kind == EnvironmentKind::MultimodeVacuum &&
        kc.gammaT < kSmallTime) {
        // t=0 limit, matching the limit Kraus set: trivial embedding
        for (int sys = 0; sys < 4; ++sys) iso(at(sys, 0), sys) = 1.0;
        return iso;
    }
    // computational system indices: 0=|ee>, 1=|eg>, 2=|ge>, 3=|gg>
    if (model.kind == EnvironmentKind::MultimodeVacuum) {
        // environment: 0=|0>, 1=|1A>, 2=|1B>, 3=|2>
        iso(at(0, 0), 0) = coeffs.M;
        iso(at(1, 1), 0) = kc.X;
        iso(at(2, 1), 0) = kc.X;
        iso(at(1, 2), 0) = kc.Y;
        iso(at(2, 2), 0) = kc.Y;
        iso(at(3, 3), 0) = coeffs.N;
        iso(at(1, 0), 1) = coeffs.Q;
        iso(at(2, 0), 1) = coeffs.R;
        iso(at(3, 1), 1) = kc.Z;
        iso(at(3, 2), 1) = kc.W;
        iso(at(2, 0), 2) = coeffs.Q;
        iso(at(1, 0), 2) = coeffs.R;
        iso(at(3, 1), 2) = kc.Z;
        iso(at(3, 2), 2) = kc.W;
        iso(at(3, 0), 3) = 1.0;
    } else {
        // environment: 0=|0>, 1=|1>, 2=|2>
        iso(at(0, 0), 0) = coeffs.M;
        iso(at(1, 1), 0) = coeffs.P;
        iso(at(2, 1), 0) = coeffs.P;
        iso(at(3, 2), 0) = coeffs.N;
        iso(at(1, 0), 1) = coeffs.Q;
        iso(at(2, 0), 1) = coeffs.R;
        iso(at(3, 1), 1) = coeffs.S;
        iso(at(2, 0), 2) = coeffs.Q;
        iso(at(1, 0), 2) = coeffs.R;
        iso(at(3, 1), 2) = coeffs.S;
        iso(at(3, 0), 3) = 1.0;
    }
    const double residual =
        linalg::max_norm(iso.adjoint() * iso - Eigen::MatrixXcd::Identity(4, 4));
    if (residual > 1e-9) {
        std::ostringstream os;
        os << "build_dilation: columns deviate from orthonormal by " << residual;
        throw InconsistentCoefficients(os.str());
    }
    return iso;
}

DensityMatrix4 apply_channel(const KrausSet& ks, const DensityMatrix4& rho) {
    if (ks.basis != rho.basis())
        throw BasisMismatch("apply_channel: Kraus set and state use different bases");
    const double residual = ks.completeness_residual();
    if (residual > 1e-8) {
        std::ostringstream os;
        os << "apply_channel: completeness residual " << residual;
        throw IncompleteKrausSet(os.str());
    }
    Mat4 out = Mat4::Zero();
    for (const Mat4& k : ks.operators) out += k * rho.matrix() * k.adjoint();
    return DensityMatrix4(out, rho.basis());
}

double emission_rate(const DensityMatrix4& rho) {
    // S+S- in the computational ordering
    static const Mat4 spsm = [] {
        Mat4 m = Mat4::Zero();
        m(0, 0) = 2.0;
        m(1, 1) = 1.0;
        m(1, 2) = 1.0;
        m(2, 1) = 1.0;
        m(2, 2) = 1.0;
        return m;
    }();
    const Mat4 m = rho.to_computational().matrix();
    return std::max(0.0, (spsm * m).trace().real());
}

} // namespace cesim
