#pragma once

// The two-qubit collective-decay channel in its equivalent presentations:
// closed-form solution of the master equation, system-environment dilation,
// closed-form Kraus set, Choi-extracted Kraus set, and the single-mode
// cavity variant of the same map.

#include <string>
#include <vector>

#include "cesim/states.hpp"

namespace cesim {

enum class EnvironmentKind { MultimodeVacuum, SingleModeCavity };

struct EnvironmentModel {
    EnvironmentKind kind = EnvironmentKind::MultimodeVacuum;

    /// 4 for the multimode vacuum (|0>,|1A>,|1B>,|2>), 3 for the cavity
    /// (|0>,|1>,|2>).
    int env_dimension() const {
        return kind == EnvironmentKind::MultimodeVacuum ? 4 : 3;
    }
};

/// Amplitudes of the computational-basis map: M,P,N act on |ee>,
/// Q,R,S on |eg>/|ge>. Dissipative flavor is parametrized by Γt,
/// the cavity flavor by gt.
struct MapCoefficients {
    Complex M, P, N;  // |ee> -> M|ee>|0> + P(|eg>+|ge>)|1_ee> + N|gg>|2>
    Complex Q, R, S;  // |eg> -> Q|eg>|0> + R|ge>|0> + S|gg>|1_eg>
    EnvironmentKind flavor = EnvironmentKind::MultimodeVacuum;
    double param = 0.0;  // Γt or gt
};

/// Closed-form Kraus entries of the dissipative channel (collective basis)
/// plus the single-excitation splitting coefficients. All real.
struct KrausCoefficients {
    double A = 1.0;             // no-decay amplitude on |1,1> and |1,0>
    double B = 0.0, C = 0.0;    // first single-excitation branch
    double D = 0.0, E = 0.0;    // second single-excitation branch
    double F = 0.0;             // double-decay amplitude
    double G = 0.0, H = 0.0;    // G = sqrt(B^2+D^2), H = sqrt(C^2+E^2)
    double X = 0.0, Y = 0.0;    // |1_ee> components on |1A>,|1B>
    double Z = 0.0, W = 0.0;    // |1_eg> components on |1A>,|1B>
    // intermediates, exposed for diagnostics
    double omega = 0.0;
    double alpha1 = 0.0, alpha2 = 0.0, beta1 = 0.0, beta2 = 0.0;
    double gamma1 = 1.0, gamma2 = 1.0;
    double gammaT = 0.0;
};

struct KrausSet {
    std::vector<Mat4> operators;
    std::vector<std::string> labels;
    Basis basis = Basis::Collective;

    /// ||Σ K†K - I||_max
    double completeness_residual() const;
    /// Same operators conjugated into the requested basis.
    KrausSet in_basis(Basis b) const;
};

/// Entrywise closed-form evolution in the collective basis, linear in the
/// input matrix (valid for non-Hermitian inputs; used for Choi columns).
Mat4 evolve_collective_entries(const Mat4& rho0, double gammaT);

/// ρ(t) from the closed-form solution. Output basis matches input basis.
DensityMatrix4 evolve_analytic(const DensityMatrix4& rho0, double gammaT);

/// Γt → ∞ limit of evolve_analytic.
DensityMatrix4 steady_state(const DensityMatrix4& rho0);

/// Map amplitudes at the given Γt (dissipative) or gt (cavity).
MapCoefficients map_coefficients(double param, const EnvironmentModel& model);

/// Closed-form Kraus entries at Γt. Below kSmallTime the exact t=0 limit
/// set is returned (the printed coefficients hit 0/0 there); above
/// kLargeTime the asymptotic set (transients below double precision).
KrausCoefficients kraus_coefficients(double gammaT);

inline constexpr double kSmallTime = 1e-6;
inline constexpr double kLargeTime = 100.0;

/// Four-operator closed-form Kraus set in the collective basis.
struct ClosedFormKraus {
    KrausSet set;
    KrausCoefficients coeffs;
};
ClosedFormKraus kraus_closed_form(double gammaT);

/// Kraus set extracted from the Choi matrix of the analytic solution.
/// Eigenvalues below rank_tol are dropped; an eigenvalue < -1e-8 throws
/// NegativeChoiEigenvalue.
KrausSet kraus_from_choi(double gammaT, double rank_tol = 1e-10);

/// Choi eigenvalues (ascending) of the dissipative channel at Γt.
Eigen::VectorXd choi_spectrum(double gammaT);

/// Three-operator Kraus set of the cavity map (computational basis).
KrausSet kraus_cavity(double gt);

/// Columns are the images of |ee>,|eg>,|ge>,|gg> under the
/// system⊗environment map; (4*envDim)x4, columns orthonormal.
/// System index varies slower than the environment index.
Eigen::MatrixXcd build_dilation(const MapCoefficients& coeffs,
                                const KrausCoefficients& kc,
                                const EnvironmentModel& model);

/// Σ K ρ K†. Requires a complete set in the same basis as rho.
DensityMatrix4 apply_channel(const KrausSet& ks, const DensityMatrix4& rho);

/// <S+S-> in units of Γ.
double emission_rate(const DensityMatrix4& rho);

} // namespace cesim
