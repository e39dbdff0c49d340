#pragma once

// Entanglement quantification and detection: concurrence, the SVD witness
// constructor, the time-independent witness for the collective-decay
// family, and the witness-to-concurrence shortcut.

#include <array>

#include "cesim/states.hpp"

namespace cesim {

/// σy⊗σy in the computational ordering (real, involutive).
const Mat4& spin_flip();

struct ConcurrenceResult {
    double lambdaGap = 0.0;                    // √λ1-√λ2-√λ3-√λ4
    double concurrence = 0.0;                  // max(0, lambdaGap)
    std::array<double, 4> sqrtEigs{};          // descending
};

/// Concurrence of an arbitrary two-qubit state. Throws SpectrumOutOfRange
/// when the product-matrix spectrum violates the clamp policy.
ConcurrenceResult concurrence(const DensityMatrix4& rho);

/// ½(1-e^{-2Γt}): concurrence of the state evolved from |eg><eg|.
double concurrence_eg_closed_form(double gammaT);

/// Both branch values for the state evolved from |ee><ee|; the
/// concurrence is max{0, c1, c2} and both branches stay ≤ 0.
struct EeBranches {
    double c1 = 0.0;
    double c2 = 0.0;
};
EeBranches concurrence_ee_branches(double gammaT);

enum class WitnessOrigin { TimeIndependent, FromStateSvd };

struct Witness {
    Mat4 matrix;  // Hermitian, computational ordering
    WitnessOrigin origin = WitnessOrigin::TimeIndependent;

    double trace_against(const DensityMatrix4& rho) const;
};

/// 1 - (UV†)^{T_A} from the SVD of ρ^{T_A} (partial transpose on qubit A),
/// Hermitized; throws if the anti-Hermitian residual exceeds 1e-8.
Witness witness_from_state(const DensityMatrix4& rho);

/// The fixed witness that detects the whole collective-decay family:
/// (1+1/√2)|ee><ee| + (1/√2)(|eg><ge|+|ge><eg|) + (1-1/√2)|gg><gg|.
const Witness& static_witness();

struct WitnessConcurrence {
    double value = 0.0;
    /// Support-pattern deviation from the decay family; when it exceeds
    /// 1e-6 the value is not a concurrence, only a diagnostic.
    bool familyMismatch = false;
    double familyDeviation = 0.0;
};

/// Tr(W ρ)/(1-√2) with the static witness. Meaningful as a concurrence
/// only on the decay family; outside it the result carries a warning flag.
WitnessConcurrence concurrence_from_witness(const DensityMatrix4& rho);

} // namespace cesim
