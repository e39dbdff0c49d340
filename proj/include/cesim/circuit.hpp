#pragma once

// Compiler and propagator for the netlist IR, the two bundled circuits
// (decay evolution and collective-basis measurement), and the counting
// experiment that estimates the witness from detector statistics.
//
// Photon Hilbert space: polarization ⊗ transverse mode ⊗ path. The
// (pol, mode) pair encodes the two qubits as
//   |ee> = |Vv>, |eg> = |Vh>, |ge> = |Hv>, |gg> = |Hh>,
// and the flat amplitude index is sys * pathCount + path with
// sys ∈ {0:Vv, 1:Vh, 2:Hv, 3:Hh}.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cesim/netlist.hpp"
#include "cesim/rng.hpp"
#include "cesim/states.hpp"

namespace cesim::optics {

/// System index from polarization and mode characters.
int sys_index(char pol, char mode);

// Element matrices (conventions shared by the compiler and tests).
Eigen::Matrix2cd hwp_matrix(double thetaDeg, char ref);   // on pol, (V,H) order
Eigen::Matrix2cd dove_matrix(double thetaDeg);            // on mode, (v,h) order
Eigen::Matrix4cd cnot_matrix();                           // on (pol,mode)

struct PhotonState {
    Eigen::VectorXcd amplitudes;  // size 4 * pathCount
    int pathCount = 0;

    Complex amp(int sys, int path) const {
        return amplitudes(sys * pathCount + path);
    }
    /// (pol,mode) column vector carried by one path.
    Vec4 branch(int path) const;
    double norm() const { return amplitudes.norm(); }
};

struct DetectorBinding {
    std::string id;
    int path = -1;
};

struct CompiledCircuit {
    Eigen::MatrixXcd unitary;  // dim = 4 * pathCount
    int pathCount = 0;
    std::vector<std::string> pathNames;  // '~' prefix marks hidden vacuum ports
    std::map<std::string, int> pathIndex;
    std::vector<DetectorBinding> detectors;
    SourceSpec prep;

    bool hidden_path(int p) const { return pathNames[p].front() == '~'; }
    PhotonState initial_state() const;
    PhotonState inject(const Vec4& system, int path) const;
    PhotonState propagate(const PhotonState& in) const;
    /// Squared norm on each detector path, detector order.
    std::vector<double> detector_probabilities(const PhotonState& final) const;
};

/// Builds the product unitary; throws NonUnitaryComposite when the
/// composite drifts from unitarity beyond 1e-9.
CompiledCircuit compile(const CircuitIR& ir);

/// Partial trace over the path index (computational-basis state).
DensityMatrix4 reduced_system_state(const PhotonState& final);

/// Wave-plate and prism angles realizing the decay map at Γt.
struct AngleSetting {
    double theta1Deg = 0.0;  // HWP1, in [0°, 30°)
    double theta2Deg = 0.0;  // DP1, in (-45°, 0]
    double gammaT = 0.0;
};
AngleSetting solve_angles(double gammaT);

/// Netlist templates (also shipped under netlists/).
const std::string& evolution_netlist_template();  // ${theta1}, ${theta2}
const std::string& measurement_netlist();

CircuitIR build_evolution_circuit(const AngleSetting& angles);
CircuitIR build_measurement_circuit();

struct DetectorRecord {
    std::map<std::string, std::uint64_t> counts;
    std::uint64_t shots = 0;
};

struct ExperimentResult {
    DetectorRecord record;
    std::array<double, 4> exactProbs{};  // D1..D4
    double witnessExact = 0.0;
    double concurrenceExact = 0.0;
    double witnessEstimate = 0.0;
    double concurrenceEstimate = 0.0;
    /// Multinomial standard error of witnessEstimate at the exact
    /// probabilities.
    double witnessStdError = 0.0;
    double concurrenceStdError = 0.0;
};

/// Detector weights of the counting estimator, D1..D4 order.
const std::array<double, 4>& witness_count_weights();

/// Full pipeline: evolution circuit at solve_angles(gammaT), incoherent
/// path branches through the measurement circuit, multinomial counts at
/// the given seed (shots = 0 skips sampling and reports exact values).
ExperimentResult run_experiment(double gammaT, std::uint64_t shots,
                                std::uint64_t seed);

} // namespace cesim::optics
