#pragma once

// Data-parallel drivers over the physics kernels. Each driver ships in
// two implementations with identical output: a serial reference and an
// OpenMP one. Per-point work is pure and per-task RNG streams are derived
// from the master seed by index, so the pair agrees bitwise; tests assert
// exactly that, and tools/cesim-bench times the two side by side.

#include <cstdint>
#include <vector>

#include "cesim/channel.hpp"
#include "cesim/entanglement.hpp"

namespace cesim::sweep {

enum class Execution { Serial, OpenMP };

struct SweepSpec {
    EnvironmentKind parameter = EnvironmentKind::MultimodeVacuum;  // gammaT or gt
    double start = 0.0;
    double stop = 1.0;
    int points = 2;

    bool valid() const { return points >= 2 && start < stop; }
    double at(int i) const {
        return start + (stop - start) * static_cast<double>(i) /
                           static_cast<double>(points - 1);
    }
};

struct CurvePoint {
    double param = 0.0;
    double concurrenceClosedForm = 0.0;
    double concurrenceNumeric = 0.0;
    double witnessTrace = 0.0;
};

/// Rows of (param, closed-form concurrence, channel-route concurrence,
/// Tr(W ρ(t))) for |eg><eg| evolved under the chosen flavor.
std::vector<CurvePoint> concurrence_curve(const SweepSpec& spec,
                                          Execution exec = Execution::OpenMP);
CurvePoint curve_point(EnvironmentKind flavor, double param);

/// Minimum Tr(W ρ_sep) over `samples` random separable states.
double min_separable_witness_trace(const Witness& w, int samples,
                                   std::uint64_t masterSeed,
                                   Execution exec = Execution::OpenMP);

/// Concurrence estimates from independent counting experiments, one per
/// derived seed, in seed-index order.
std::vector<double> experiment_ensemble(double gammaT, std::uint64_t shots,
                                        std::uint64_t masterSeed, int runs,
                                        Execution exec = Execution::OpenMP);

} // namespace cesim::sweep
