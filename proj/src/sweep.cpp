#include "cesim/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cesim/circuit.hpp"
#include "cesim/rng.hpp"

namespace cesim::sweep {

namespace {
constexpr double kSqrt2 = 1.41421356237309504880;
}

CurvePoint curve_point(EnvironmentKind flavor, double param) {
    CurvePoint row;
    row.param = param;
    const DensityMatrix4 initial =
        DensityMatrix4::pure(ket_eg(), Basis::Computational);
    if (flavor == EnvironmentKind::MultimodeVacuum) {
        const DensityMatrix4 rho = evolve_analytic(initial, param);
        row.concurrenceClosedForm = concurrence_eg_closed_form(param);
        row.concurrenceNumeric = concurrence(rho).concurrence;
        row.witnessTrace = static_witness().trace_against(rho);
    } else {
        const double s = std::sin(kSqrt2 * param);
        row.concurrenceClosedForm = 0.5 * s * s;
        const DensityMatrix4 rho = apply_channel(kraus_cavity(param), initial);
        row.concurrenceNumeric = concurrence(rho).concurrence;
        row.witnessTrace = static_witness().trace_against(rho);
    }
    return row;
}

std::vector<CurvePoint> concurrence_curve(const SweepSpec& spec, Execution exec) {
    if (!spec.valid())
        throw std::invalid_argument(
            "concurrence_curve: need points >= 2 and start < stop");
    std::vector<CurvePoint> rows(spec.points);
    if (exec == Execution::Serial) {
        for (int i = 0; i < spec.points; ++i)
            rows[i] = curve_point(spec.parameter, spec.at(i));
        return rows;
    }
#pragma omp parallel for schedule(static)
    for (int i = 0; i < spec.points; ++i)
        rows[i] = curve_point(spec.parameter, spec.at(i));
    return rows;
}

namespace {

double separable_trace(const Witness& w, std::uint64_t masterSeed, int index) {
    rng::Stream stream(rng::task_seed(masterSeed, static_cast<std::uint64_t>(index)));
    return w.trace_against(rng::random_separable_state(stream));
}

} // namespace

double min_separable_witness_trace(const Witness& w, int samples,
                                   std::uint64_t masterSeed, Execution exec) {
    double best = std::numeric_limits<double>::infinity();
    if (exec == Execution::Serial) {
        for (int i = 0; i < samples; ++i)
            best = std::min(best, separable_trace(w, masterSeed, i));
        return best;
    }
#pragma omp parallel for schedule(static) reduction(min : best)
    for (int i = 0; i < samples; ++i)
        best = std::min(best, separable_trace(w, masterSeed, i));
    return best;
}

std::vector<double> experiment_ensemble(double gammaT, std::uint64_t shots,
                                        std::uint64_t masterSeed, int runs,
                                        Execution exec) {
    std::vector<double> estimates(runs);
    if (exec == Execution::Serial) {
        for (int i = 0; i < runs; ++i)
            estimates[i] =
                optics::run_experiment(gammaT, shots,
                                       rng::task_seed(masterSeed, i))
                    .concurrenceEstimate;
        return estimates;
    }
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < runs; ++i)
        estimates[i] = optics::run_experiment(gammaT, shots,
                                              rng::task_seed(masterSeed, i))
                           .concurrenceEstimate;
    return estimates;
}

} // namespace cesim::sweep
