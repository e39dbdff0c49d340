// Times the serial reference against the OpenMP implementation of each
// sweep kernel and verifies they produce identical output.

#include <chrono>
#include <cstdio>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

#include "cesim/sweep.hpp"

using namespace cesim;
using namespace cesim::sweep;

namespace {

double now() {
#if defined(_OPENMP)
    return omp_get_wtime();
#else
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
#endif
}

template <typename F>
double time_it(F&& f) {
    const double start = now();
    f();
    return now() - start;
}

void report(const char* name, double serial, double parallel, bool identical) {
    std::printf("%-28s serial %8.3f s   openmp %8.3f s   speedup %5.2fx   %s\n",
                name, serial, parallel, serial / parallel,
                identical ? "outputs identical" : "OUTPUT MISMATCH");
}

} // namespace

int main() {
#if defined(_OPENMP)
    std::printf("OpenMP enabled, max threads = %d\n\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; both columns run serially\n\n");
#endif

    {
        SweepSpec spec;
        spec.parameter = EnvironmentKind::MultimodeVacuum;
        spec.start = 0.0;
        spec.stop = 10.0;
        spec.points = 20000;
        std::vector<CurvePoint> a, b;
        const double ts = time_it([&] { a = concurrence_curve(spec, Execution::Serial); });
        const double tp = time_it([&] { b = concurrence_curve(spec, Execution::OpenMP); });
        bool same = a.size() == b.size();
        for (std::size_t i = 0; same && i < a.size(); ++i)
            same = a[i].param == b[i].param &&
                   a[i].concurrenceNumeric == b[i].concurrenceNumeric &&
                   a[i].witnessTrace == b[i].witnessTrace;
        report("concurrence curve (20k pts)", ts, tp, same);
    }

    {
        const int samples = 200000;
        double a = 0.0, b = 0.0;
        const double ts = time_it([&] {
            a = min_separable_witness_trace(static_witness(), samples, 7,
                                            Execution::Serial);
        });
        const double tp = time_it([&] {
            b = min_separable_witness_trace(static_witness(), samples, 7,
                                            Execution::OpenMP);
        });
        report("separable scan (200k states)", ts, tp, a == b);
    }

    {
        std::vector<double> a, b;
        const double ts = time_it(
            [&] { a = experiment_ensemble(0.7, 200000, 11, 64, Execution::Serial); });
        const double tp = time_it(
            [&] { b = experiment_ensemble(0.7, 200000, 11, 64, Execution::OpenMP); });
        report("experiment ensemble (64x200k)", ts, tp, a == b);
    }

    return 0;
}
