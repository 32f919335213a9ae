// Wall-time comparison of the serial reference and the OpenMP loss/gradient
// kernels on desk-scale problems.

#include <chrono>
#include <cstdio>

#include "greennet/dinkelbach.hpp"
#include "greennet/scenario_io.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gn = greennet;
using clock_type = std::chrono::steady_clock;

namespace {

double time_evals(gn::LossEvaluator& eval, const gn::ParamVector& params,
                  const gn::LossSettings& settings, int reps, bool with_grad) {
    // warm-up
    (void)eval(params, settings, with_grad);
    const auto t0 = clock_type::now();
    for (int i = 0; i < reps; ++i) (void)eval(params, settings, with_grad);
    const auto t1 = clock_type::now();
    return std::chrono::duration<double>(t1 - t0).count() / reps;
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; both columns run the serial path\n");
#endif
    std::printf("%-28s %12s %12s %9s\n", "kernel", "serial [ms]", "openmp [ms]", "speedup");

    for (int per_side : {18, 36, 54}) {
        gn::Scenario sc = gn::rural_preset(25, per_side);
        gn::ParamVector params = gn::initial_params(sc, 42);
        gn::LossEvaluator serial(sc, gn::EvalBackend::serial);
        gn::LossEvaluator parallel(sc, gn::EvalBackend::openmp);
        const gn::LossSettings settings{gn::ObjectiveKind::iree, 1e8, 100.0};

        const int reps = per_side >= 54 ? 20 : 50;
        char label[64];

        std::snprintf(label, sizeof(label), "loss M=%d N=25", per_side * per_side);
        const double ts = time_evals(serial, params, settings, reps, false);
        const double tp = time_evals(parallel, params, settings, reps, false);
        std::printf("%-28s %12.3f %12.3f %8.2fx\n", label, ts * 1e3, tp * 1e3, ts / tp);

        std::snprintf(label, sizeof(label), "loss+grad M=%d N=25", per_side * per_side);
        const double gs = time_evals(serial, params, settings, reps, true);
        const double gp = time_evals(parallel, params, settings, reps, true);
        std::printf("%-28s %12.3f %12.3f %8.2fx\n", label, gs * 1e3, gp * 1e3, gs / gp);

        // The two backends must agree exactly; a mismatch here is a bug.
        const gn::LossEval a = serial(params, settings, true);
        const gn::LossEval b = parallel(params, settings, true);
        if (a.breakdown.total != b.breakdown.total) {
            std::printf("backend mismatch: %.17g vs %.17g\n", a.breakdown.total,
                        b.breakdown.total);
            return 1;
        }
    }
    return 0;
}
