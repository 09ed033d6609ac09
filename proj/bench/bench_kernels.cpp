// Benchmark: OpenMP slab kernels against the serial reference. The two
// paths must agree bit for bit; this compares their wall time.
#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "decaylab/sweep.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace decaylab;
using Clock = std::chrono::steady_clock;

namespace {

double time_slab(const SweepConfig& config, double n, bool parallel, SlabStats& out) {
    const auto t0 = Clock::now();
    out = evaluate_slab(config, n, parallel);
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    SweepConfig config;
    config.map = UnivalentMap::koebe();
    config.grid_nx = config.grid_ny = 10;
    config.grid_nt = 11;
    config.quadrature.nodes_per_axis = 10;
    config.planes_per_point = 4;
    if (argc > 1) config.grid_nx = config.grid_ny = std::atoi(argv[1]);

#ifdef _OPENMP
    if (const char* env = std::getenv("DECAYLAB_THREADS")) {
        const int t = std::atoi(env);
        if (t > 0) omp_set_num_threads(t);
    }
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; both columns run the serial kernel\n");
#endif
    std::printf("grid %dx%dx%d, quadrature %d^3, %d random planes per point\n\n", config.grid_nx,
                config.grid_ny, config.grid_nt, config.quadrature.nodes_per_axis,
                config.planes_per_point);
    std::printf("%6s %12s %12s %9s %8s\n", "n", "serial[s]", "parallel[s]", "speedup",
                "bitwise");

    for (double n : {3.0, 5.0, 7.0}) {
        SlabStats serial_row, parallel_row;
        const double ts = time_slab(config, n, false, serial_row);
        const double tp = time_slab(config, n, true, parallel_row);
        const bool identical =
            serial_row.sectional_defect_max == parallel_row.sectional_defect_max &&
            serial_row.traceless_ricci_max == parallel_row.traceless_ricci_max &&
            serial_row.l2_traceless_per_area == parallel_row.l2_traceless_per_area &&
            serial_row.distortion_minus_1 == parallel_row.distortion_minus_1 &&
            serial_row.jacobian_minus_1_max == parallel_row.jacobian_minus_1_max;
        std::printf("%6.1f %12.4f %12.4f %8.2fx %8s\n", n, ts, tp, ts / tp,
                    identical ? "equal" : "DIFFER");
        if (!identical) return 1;
    }
    return 0;
}
