// Timing harness for the trajectory kernels: OpenMP batch vs the serial
// reference. The outputs must be bit-identical; the benchmark aborts if the
// parallel path ever drifts from the reference.
#include "jdrift/distance_chain.hpp"
#include "jdrift/walker.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace jdrift;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool identical(const TrajectoryBatch& a, const TrajectoryBatch& b) {
    return a.distances == b.distances && a.hit_steps == b.hit_steps &&
           a.mean_path == b.mean_path && a.std_path == b.std_path;
}

void compare(const std::string& label, double serial_s, double parallel_s, bool same) {
    std::printf("%-28s serial %8.1f ms   parallel %8.1f ms   speedup %.2fx   outputs %s\n",
                label.c_str(), serial_s * 1e3, parallel_s * 1e3, serial_s / parallel_s,
                same ? "identical" : "DIFFER");
    if (!same) {
        std::fprintf(stderr, "parallel output diverged from the serial reference\n");
        std::exit(1);
    }
}

void bench_full_state() {
    WalkConfig config{JohnsonParams(200, 40), 0.0, 200, 2000, 12345, 1, WalkMode::full_state, false};
    const SubsetState target = SubsetState::first_k(config.params);

    auto start = std::chrono::steady_clock::now();
    const TrajectoryBatch serial = simulate_batch_serial(config, target);
    const double serial_s = seconds_since(start);

    start = std::chrono::steady_clock::now();
    const TrajectoryBatch parallel = simulate_batch(config, target);
    const double parallel_s = seconds_since(start);

    compare("full-state J(200,40)", serial_s, parallel_s, identical(serial, parallel));
}

void bench_lumped() {
    WalkConfig config{JohnsonParams(30, 10), 0.5, 500, 20000, 777, 5, WalkMode::lumped, false};
    const DistanceChain chain = build_chain(config.params, config.beta);

    auto start = std::chrono::steady_clock::now();
    const TrajectoryBatch serial = simulate_lumped_serial(config, chain);
    const double serial_s = seconds_since(start);

    start = std::chrono::steady_clock::now();
    const TrajectoryBatch parallel = simulate_lumped(config, chain);
    const double parallel_s = seconds_since(start);

    compare("lumped J(30,10)", serial_s, parallel_s, identical(serial, parallel));
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; both paths run serially\n");
#endif
    bench_full_state();
    bench_lumped();
    return 0;
}
