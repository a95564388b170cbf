#include <chrono>
#include <cstdio>
#include <string>

#include "CLI11.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gammaprobe/dynsys.hpp"
#include "gammaprobe/measures.hpp"
#include "gammaprobe/reference.hpp"

using namespace gammaprobe;

namespace {

double seconds_of(const std::chrono::steady_clock::time_point& a,
                  const std::chrono::steady_clock::time_point& b) {
    return std::chrono::duration<double>(b - a).count();
}

template <typename F>
double best_time(F&& body, int reps) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        body();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, seconds_of(t0, t1));
    }
    return best;
}

} // namespace

int main(int argc, char** argv) {
    std::size_t N = 20000;
    int reps = 3;
    int threads = 0;

    CLI::App app{"difference-triangle kernel benchmark"};
    app.add_option("--N", N, "estimate size (k = 2N+1 orbit values)");
    app.add_option("--reps", reps, "repetitions, best time reported");
    app.add_option("--threads", threads, "worker threads");
    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
    const int used = threads > 0 ? threads : omp_get_max_threads();
#else
    const int used = 1;
#endif

    const SystemSpec spec = SystemSpec::logistic(3.7, 0.317);
    const Orbit orbit = generate_orbit(spec, 2 * N + 1);

    const GammaEstimate serial = gamma_from_orbit_serial(orbit, N);
    const GammaEstimate parallel = gamma_from_orbit(orbit, N);
    if (serial.flip_count != parallel.flip_count ||
        serial.gamma != parallel.gamma) {
        std::fprintf(stderr, "kernel mismatch: serial flips=%zu parallel=%zu\n",
                     serial.flip_count, parallel.flip_count);
        return 1;
    }
    if (N <= 1500) {
        const GammaEstimate naive = naive_gamma(orbit, N);
        if (naive.flip_count != serial.flip_count) {
            std::fprintf(stderr, "naive mismatch: flips=%zu vs %zu\n",
                         naive.flip_count, serial.flip_count);
            return 1;
        }
    }

    // One update = one |a-b| store; the triangle does (N+1)(N+2)/2 - 1 total.
    const double updates =
        0.5 * static_cast<double>(N + 1) * static_cast<double>(N + 2) - 1.0;

    const double t_serial =
        best_time([&] { gamma_from_orbit_serial(orbit, N); }, reps);
    const double t_parallel =
        best_time([&] { gamma_from_orbit(orbit, N); }, reps);

    std::printf("N=%zu  k=%zu  gamma=%.6f  flips=%zu  threads=%d\n", N,
                2 * N + 1, serial.gamma, serial.flip_count, used);
    std::printf("serial   %8.3f ms  %8.1f MU/s\n", 1e3 * t_serial,
                updates / t_serial / 1e6);
    std::printf("openmp   %8.3f ms  %8.1f MU/s  speedup %.2fx\n",
                1e3 * t_parallel, updates / t_parallel / 1e6,
                t_serial / t_parallel);
    if (N <= 1500) {
        const double t_naive = best_time([&] { naive_gamma(orbit, N); }, reps);
        std::printf("naive    %8.3f ms  %8.1f MU/s\n", 1e3 * t_naive,
                    updates / t_naive / 1e6);
    }
    return 0;
}
