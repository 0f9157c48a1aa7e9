// Compares the serial reference against the OpenMP batch kernels for state
// evolution and measurement across qubit counts.

#include <chrono>
#include <cstdio>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qelm/measurement.hpp"
#include "qelm/reservoir.hpp"
#include "qelm/rng.hpp"

using namespace qelm;

namespace {

CMat random_states(int n_qubits, int samples, std::uint64_t seed) {
    const Eigen::Index dim = static_cast<Eigen::Index>(dim_for_qubits(n_qubits));
    auto rng = make_rng(seed);
    std::normal_distribution<double> gauss;
    CMat states(dim, samples);
    for (int s = 0; s < samples; ++s) {
        for (Eigen::Index i = 0; i < dim; ++i) states(i, s) = complex(gauss(rng), gauss(rng));
        states.col(s) /= states.col(s).norm();
    }
    return states;
}

template <typename F>
double time_s(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    int samples = argc > 1 ? std::atoi(argv[1]) : 2000;
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (OpenMP disabled)\n");
#endif
    std::printf("%-8s %-8s %12s %12s %8s %10s\n", "qubits", "samples", "serial_s", "omp_s",
                "speedup", "maxdiff");
    for (int n : {6, 8, 10}) {
        CMat u = propagator_static(build_h3(n), 20.0);
        CMat states = random_states(n, samples, 42);

        CMat serial_out, omp_out;
        const double ts = time_s([&] { serial_out = evolve_batch_serial(u, states); });
        const double tp = time_s([&] { omp_out = evolve_batch(u, states); });
        const double diff = (serial_out - omp_out).cwiseAbs().maxCoeff();
        std::printf("%-8d %-8d %12.4f %12.4f %7.2fx %10.2e\n", n, samples, ts, tp, ts / tp,
                    diff);

        Mat ms, mp;
        const double tms = time_s([&] { ms = measure_batch_serial(omp_out); });
        const double tmp = time_s([&] { mp = measure_batch(omp_out); });
        std::printf("%-8s %-8d %12.4f %12.4f %7.2fx %10.2e\n", "  meas", samples, tms, tmp,
                    tms / tmp, (ms - mp).cwiseAbs().maxCoeff());
    }
    return 0;
}
