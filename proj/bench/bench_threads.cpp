// Compares the serial reference runners against the OpenMP runners on the
// default configuration and reports wall times plus an equality check.
#include <chrono>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pumasim/bench.hpp"
#include "pumasim/study.hpp"

using namespace pumasim;

namespace {

double now_s() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

} // namespace

int main(int argc, char** argv) {
    u64 trials = 2000;
    if (argc > 1) trials = std::stoull(argv[1]);

    const SimConfig config = SimConfig::defaults();

#ifdef _OPENMP
    std::printf("openmp: %d thread(s)\n", omp_get_max_threads());
#else
    std::printf("openmp: not enabled\n");
#endif

    double t0 = now_s();
    auto serial_records = sweep_serial(config);
    double t1 = now_s();
    auto parallel_records = sweep_parallel(config);
    double t2 = now_s();
    const bool sweep_equal =
        records_to_csv(serial_records) == records_to_csv(parallel_records);

    StudyParams params;
    params.trials = trials;
    double t3 = now_s();
    auto serial_rows = run_study_serial(config, params);
    double t4 = now_s();
    auto parallel_rows = run_study_parallel(config, params);
    double t5 = now_s();
    const bool study_equal = study_to_csv(serial_rows) == study_to_csv(parallel_rows);

    std::printf("%-22s %10s %10s %8s %6s\n", "kernel", "serial[s]", "openmp[s]",
                "speedup", "equal");
    std::printf("%-22s %10.3f %10.3f %8.2fx %6s\n", "sweep (144 runs)", t1 - t0,
                t2 - t1, (t1 - t0) / (t2 - t1), sweep_equal ? "yes" : "NO");
    std::printf("%-22s %10.3f %10.3f %8.2fx %6s\n",
                ("study (" + std::to_string(trials) + " trials)").c_str(), t4 - t3,
                t5 - t4, (t4 - t3) / (t5 - t4), study_equal ? "yes" : "NO");

    return (sweep_equal && study_equal) ? 0 : 1;
}
