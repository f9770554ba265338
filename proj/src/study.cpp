#include "pumasim/study.hpp"

#include <cstdio>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pumasim {

namespace {

struct Cell {
    AllocatorKind allocator;
    u64 size_bits;
    u64 trials;
    u64 offset; // into the flat per-trial arrays
};

struct TrialFractions {
    double zero = 0.0;
    double copy = 0.0;
    double and_ = 0.0;
};

u64 trials_for(AllocatorKind a, const StudyParams& p) {
    switch (a) {
    case AllocatorKind::malloc_sim:
    case AllocatorKind::memalign_sim:
        return p.trials; // placement is random, so sweep the seeds
    case AllocatorKind::hugepage_sim:
        return 1; // sequential placement, seed-independent
    case AllocatorKind::puma:
        return std::min<u64>(p.trials, p.puma_placement_seeds);
    }
    return 1;
}

TrialFractions run_trial(AllocatorKind a, u64 size_bits, u64 trial,
                         const SimConfig& config, const StudyParams& params) {
    TrialFractions f;
    const Benchmark benches[] = {Benchmark::zero, Benchmark::copy, Benchmark::and_};
    double* out[] = {&f.zero, &f.copy, &f.and_};
    for (int b = 0; b < 3; ++b) {
        BenchSpec spec;
        spec.benchmark = benches[b];
        spec.allocator = a;
        spec.size_bits = size_bits;
        spec.seed = derive_seed(params.seed,
                                {static_cast<u64>(a), size_bits, trial,
                                 static_cast<u64>(b)});
        if (a == AllocatorKind::puma && trial > 0) {
            // trial 0 keeps the boot-sequential layout; later trials model
            // fragmented boots.
            spec.pool_placement_seed = derive_seed(params.seed, {0x706f6f6c, trial});
        }
        BenchRecord rec = run_microbenchmark(spec, config);
        *out[b] = rec.status == RunStatus::ok ? rec.pim_fraction : 0.0;
    }
    return f;
}

std::vector<StudyRow> reduce(const std::vector<Cell>& cells,
                             const std::vector<TrialFractions>& trials) {
    std::vector<StudyRow> rows;
    rows.reserve(cells.size());
    for (const auto& c : cells) {
        StudyRow row;
        row.allocator = c.allocator;
        row.size_bits = c.size_bits;
        row.trials = c.trials;
        double coloc = 0.0, mix = 0.0;
        for (u64 t = 0; t < c.trials; ++t) {
            const TrialFractions& f = trials[c.offset + t];
            coloc += (f.copy + f.and_) / 2.0;
            mix += (f.zero + f.copy + f.and_) / 3.0;
        }
        row.coloc_fraction = coloc / static_cast<double>(c.trials);
        row.mix_fraction = mix / static_cast<double>(c.trials);
        rows.push_back(row);
    }
    return rows;
}

std::vector<Cell> build_cells(const SimConfig& config, const StudyParams& params,
                              u64* total_trials) {
    std::vector<u64> sizes = params.sizes_bits;
    if (sizes.empty()) sizes = sweep_sizes_bits(config.sweep);
    const AllocatorKind allocs[] = {AllocatorKind::puma, AllocatorKind::malloc_sim,
                                    AllocatorKind::memalign_sim,
                                    AllocatorKind::hugepage_sim};
    std::vector<Cell> cells;
    u64 offset = 0;
    for (AllocatorKind a : allocs) {
        for (u64 s : sizes) {
            const u64 t = trials_for(a, params);
            cells.push_back({a, s, t, offset});
            offset += t;
        }
    }
    *total_trials = offset;
    return cells;
}

} // namespace

std::vector<StudyRow> run_study_serial(const SimConfig& config,
                                       const StudyParams& params) {
    u64 total = 0;
    const std::vector<Cell> cells = build_cells(config, params, &total);
    std::vector<TrialFractions> trials(total);
    for (const auto& c : cells) {
        for (u64 t = 0; t < c.trials; ++t) {
            trials[c.offset + t] = run_trial(c.allocator, c.size_bits, t, config, params);
        }
    }
    return reduce(cells, trials);
}

std::vector<StudyRow> run_study_parallel(const SimConfig& config,
                                         const StudyParams& params, int threads) {
    u64 total = 0;
    const std::vector<Cell> cells = build_cells(config, params, &total);
    std::vector<TrialFractions> trials(total);

    // Flatten (cell, trial) pairs so the heavy cells spread over threads.
    std::vector<std::pair<u32, u32>> work;
    work.reserve(total);
    for (u32 ci = 0; ci < cells.size(); ++ci) {
        for (u32 t = 0; t < cells[ci].trials; ++t) work.push_back({ci, t});
    }

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
    #pragma omp parallel for schedule(dynamic, 64)
#endif
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(work.size()); ++i) {
        const Cell& c = cells[work[i].first];
        trials[c.offset + work[i].second] =
            run_trial(c.allocator, c.size_bits, work[i].second, config, params);
    }
    (void)threads;
    return reduce(cells, trials);
}

std::string study_to_csv(const std::vector<StudyRow>& rows) {
    std::ostringstream os;
    os << "allocator,size_bits,trials,coloc_fraction,mix_fraction\n";
    char buf[64];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.6f,%.6f", r.coloc_fraction,
                      r.mix_fraction);
        os << to_string(r.allocator) << "," << r.size_bits << "," << r.trials << ","
           << buf << "\n";
    }
    return os.str();
}

} // namespace pumasim
