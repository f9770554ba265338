#pragma once

#include "pumasim/bench.hpp"

namespace pumasim {

// Measures what fraction of the operation mix each allocator renders
// executable in DRAM, independent of the cost model.
struct StudyParams {
    std::vector<u64> sizes_bits;   // empty: the config's sweep grid
    u64 trials = 10000;            // seeds per randomized allocator
    u64 seed = 1;
    u64 puma_placement_seeds = 8;  // pool layouts tried for the puma column
};

struct StudyRow {
    AllocatorKind allocator{};
    u64 size_bits = 0;
    u64 trials = 0;
    // Mean slot fraction over the co-location-bound operand sets (copy, and).
    double coloc_fraction = 0.0;
    // Mean slot fraction over the full operation mix (zero, copy, and).
    double mix_fraction = 0.0;
};

std::vector<StudyRow> run_study_serial(const SimConfig& config,
                                       const StudyParams& params);
std::vector<StudyRow> run_study_parallel(const SimConfig& config,
                                         const StudyParams& params,
                                         int threads = 0);

std::string study_to_csv(const std::vector<StudyRow>& rows);

} // namespace pumasim
