#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pumasim/baseline.hpp"
#include "pumasim/config.hpp"
#include "pumasim/engine.hpp"

namespace pumasim {

enum class Benchmark : u32 { zero, copy, and_ };
enum class AllocatorKind : u32 { puma, malloc_sim, memalign_sim, hugepage_sim };

const char* to_string(Benchmark b);
const char* to_string(AllocatorKind a);
std::optional<Benchmark> benchmark_from_string(const std::string& s);
std::optional<AllocatorKind> allocator_from_string(const std::string& s);

struct BenchSpec {
    Benchmark benchmark{};
    AllocatorKind allocator{};
    u64 size_bits = 0;
    u64 seed = 0;
    u32 repetitions = 1;
    std::optional<u64> pool_placement_seed; // randomized huge-page bases
};

enum class RunStatus : u32 { ok, alloc_failed };

struct BenchRecord {
    Benchmark benchmark{};
    AllocatorKind allocator{};
    u64 size_bits = 0;
    double pim_fraction = 0.0;
    double latency = 0.0;
    double speedup_vs_malloc = 0.0;
    u64 seed = 0;
    RunStatus status = RunStatus::ok;
};

// One measurement: allocates the benchmark's operands (aligned to the first
// operand when the allocator supports it), checks executability over the
// full size, executes under the cost model, frees, and normalizes against a
// malloc run at the same (benchmark, size, seed). Allocation failures come
// back as status = alloc_failed, never as exceptions.
BenchRecord run_microbenchmark(const BenchSpec& spec, const SimConfig& config,
                               const TraceSink& trace = {});

// Grid in spec order: benchmark x allocator x size x repetition, with
// per-cell seeds derived from sweep.seed.
std::vector<BenchSpec> sweep_grid(const SimConfig& config);

// Reference runner: one cell after another.
std::vector<BenchRecord> sweep_serial(const SimConfig& config);

// Same grid with cells distributed over OpenMP threads; each cell owns a
// fresh allocator, and records land in grid order, so the output is
// byte-identical to the serial runner. threads = 0 uses the OpenMP default.
std::vector<BenchRecord> sweep_parallel(const SimConfig& config, int threads = 0);

std::string records_to_csv(const std::vector<BenchRecord>& records);
void emit_csv(const std::vector<BenchRecord>& records, const std::string& path);

// Speedup-vs-size SVG per benchmark (convenience output; the CSV is the
// contract).
void emit_speedup_charts(const std::vector<BenchRecord>& records,
                         const std::string& dir);

} // namespace pumasim
