#pragma once

#include <string>
#include <vector>

#include "pumasim/dram.hpp"
#include "pumasim/engine.hpp"

namespace pumasim {

struct PoolConfig {
    u64 huge_page_bytes = 2ull << 20;
    u64 max_pages = 0; // 0: whatever fits in the pool span
    u64 pages = 8;     // preallocated per benchmark run
};

struct SweepConfig {
    u64 min_bits = 2000;
    u64 max_bits = 6'000'000;
    u32 points = 12;
    u32 repetitions = 1;
    u64 seed = 42;
};

// Full simulator configuration. The file format is one `key = value` pair
// per line, `#` comments, with dotted namespaces:
//
//   geometry.channels = 1
//   mapping = column:0-9, row:10-19, subarray:20-29, bank:30-32
//   pool.pages = 8
//   cost.t_dram_row_op = 10
//   sweep.points = 12
//
// Unknown keys are errors. A missing `mapping` gets the ascending default
// for the configured geometry. Repeating a field in `mapping` splits it
// across bit ranges; the range with the highest bits is most significant.
struct SimConfig {
    DramGeometry geometry;
    AddressMapping mapping;
    PoolConfig pool;
    CostModel cost;
    SweepConfig sweep;

    static SimConfig defaults();
    static SimConfig from_string(const std::string& text);
    static SimConfig from_file(const std::string& path);

    // Validates geometry, mapping, and the remaining sections; throws
    // ConfigError with a specific diagnostic.
    AddressTranslator translator() const;
    void validate() const;
};

AddressMapping parse_mapping(const std::string& text);
std::string format_mapping(const AddressMapping& m);

// Geometric size grid from min_bits to max_bits inclusive.
std::vector<u64> sweep_sizes_bits(const SweepConfig& s);

} // namespace pumasim
