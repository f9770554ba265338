#pragma once

#include <array>
#include <string>
#include <vector>

#include "pumasim/common.hpp"

namespace pumasim {

// Shape of the simulated memory. All counts are powers of two; the product
// of all fields is the physical capacity in bytes.
struct DramGeometry {
    u64 channels = 1;
    u64 ranks_per_channel = 1;
    u64 banks_per_rank = 8;
    u64 subarrays_per_bank = 1024;
    u64 rows_per_subarray = 1024;
    u64 columns_per_row = 1024;
    u64 bytes_per_column = 1;

    // One DRAM row == one allocation region.
    u64 region_bytes() const { return columns_per_row * bytes_per_column; }
    u64 subarray_bytes() const { return rows_per_subarray * region_bytes(); }
    u64 total_subarrays() const {
        return channels * ranks_per_channel * banks_per_rank * subarrays_per_bank;
    }
    u64 total_bytes() const { return total_subarrays() * subarray_bytes(); }
    u32 address_bits() const { return log2_exact(total_bytes()); }

    void validate() const; // throws ConfigError unless every field is a power of two >= 1
};

enum class DramField : u32 { column = 0, row, subarray, bank, rank, channel };
inline constexpr int kDramFieldCount = 6;

const char* to_string(DramField f);

// Number of distinct values a field can take under a geometry. The column
// field addresses bytes within a row, so it spans columns * bytes_per_column.
u64 field_cardinality(const DramGeometry& g, DramField f);

// Inclusive range of physical-address bit positions.
struct BitRange {
    u32 lo = 0;
    u32 hi = 0;
    u32 width() const { return hi - lo + 1; }
};

struct MappingEntry {
    DramField field;
    BitRange bits;
};

// The interleaving scheme: an ordered list of (field, bit range) entries.
// A field may appear in several entries; the entry covering the highest bit
// positions contributes the most significant part of the field's value.
struct AddressMapping {
    std::vector<MappingEntry> entries;

    // col | row | subarray | bank | rank | channel, ascending from bit 0,
    // fields with cardinality 1 omitted.
    static AddressMapping interleaved_default(const DramGeometry& g);
};

struct DramCoordinate {
    u64 channel = 0;
    u64 rank = 0;
    u64 bank = 0;
    u64 subarray = 0;
    u64 row = 0;
    u64 column_byte = 0;

    bool operator==(const DramCoordinate&) const = default;
};

enum class MappingIssue {
    ok,
    bad_range,
    overlapping_bits,
    uncovered_bits,
    width_mismatch,
    noncontiguous_row_regions,
};

// Non-throwing check; fills `detail` with a human-readable diagnostic.
MappingIssue probe_mapping(const DramGeometry& g, const AddressMapping& m,
                           std::string* detail = nullptr);

// Throws ConfigError with a distinct diagnostic per MappingIssue. Accepts iff
// the ranges are disjoint, cover [0, address_bits) exactly, each field's
// total width is log2 of its cardinality, and every bit below
// log2(region_bytes) belongs to the column field (so one (subarray, row)
// pair is one physically contiguous run).
void validate_mapping(const DramGeometry& g, const AddressMapping& m);

// Validated (geometry, mapping) pair with a compiled bit-extraction plan.
// Immutable after construction; safe to copy and share across threads.
class AddressTranslator {
public:
    AddressTranslator(const DramGeometry& g, const AddressMapping& m);

    DramCoordinate decode(u64 physical_address) const;
    u64 encode(const DramCoordinate& c) const;

    // Unique id of the (channel, rank, bank, subarray) tuple holding the
    // address; equal ids iff same physical subarray.
    u64 global_subarray_id(u64 physical_address) const;
    u64 compose_subarray_id(const DramCoordinate& c) const;
    DramCoordinate decompose_subarray_id(u64 id) const; // row/column zeroed

    const DramGeometry& geometry() const { return geom_; }
    const AddressMapping& mapping() const { return map_; }

private:
    struct Chunk {
        u32 addr_lo;      // position in the physical address
        u32 width;
        u32 field_shift;  // position within the field value
    };

    DramGeometry geom_;
    AddressMapping map_;
    std::array<std::vector<Chunk>, kDramFieldCount> plan_;

    u64 extract(u64 pa, DramField f) const;
};

} // namespace pumasim
