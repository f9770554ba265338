#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pumasim/dram.hpp"

namespace pumasim {

struct HugePage {
    u64 physical_base = 0; // multiple of size_bytes
    u64 size_bytes = 0;
};

enum class RegionState : u32 { free_, allocated };

// One DRAM row carved out of a huge page.
struct MemoryRegion {
    u64 physical_base = 0; // row-aligned
    u64 size_bytes = 0;    // == geometry region_bytes
    u64 subarray = 0;      // global subarray id
    u64 row = 0;
    u32 owner_page = 0;    // index into PhysicalPool::pages()
};

struct PoolReport {
    u64 pages_added = 0;
    u64 regions_created = 0;
    std::vector<std::pair<u64, u64>> per_subarray; // (subarray id, regions), ascending

    std::string to_text() const;
    std::string to_csv() const;
};

// Splits a page into size/region_bytes one-row regions tagged with their
// decoded (subarray, row). The mapping's region-contiguity guarantee makes
// decoding the base address sufficient.
std::vector<MemoryRegion> split_huge_page(const HugePage& page,
                                          const AddressTranslator& xlat);

// Per-subarray free lists ordered by row index, plus the count vector that
// worst-fit scans (the ordered-array bookkeeping).
class SubarrayFreeTable {
public:
    explicit SubarrayFreeTable(u64 n_subarrays);

    void insert(u32 region_id, u64 subarray, u64 row);
    std::optional<u32> take_lowest_row(u64 subarray);

    // Subarray with the largest free count, lowest id on ties; nullopt when
    // every count is zero.
    std::optional<u64> max_free_subarray() const;

    u64 free_count(u64 subarray) const { return counts_[subarray]; }
    u64 total_free() const { return total_; }
    const std::vector<u64>& counts() const { return counts_; }

private:
    std::vector<std::set<std::pair<u64, u32>>> free_; // (row, region id)
    std::vector<u64> counts_;
    u64 total_ = 0;
};

struct PoolParams {
    u64 huge_page_bytes = 2ull << 20;
    u64 max_pages = 0;                // 0: as many as the pool span holds
    std::optional<u64> placement_seed; // shuffle page placement (fragmented boot)
};

// Boot-time huge-page pool. Pages live in the lower half of the simulated
// physical space; the baseline allocators draw from the upper half, so the
// two never contend.
class PhysicalPool {
public:
    PhysicalPool(AddressTranslator xlat, PoolParams params = {});

    // Reserves n_pages at distinct aligned bases and splits each into
    // regions. Errors: n_pages == 0, or not enough simulated memory left.
    PoolReport preallocate(u64 n_pages);

    std::optional<u64> max_free_subarray() const { return table_.max_free_subarray(); }

    // Removes and returns the free region with the lowest row index, or
    // nullopt if the subarray has none.
    std::optional<u32> take_region(u64 subarray);

    void release_region(u32 region_id); // double release is an error

    const MemoryRegion& region(u32 id) const { return regions_[id]; }
    RegionState region_state(u32 id) const { return states_[id]; }
    u64 total_regions() const { return regions_.size(); }
    u64 total_free() const { return table_.total_free(); }
    u64 free_count(u64 subarray) const { return table_.free_count(subarray); }
    const std::vector<u64>& free_counts() const { return table_.counts(); }
    const std::vector<HugePage>& pages() const { return pages_; }

    u64 region_bytes() const { return xlat_.geometry().region_bytes(); }
    u64 pool_span_bytes() const { return pool_span_; }
    const AddressTranslator& translator() const { return xlat_; }
    const PoolParams& params() const { return params_; }

private:
    AddressTranslator xlat_;
    PoolParams params_;
    u64 pool_span_ = 0;   // pages are placed in [0, pool_span_)
    u64 max_slots_ = 0;
    u64 next_slot_ = 0;
    std::vector<u64> slot_order_; // identity or seeded shuffle

    std::vector<HugePage> pages_;
    std::vector<MemoryRegion> regions_;
    std::vector<RegionState> states_;
    SubarrayFreeTable table_;
};

} // namespace pumasim
