#include "pumasim/pool.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace pumasim {

std::string PoolReport::to_text() const {
    std::ostringstream os;
    os << "pages added:     " << pages_added << "\n";
    os << "regions created: " << regions_created << "\n";
    for (const auto& [sa, n] : per_subarray) {
        os << "subarray " << sa << ": " << n << " regions\n";
    }
    return os.str();
}

std::string PoolReport::to_csv() const {
    std::ostringstream os;
    os << "subarray,regions\n";
    for (const auto& [sa, n] : per_subarray) {
        os << sa << "," << n << "\n";
    }
    return os.str();
}

std::vector<MemoryRegion> split_huge_page(const HugePage& page,
                                          const AddressTranslator& xlat) {
    const u64 region_bytes = xlat.geometry().region_bytes();
    std::vector<MemoryRegion> out;
    out.reserve(page.size_bytes / region_bytes);
    for (u64 off = 0; off < page.size_bytes; off += region_bytes) {
        const u64 base = page.physical_base + off;
        const DramCoordinate c = xlat.decode(base);
        MemoryRegion r;
        r.physical_base = base;
        r.size_bytes = region_bytes;
        r.subarray = xlat.compose_subarray_id(c);
        r.row = c.row;
        out.push_back(r);
    }
    return out;
}

SubarrayFreeTable::SubarrayFreeTable(u64 n_subarrays)
    : free_(n_subarrays), counts_(n_subarrays, 0) {}

void SubarrayFreeTable::insert(u32 region_id, u64 subarray, u64 row) {
    free_[subarray].insert({row, region_id});
    ++counts_[subarray];
    ++total_;
}

std::optional<u32> SubarrayFreeTable::take_lowest_row(u64 subarray) {
    auto& set = free_[subarray];
    if (set.empty()) return std::nullopt;
    auto it = set.begin();
    u32 id = it->second;
    set.erase(it);
    --counts_[subarray];
    --total_;
    return id;
}

std::optional<u64> SubarrayFreeTable::max_free_subarray() const {
    u64 best = 0;
    u64 best_count = 0;
    for (u64 sa = 0; sa < counts_.size(); ++sa) {
        if (counts_[sa] > best_count) {
            best_count = counts_[sa];
            best = sa;
        }
    }
    if (best_count == 0) return std::nullopt;
    return best;
}

PhysicalPool::PhysicalPool(AddressTranslator xlat, PoolParams params)
    : xlat_(std::move(xlat)),
      params_(params),
      table_(xlat_.geometry().total_subarrays()) {
    const auto& g = xlat_.geometry();
    if (params_.huge_page_bytes == 0 ||
        params_.huge_page_bytes % g.region_bytes() != 0) {
        throw ConfigError("pool.huge_page_bytes must be a multiple of the region size");
    }
    pool_span_ = g.total_bytes() / 2;
    if (params_.huge_page_bytes > pool_span_) {
        throw ConfigError("pool.huge_page_bytes exceeds the pool span");
    }
    max_slots_ = pool_span_ / params_.huge_page_bytes;
    if (params_.max_pages != 0) {
        max_slots_ = std::min(max_slots_, params_.max_pages);
    }
    slot_order_.resize(max_slots_);
    std::iota(slot_order_.begin(), slot_order_.end(), u64{0});
    if (params_.placement_seed) {
        Rng rng(*params_.placement_seed);
        for (u64 i = max_slots_; i > 1; --i) {
            std::swap(slot_order_[i - 1], slot_order_[rng.next_below(i)]);
        }
    }
}

PoolReport PhysicalPool::preallocate(u64 n_pages) {
    if (n_pages == 0) {
        throw AllocError(AllocErrc::bad_size, "preallocate requires n_pages >= 1");
    }
    if (next_slot_ + n_pages > max_slots_) {
        throw AllocError(AllocErrc::out_of_simulated_memory,
                         "not enough simulated memory for the requested huge pages");
    }
    PoolReport report;
    report.pages_added = n_pages;
    std::map<u64, u64> added;
    for (u64 i = 0; i < n_pages; ++i) {
        HugePage page{slot_order_[next_slot_++] * params_.huge_page_bytes,
                      params_.huge_page_bytes};
        const u32 page_idx = static_cast<u32>(pages_.size());
        pages_.push_back(page);
        for (MemoryRegion r : split_huge_page(page, xlat_)) {
            r.owner_page = page_idx;
            const u32 id = static_cast<u32>(regions_.size());
            regions_.push_back(r);
            states_.push_back(RegionState::free_);
            table_.insert(id, r.subarray, r.row);
            ++report.regions_created;
            ++added[r.subarray];
        }
    }
    report.per_subarray.assign(added.begin(), added.end());
    return report;
}

std::optional<u32> PhysicalPool::take_region(u64 subarray) {
    auto id = table_.take_lowest_row(subarray);
    if (id) states_[*id] = RegionState::allocated;
    return id;
}

void PhysicalPool::release_region(u32 region_id) {
    if (region_id >= regions_.size()) {
        throw AllocError(AllocErrc::unknown_address, "release of unknown region");
    }
    if (states_[region_id] != RegionState::allocated) {
        throw AllocError(AllocErrc::double_release, "region released twice");
    }
    states_[region_id] = RegionState::free_;
    const MemoryRegion& r = regions_[region_id];
    table_.insert(region_id, r.subarray, r.row);
}

} // namespace pumasim
