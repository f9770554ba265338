#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pumasim/pool.hpp"

namespace pumasim {

// Physically contiguous run backing part of an allocation's virtual range.
struct BackingPiece {
    u64 va_offset = 0; // from the allocation's virtual_base
    u64 pa_base = 0;
    u64 len = 0;
};

struct Allocation {
    u64 id = 0;
    u64 virtual_base = 0;
    u64 length = 0;        // bytes as requested
    u64 backing_bytes = 0; // mapped extent (>= length)
    std::vector<u32> region_ids;      // pool regions, in operand order (PUMA only)
    std::vector<BackingPiece> pieces; // ordered, contiguous va coverage
};

// Simulated re-mmap target: a monotonically growing virtual space holding
// the piece translations of all live allocations.
class VirtualAddressSpace {
public:
    static constexpr u64 kDefaultBase = 1ull << 40;

    explicit VirtualAddressSpace(u64 base = kDefaultBase) : next_va_(base) {}

    u64 reserve(u64 bytes, u64 alignment);
    void map_piece(u64 va, u64 pa, u64 len);
    void unmap_range(u64 va, u64 len);

    struct Run {
        u64 pa = 0;
        u64 len = 0; // physically contiguous bytes available from va
    };

    // Translation for va plus the length of the physically contiguous run
    // starting there (pieces adjacent in both va and pa are merged), capped
    // at max_len. Throws on unmapped addresses.
    Run resolve_run(u64 va, u64 max_len) const;
    u64 resolve(u64 va) const { return resolve_run(va, 1).pa; }
    bool is_mapped(u64 va) const;

    struct Piece {
        u64 len = 0;
        u64 pa = 0;
    };
    const std::map<u64, Piece>& pieces() const { return pieces_; }

private:
    u64 next_va_;
    std::map<u64, Piece> pieces_; // keyed by absolute va
};

// Live allocations indexed by exact virtual base address.
class AllocationTable {
public:
    void insert(Allocation a);
    const Allocation* find(u64 virtual_base) const;
    bool erase(u64 virtual_base);
    std::size_t size() const { return entries_.size(); }
    const std::map<u64, Allocation>& entries() const { return entries_; }

private:
    std::map<u64, Allocation> entries_;
};

enum class TracePath : u32 { worst_fit, align_hit, align_fallback };

struct TraceEvent {
    enum class Kind : u32 { preallocate, take, alloc_ok, alloc_fail, rollback, free_ };

    Kind kind{};
    u64 op_seq = 0; // index of the API call this event belongs to

    u64 subarray = 0; // take
    u64 row = 0;      // take
    TracePath path = TracePath::worst_fit;

    u64 size = 0;  // alloc/alloc_align request bytes; preallocate pages
    u64 hint = 0;  // alloc_align hint
    u64 vbase = 0; // alloc_ok, free
    u64 n = 0;     // alloc_ok regions; preallocate regions; rollback count

    std::string format() const;
};

using TraceSink = std::function<void(const TraceEvent&)>;

// The subarray-aware allocator: a boot-time huge-page pool split into
// one-row regions, worst-fit placement for first allocations, and
// subarray-mirrored placement for aligned allocations.
class PumaAllocator {
public:
    PumaAllocator(AddressTranslator xlat, PoolParams pool_params = {});

    // Adopts a pre-shaped pool (already preallocated); used by tests and
    // tools that want a specific free-table state.
    explicit PumaAllocator(PhysicalPool pool);

    void set_trace_sink(TraceSink sink) { trace_ = std::move(sink); }

    // One-shot pool setup; calling twice is an error, as is allocating
    // before it.
    PoolReport pim_preallocate(u64 n_pages);

    // Worst-fit allocation: each region is taken from a subarray whose free
    // count is maximal at that moment (ties to the lowest id).
    Allocation pim_alloc(u64 size);

    // Aligned allocation: mirrors the hint allocation's per-slot subarrays
    // when they still have free regions, falls back to worst-fit otherwise.
    // Slots beyond the hint's backing are worst-fit. Unknown hints fail.
    Allocation pim_alloc_align(u64 size, u64 hint_virtual_address);

    void pim_free(u64 virtual_base);

    u64 resolve(u64 virtual_address) const;

    const Allocation* find(u64 virtual_base) const { return table_.find(virtual_base); }
    const AllocationTable& allocations() const { return table_; }
    const VirtualAddressSpace& address_space() const { return vas_; }
    const PhysicalPool& pool() const { return pool_; }
    PhysicalPool& pool() { return pool_; }
    bool initialized() const { return initialized_; }
    u64 region_bytes() const { return pool_.region_bytes(); }

private:
    PhysicalPool pool_;
    VirtualAddressSpace vas_;
    AllocationTable table_;
    TraceSink trace_;
    bool initialized_ = false;
    u64 next_id_ = 0;
    u64 op_seq_ = 0;

    void emit(TraceEvent ev) const;
    u32 take_traced(u64 subarray, TracePath path);
    std::optional<u32> take_worst_fit();
    void rollback(const std::vector<u32>& taken);
    Allocation finish(u64 size, std::vector<u32> taken, u64 hint = 0);
};

} // namespace pumasim
