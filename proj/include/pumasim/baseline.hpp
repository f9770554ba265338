#pragma once

#include <unordered_set>

#include "pumasim/alloc.hpp"

namespace pumasim {

enum class BaselineKind : u32 { malloc_sim, memalign_sim, hugepage_sim };

const char* to_string(BaselineKind k);

// 4 KiB frames drawn uniformly at random, without replacement, from a range
// disjoint from the huge-page pool. Seed-deterministic.
class FramePool {
public:
    FramePool(u64 base, u64 span, u64 frame_bytes, u64 seed);

    u64 draw(); // frame base address; throws when exhausted

    u64 frames_total() const { return span_ / frame_bytes_; }
    u64 frames_used() const { return used_.size(); }
    u64 frame_bytes() const { return frame_bytes_; }

private:
    u64 base_;
    u64 span_;
    u64 frame_bytes_;
    Rng rng_;
    std::unordered_set<u64> used_;
};

struct BaselineParams {
    u64 frame_bytes = 4096;
    u64 chunk_bytes = 2ull << 20; // hugepage_sim allocation unit
};

// Placement models for the conventional allocators. malloc: random frames
// with a random 16-byte-granular start offset. memalign: random frames,
// page-aligned start. hugepage: physically contiguous aligned chunks handed
// out sequentially.
//
// Frames come from [capacity/2, 3*capacity/4), hugepage chunks from
// [3*capacity/4, capacity), so baselines never touch pool memory and never
// collide with each other.
class BaselineAllocator {
public:
    BaselineAllocator(AddressTranslator xlat, BaselineKind kind, u64 seed,
                      BaselineParams params = {});

    Allocation alloc(u64 size);
    void free(u64 virtual_base);

    const AllocationTable& allocations() const { return table_; }
    const VirtualAddressSpace& address_space() const { return vas_; }
    const AddressTranslator& translator() const { return xlat_; }
    BaselineKind kind() const { return kind_; }

private:
    AddressTranslator xlat_;
    BaselineKind kind_;
    BaselineParams params_;
    FramePool frames_;
    u64 chunk_base_;  // start of the hugepage range
    u64 chunk_span_;
    u64 chunk_cursor_ = 0;
    Rng rng_;
    VirtualAddressSpace vas_;
    AllocationTable table_;
    u64 next_id_ = 0;

    Allocation alloc_framed(u64 size, u64 start_off);
    Allocation alloc_chunked(u64 size);
};

} // namespace pumasim
