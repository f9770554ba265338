#include "pumasim/baseline.hpp"

#include <algorithm>

namespace pumasim {

const char* to_string(BaselineKind k) {
    switch (k) {
    case BaselineKind::malloc_sim:   return "malloc";
    case BaselineKind::memalign_sim: return "memalign";
    case BaselineKind::hugepage_sim: return "hugepage";
    }
    return "?";
}

FramePool::FramePool(u64 base, u64 span, u64 frame_bytes, u64 seed)
    : base_(base), span_(span), frame_bytes_(frame_bytes), rng_(seed) {
    if (frame_bytes_ == 0 || span_ < frame_bytes_) {
        throw ConfigError("frame pool span smaller than one frame");
    }
}

u64 FramePool::draw() {
    const u64 total = frames_total();
    if (used_.size() >= total) {
        throw AllocError(AllocErrc::out_of_simulated_memory, "frame pool exhausted");
    }
    // Rejection sampling; the pool is never drawn anywhere near empty in
    // practice (allocations use a few hundred of ~2^19 frames).
    for (;;) {
        u64 idx = rng_.next_below(total);
        if (used_.insert(idx).second) {
            return base_ + idx * frame_bytes_;
        }
    }
}

BaselineAllocator::BaselineAllocator(AddressTranslator xlat, BaselineKind kind,
                                     u64 seed, BaselineParams params)
    : xlat_(std::move(xlat)),
      kind_(kind),
      params_(params),
      frames_(xlat_.geometry().total_bytes() / 2,
              xlat_.geometry().total_bytes() / 4, params.frame_bytes,
              derive_seed(seed, {0x66726d73})),
      chunk_base_(ceil_div(xlat_.geometry().total_bytes() / 4 * 3,
                           params.chunk_bytes) *
                  params.chunk_bytes),
      chunk_span_(xlat_.geometry().total_bytes() -
                  std::min(chunk_base_, xlat_.geometry().total_bytes())),
      rng_(derive_seed(seed, {0x6f666673})) {
    if (params_.frame_bytes == 0 || !is_pow2(params_.frame_bytes)) {
        throw ConfigError("baseline frame size must be a power of two");
    }
    if (params_.chunk_bytes == 0 || params_.chunk_bytes % params_.frame_bytes != 0) {
        throw ConfigError("baseline chunk size must be a multiple of the frame size");
    }
}

Allocation BaselineAllocator::alloc(u64 size) {
    if (size == 0) {
        throw AllocError(AllocErrc::bad_size, "allocation size must be >= 1");
    }
    switch (kind_) {
    case BaselineKind::malloc_sim:
        return alloc_framed(size, 16 * rng_.next_below(params_.frame_bytes / 16));
    case BaselineKind::memalign_sim:
        return alloc_framed(size, 0);
    case BaselineKind::hugepage_sim:
        return alloc_chunked(size);
    }
    throw AllocError(AllocErrc::bad_size, "unknown baseline kind");
}

// Virtually contiguous range whose per-page physical backing is an
// independent random frame; the start offset within the first frame mirrors
// the virtual offset, as with a real heap pointer.
Allocation BaselineAllocator::alloc_framed(u64 size, u64 start_off) {
    const u64 frame = params_.frame_bytes;
    const u64 n_frames = ceil_div(start_off + size, frame);

    Allocation a;
    a.id = next_id_++;
    a.length = size;
    a.backing_bytes = size;
    const u64 va_page = vas_.reserve(n_frames * frame, frame);
    a.virtual_base = va_page + start_off;

    u64 remaining = size;
    u64 off_in_frame = start_off;
    u64 va_off = 0;
    for (u64 i = 0; i < n_frames && remaining > 0; ++i) {
        const u64 pa = frames_.draw() + off_in_frame;
        const u64 len = std::min(frame - off_in_frame, remaining);
        a.pieces.push_back({va_off, pa, len});
        vas_.map_piece(a.virtual_base + va_off, pa, len);
        va_off += len;
        remaining -= len;
        off_in_frame = 0;
    }
    table_.insert(a);
    return a;
}

Allocation BaselineAllocator::alloc_chunked(u64 size) {
    const u64 chunk = params_.chunk_bytes;
    const u64 n_chunks = ceil_div(size, chunk);
    if ((chunk_cursor_ + n_chunks) * chunk > chunk_span_) {
        throw AllocError(AllocErrc::out_of_simulated_memory, "hugepage range exhausted");
    }
    Allocation a;
    a.id = next_id_++;
    a.length = size;
    a.backing_bytes = n_chunks * chunk;
    a.virtual_base = vas_.reserve(a.backing_bytes, chunk);
    const u64 pa = chunk_base_ + chunk_cursor_ * chunk;
    chunk_cursor_ += n_chunks;
    a.pieces.push_back({0, pa, a.backing_bytes});
    vas_.map_piece(a.virtual_base, pa, a.backing_bytes);
    table_.insert(a);
    return a;
}

void BaselineAllocator::free(u64 virtual_base) {
    const Allocation* a = table_.find(virtual_base);
    if (a == nullptr) {
        throw AllocError(AllocErrc::unknown_address, "free of unknown virtual base");
    }
    vas_.unmap_range(a->virtual_base, a->backing_bytes);
    table_.erase(virtual_base);
}

} // namespace pumasim
