#include "pumasim/alloc.hpp"

#include <algorithm>
#include <sstream>

namespace pumasim {

u64 VirtualAddressSpace::reserve(u64 bytes, u64 alignment) {
    u64 base = (next_va_ + alignment - 1) / alignment * alignment;
    next_va_ = base + bytes;
    return base;
}

void VirtualAddressSpace::map_piece(u64 va, u64 pa, u64 len) {
    pieces_[va] = Piece{len, pa};
}

void VirtualAddressSpace::unmap_range(u64 va, u64 len) {
    auto it = pieces_.lower_bound(va);
    while (it != pieces_.end() && it->first < va + len) {
        it = pieces_.erase(it);
    }
}

VirtualAddressSpace::Run VirtualAddressSpace::resolve_run(u64 va, u64 max_len) const {
    auto it = pieces_.upper_bound(va);
    if (it == pieces_.begin()) {
        throw AllocError(AllocErrc::unmapped_address, "unmapped virtual address");
    }
    --it;
    if (va >= it->first + it->second.len) {
        throw AllocError(AllocErrc::unmapped_address, "unmapped virtual address");
    }
    const u64 delta = va - it->first;
    Run run{it->second.pa + delta, it->second.len - delta};
    // Extend across pieces that continue both the virtual and the physical run.
    while (run.len < max_len) {
        u64 end_va = it->first + it->second.len;
        u64 end_pa = it->second.pa + it->second.len;
        auto next = std::next(it);
        if (next == pieces_.end() || next->first != end_va || next->second.pa != end_pa) {
            break;
        }
        run.len += next->second.len;
        it = next;
    }
    run.len = std::min(run.len, max_len);
    return run;
}

bool VirtualAddressSpace::is_mapped(u64 va) const {
    auto it = pieces_.upper_bound(va);
    if (it == pieces_.begin()) return false;
    --it;
    return va < it->first + it->second.len;
}

void AllocationTable::insert(Allocation a) {
    entries_[a.virtual_base] = std::move(a);
}

const Allocation* AllocationTable::find(u64 virtual_base) const {
    auto it = entries_.find(virtual_base);
    return it == entries_.end() ? nullptr : &it->second;
}

bool AllocationTable::erase(u64 virtual_base) {
    return entries_.erase(virtual_base) > 0;
}

std::string TraceEvent::format() const {
    std::ostringstream os;
    os << "#" << op_seq << " ";
    switch (kind) {
    case Kind::preallocate:
        os << "preallocate pages=" << size << " regions=" << n;
        break;
    case Kind::take: {
        const char* via = path == TracePath::worst_fit     ? "worst_fit"
                          : path == TracePath::align_hit   ? "align_hit"
                                                           : "align_fallback";
        os << "take subarray=" << subarray << " row=" << row << " via=" << via;
        break;
    }
    case Kind::alloc_ok:
        os << "alloc_ok size=" << size << " vbase=0x" << std::hex << vbase << std::dec
           << " regions=" << n;
        if (hint) os << " hint=0x" << std::hex << hint << std::dec;
        break;
    case Kind::alloc_fail:
        os << "alloc_fail size=" << size;
        if (hint) os << " hint=0x" << std::hex << hint << std::dec;
        break;
    case Kind::rollback:
        os << "rollback regions=" << n;
        break;
    case Kind::free_:
        os << "free vbase=0x" << std::hex << vbase << std::dec << " regions=" << n;
        break;
    }
    return os.str();
}

PumaAllocator::PumaAllocator(AddressTranslator xlat, PoolParams pool_params)
    : pool_(std::move(xlat), pool_params) {}

PumaAllocator::PumaAllocator(PhysicalPool pool) : pool_(std::move(pool)) {
    initialized_ = pool_.total_regions() > 0;
}

void PumaAllocator::emit(TraceEvent ev) const {
    if (trace_) {
        ev.op_seq = op_seq_;
        trace_(ev);
    }
}

PoolReport PumaAllocator::pim_preallocate(u64 n_pages) {
    ++op_seq_;
    if (initialized_) {
        throw AllocError(AllocErrc::pool_already_initialized,
                         "pool already initialized");
    }
    PoolReport report = pool_.preallocate(n_pages);
    initialized_ = true;
    TraceEvent ev;
    ev.kind = TraceEvent::Kind::preallocate;
    ev.size = n_pages;
    ev.n = report.regions_created;
    emit(ev);
    return report;
}

u32 PumaAllocator::take_traced(u64 subarray, TracePath path) {
    u32 id = *pool_.take_region(subarray);
    TraceEvent ev;
    ev.kind = TraceEvent::Kind::take;
    ev.subarray = subarray;
    ev.row = pool_.region(id).row;
    ev.path = path;
    emit(ev);
    return id;
}

std::optional<u32> PumaAllocator::take_worst_fit() {
    auto sa = pool_.max_free_subarray();
    if (!sa) return std::nullopt;
    return take_traced(*sa, TracePath::worst_fit);
}

void PumaAllocator::rollback(const std::vector<u32>& taken) {
    for (auto it = taken.rbegin(); it != taken.rend(); ++it) {
        pool_.release_region(*it);
    }
    TraceEvent ev;
    ev.kind = TraceEvent::Kind::rollback;
    ev.n = taken.size();
    emit(ev);
}

Allocation PumaAllocator::finish(u64 size, std::vector<u32> taken, u64 hint) {
    const u64 region_bytes = pool_.region_bytes();
    Allocation a;
    a.id = next_id_++;
    a.length = size;
    a.backing_bytes = taken.size() * region_bytes;
    a.region_ids = std::move(taken);
    a.virtual_base = vas_.reserve(a.backing_bytes, region_bytes);
    a.pieces.reserve(a.region_ids.size());
    for (std::size_t i = 0; i < a.region_ids.size(); ++i) {
        const MemoryRegion& r = pool_.region(a.region_ids[i]);
        const u64 off = i * region_bytes;
        a.pieces.push_back({off, r.physical_base, region_bytes});
        vas_.map_piece(a.virtual_base + off, r.physical_base, region_bytes);
    }
    TraceEvent ev;
    ev.kind = TraceEvent::Kind::alloc_ok;
    ev.size = size;
    ev.vbase = a.virtual_base;
    ev.n = a.region_ids.size();
    ev.hint = hint;
    emit(ev);
    table_.insert(a);
    return a;
}

Allocation PumaAllocator::pim_alloc(u64 size) {
    ++op_seq_;
    if (!initialized_) {
        throw AllocError(AllocErrc::pool_not_initialized, "pool not initialized");
    }
    if (size == 0) {
        throw AllocError(AllocErrc::bad_size, "allocation size must be >= 1");
    }
    const u64 need = ceil_div(size, pool_.region_bytes());
    std::vector<u32> taken;
    taken.reserve(need);
    for (u64 i = 0; i < need; ++i) {
        auto id = take_worst_fit();
        if (!id) {
            rollback(taken);
            TraceEvent ev;
            ev.kind = TraceEvent::Kind::alloc_fail;
            ev.size = size;
            emit(ev);
            throw AllocError(AllocErrc::pool_exhausted, "out of pool memory");
        }
        taken.push_back(*id);
    }
    return finish(size, std::move(taken));
}

Allocation PumaAllocator::pim_alloc_align(u64 size, u64 hint_virtual_address) {
    ++op_seq_;
    if (!initialized_) {
        throw AllocError(AllocErrc::pool_not_initialized, "pool not initialized");
    }
    if (size == 0) {
        throw AllocError(AllocErrc::bad_size, "allocation size must be >= 1");
    }
    const Allocation* hint = table_.find(hint_virtual_address);
    if (hint == nullptr) {
        TraceEvent ev;
        ev.kind = TraceEvent::Kind::alloc_fail;
        ev.size = size;
        ev.hint = hint_virtual_address;
        emit(ev);
        throw AllocError(AllocErrc::unknown_hint, "unknown hint address");
    }

    const u64 need = ceil_div(size, pool_.region_bytes());
    const u64 mirrored = std::min<u64>(need, hint->region_ids.size());
    std::vector<u32> taken;
    taken.reserve(need);
    auto fail = [&]() -> AllocError {
        rollback(taken);
        TraceEvent ev;
        ev.kind = TraceEvent::Kind::alloc_fail;
        ev.size = size;
        ev.hint = hint_virtual_address;
        emit(ev);
        return AllocError(AllocErrc::pool_exhausted, "out of pool memory");
    };

    for (u64 i = 0; i < mirrored; ++i) {
        const u64 want = pool_.region(hint->region_ids[i]).subarray;
        if (pool_.free_count(want) > 0) {
            taken.push_back(take_traced(want, TracePath::align_hit));
        } else {
            auto sa = pool_.max_free_subarray();
            if (!sa) throw fail();
            taken.push_back(take_traced(*sa, TracePath::align_fallback));
        }
    }
    for (u64 i = mirrored; i < need; ++i) {
        auto id = take_worst_fit();
        if (!id) throw fail();
        taken.push_back(*id);
    }

    return finish(size, std::move(taken), hint_virtual_address);
}

void PumaAllocator::pim_free(u64 virtual_base) {
    ++op_seq_;
    const Allocation* a = table_.find(virtual_base);
    if (a == nullptr) {
        throw AllocError(AllocErrc::unknown_address, "free of unknown virtual base");
    }
    TraceEvent ev;
    ev.kind = TraceEvent::Kind::free_;
    ev.vbase = virtual_base;
    ev.n = a->region_ids.size();
    for (u32 id : a->region_ids) {
        pool_.release_region(id);
    }
    vas_.unmap_range(a->virtual_base, a->backing_bytes);
    table_.erase(virtual_base);
    emit(ev);
}

u64 PumaAllocator::resolve(u64 virtual_address) const {
    return vas_.resolve(virtual_address);
}

} // namespace pumasim
