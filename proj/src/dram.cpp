#include "pumasim/dram.hpp"

#include <algorithm>
#include <sstream>

namespace pumasim {

void DramGeometry::validate() const {
    const u64 fields[] = {channels,          ranks_per_channel, banks_per_rank,
                          subarrays_per_bank, rows_per_subarray, columns_per_row,
                          bytes_per_column};
    const char* names[] = {"channels",           "ranks_per_channel", "banks_per_rank",
                           "subarrays_per_bank", "rows_per_subarray", "columns_per_row",
                           "bytes_per_column"};
    for (int i = 0; i < 7; ++i) {
        if (!is_pow2(fields[i])) {
            throw ConfigError(std::string("geometry.") + names[i] +
                              " must be a power of two >= 1");
        }
    }
    if (address_bits() >= 58) {
        throw ConfigError("geometry capacity too large to simulate");
    }
}

const char* to_string(DramField f) {
    switch (f) {
    case DramField::column:   return "column";
    case DramField::row:      return "row";
    case DramField::subarray: return "subarray";
    case DramField::bank:     return "bank";
    case DramField::rank:     return "rank";
    case DramField::channel:  return "channel";
    }
    return "?";
}

u64 field_cardinality(const DramGeometry& g, DramField f) {
    switch (f) {
    case DramField::column:   return g.columns_per_row * g.bytes_per_column;
    case DramField::row:      return g.rows_per_subarray;
    case DramField::subarray: return g.subarrays_per_bank;
    case DramField::bank:     return g.banks_per_rank;
    case DramField::rank:     return g.ranks_per_channel;
    case DramField::channel:  return g.channels;
    }
    return 0;
}

AddressMapping AddressMapping::interleaved_default(const DramGeometry& g) {
    AddressMapping m;
    u32 bit = 0;
    const DramField order[] = {DramField::column, DramField::row,  DramField::subarray,
                               DramField::bank,   DramField::rank, DramField::channel};
    for (DramField f : order) {
        u64 n = field_cardinality(g, f);
        if (n == 1) continue;
        u32 w = log2_exact(n);
        m.entries.push_back({f, {bit, bit + w - 1}});
        bit += w;
    }
    return m;
}

MappingIssue probe_mapping(const DramGeometry& g, const AddressMapping& m,
                           std::string* detail) {
    auto fail = [&](MappingIssue issue, const std::string& msg) {
        if (detail) *detail = msg;
        return issue;
    };

    const u32 bits = g.address_bits();
    for (const auto& e : m.entries) {
        if (e.bits.lo > e.bits.hi || e.bits.hi >= bits) {
            std::ostringstream os;
            os << "invalid bit range " << e.bits.lo << "-" << e.bits.hi << " for "
               << to_string(e.field) << " (address space has " << bits << " bits)";
            return fail(MappingIssue::bad_range, os.str());
        }
    }

    std::vector<int> owner(bits, -1);
    for (const auto& e : m.entries) {
        for (u32 b = e.bits.lo; b <= e.bits.hi; ++b) {
            if (owner[b] >= 0) {
                std::ostringstream os;
                os << "overlapping bit ranges: bit " << b << " assigned to "
                   << to_string(static_cast<DramField>(owner[b])) << " and "
                   << to_string(e.field);
                return fail(MappingIssue::overlapping_bits, os.str());
            }
            owner[b] = static_cast<int>(e.field);
        }
    }
    for (u32 b = 0; b < bits; ++b) {
        if (owner[b] < 0) {
            std::ostringstream os;
            os << "uncovered bits: bit " << b << " is not assigned to any field";
            return fail(MappingIssue::uncovered_bits, os.str());
        }
    }

    for (int fi = 0; fi < kDramFieldCount; ++fi) {
        auto f = static_cast<DramField>(fi);
        u32 have = 0;
        for (const auto& e : m.entries) {
            if (e.field == f) have += e.bits.width();
        }
        u32 want = log2_exact(field_cardinality(g, f));
        if (have != want) {
            std::ostringstream os;
            os << "width mismatch: field " << to_string(f) << " has " << have
               << " bits, geometry requires " << want;
            return fail(MappingIssue::width_mismatch, os.str());
        }
    }

    const u32 region_bits = log2_exact(g.region_bytes());
    for (u32 b = 0; b < region_bits; ++b) {
        if (owner[b] != static_cast<int>(DramField::column)) {
            std::ostringstream os;
            os << "non-contiguous row regions: bit " << b << " below the region "
               << "boundary (" << region_bits << " bits) belongs to "
               << to_string(static_cast<DramField>(owner[b])) << ", not column";
            return fail(MappingIssue::noncontiguous_row_regions, os.str());
        }
    }

    if (detail) detail->clear();
    return MappingIssue::ok;
}

void validate_mapping(const DramGeometry& g, const AddressMapping& m) {
    std::string detail;
    if (probe_mapping(g, m, &detail) != MappingIssue::ok) {
        throw ConfigError("invalid address mapping: " + detail);
    }
}

AddressTranslator::AddressTranslator(const DramGeometry& g, const AddressMapping& m)
    : geom_(g), map_(m) {
    geom_.validate();
    validate_mapping(geom_, map_);

    // Per field: ranges sorted by descending bit position; the highest range
    // holds the most significant part of the field value.
    for (int fi = 0; fi < kDramFieldCount; ++fi) {
        auto f = static_cast<DramField>(fi);
        std::vector<BitRange> ranges;
        for (const auto& e : map_.entries) {
            if (e.field == f) ranges.push_back(e.bits);
        }
        std::sort(ranges.begin(), ranges.end(),
                  [](const BitRange& a, const BitRange& b) { return a.lo > b.lo; });
        u32 below = 0;
        for (const auto& r : ranges) below += r.width();
        for (const auto& r : ranges) {
            below -= r.width();
            plan_[fi].push_back({r.lo, r.width(), below});
        }
    }
}

u64 AddressTranslator::extract(u64 pa, DramField f) const {
    u64 v = 0;
    for (const auto& c : plan_[static_cast<int>(f)]) {
        u64 mask = (c.width == 64) ? ~0ull : ((1ull << c.width) - 1);
        v |= ((pa >> c.addr_lo) & mask) << c.field_shift;
    }
    return v;
}

DramCoordinate AddressTranslator::decode(u64 pa) const {
    if (pa >= geom_.total_bytes()) {
        throw AllocError(AllocErrc::unmapped_address,
                         "physical address out of range");
    }
    DramCoordinate c;
    c.column_byte = extract(pa, DramField::column);
    c.row = extract(pa, DramField::row);
    c.subarray = extract(pa, DramField::subarray);
    c.bank = extract(pa, DramField::bank);
    c.rank = extract(pa, DramField::rank);
    c.channel = extract(pa, DramField::channel);
    return c;
}

u64 AddressTranslator::encode(const DramCoordinate& c) const {
    const std::pair<DramField, u64> fields[] = {
        {DramField::column, c.column_byte}, {DramField::row, c.row},
        {DramField::subarray, c.subarray},  {DramField::bank, c.bank},
        {DramField::rank, c.rank},          {DramField::channel, c.channel},
    };
    u64 pa = 0;
    for (const auto& [f, v] : fields) {
        if (v >= field_cardinality(geom_, f)) {
            throw AllocError(AllocErrc::unmapped_address,
                             std::string("coordinate out of bounds: ") + to_string(f));
        }
        for (const auto& ch : plan_[static_cast<int>(f)]) {
            u64 mask = (ch.width == 64) ? ~0ull : ((1ull << ch.width) - 1);
            pa |= ((v >> ch.field_shift) & mask) << ch.addr_lo;
        }
    }
    return pa;
}

u64 AddressTranslator::compose_subarray_id(const DramCoordinate& c) const {
    return ((c.channel * geom_.ranks_per_channel + c.rank) * geom_.banks_per_rank +
            c.bank) *
               geom_.subarrays_per_bank +
           c.subarray;
}

u64 AddressTranslator::global_subarray_id(u64 pa) const {
    return compose_subarray_id(decode(pa));
}

DramCoordinate AddressTranslator::decompose_subarray_id(u64 id) const {
    DramCoordinate c;
    c.subarray = id % geom_.subarrays_per_bank;
    id /= geom_.subarrays_per_bank;
    c.bank = id % geom_.banks_per_rank;
    id /= geom_.banks_per_rank;
    c.rank = id % geom_.ranks_per_channel;
    c.channel = id / geom_.ranks_per_channel;
    return c;
}

} // namespace pumasim
