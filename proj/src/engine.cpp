#include "pumasim/engine.hpp"

#include <algorithm>
#include <sstream>

namespace pumasim {

const char* to_string(PudOpKind k) {
    switch (k) {
    case PudOpKind::row_init_zero: return "row_init_zero";
    case PudOpKind::row_copy:      return "row_copy";
    case PudOpKind::and_:          return "and";
    case PudOpKind::or_:           return "or";
    case PudOpKind::not_:          return "not";
    }
    return "?";
}

int operand_arity(PudOpKind k) {
    switch (k) {
    case PudOpKind::row_init_zero: return 1;
    case PudOpKind::row_copy:
    case PudOpKind::not_:          return 2;
    case PudOpKind::and_:
    case PudOpKind::or_:           return 3;
    }
    return 0;
}

PudOperation PudOperation::make(PudOpKind kind, std::vector<OperandRef> operands,
                                u64 element_count) {
    if (static_cast<int>(operands.size()) != operand_arity(kind)) {
        throw ConfigError("operand count does not match operation kind");
    }
    if (element_count == 0) {
        throw ConfigError("element_count must be >= 1");
    }
    for (const auto& o : operands) {
        if (element_count > o.length) {
            throw ConfigError("element_count exceeds an operand's length");
        }
    }
    return PudOperation{kind, std::move(operands), element_count};
}

const char* to_string(SlotVerdict v) {
    return v == SlotVerdict::in_dram ? "in_dram" : "fallback";
}

const char* to_string(FallbackReason r) {
    switch (r) {
    case FallbackReason::none:              return "";
    case FallbackReason::subarray_mismatch: return "subarray_mismatch";
    case FallbackReason::row_misalignment:  return "row_misalignment";
    }
    return "?";
}

u64 ExecutabilityReport::in_dram_slots() const {
    u64 n = 0;
    for (const auto& s : slots) {
        if (s.verdict == SlotVerdict::in_dram) ++n;
    }
    return n;
}

double ExecutabilityReport::pim_fraction() const {
    if (slots.empty()) return 0.0;
    return static_cast<double>(in_dram_slots()) / static_cast<double>(slots.size());
}

std::string ExecutabilityReport::to_csv() const {
    std::ostringstream os;
    os << "slot,verdict,reason\n";
    for (std::size_t i = 0; i < slots.size(); ++i) {
        os << i << "," << to_string(slots[i].verdict) << ","
           << to_string(slots[i].reason) << "\n";
    }
    return os.str();
}

void CostModel::validate() const {
    if (t_dram_row_op <= 0 || t_ambit_row_op <= 0 || t_cpu_per_byte <= 0) {
        throw ConfigError("cost model parameters must all be > 0");
    }
}

ExecutabilityReport check_executability(const PudOperation& op,
                                        const VirtualAddressSpace& vas,
                                        const AddressTranslator& xlat) {
    const u64 region = xlat.geometry().region_bytes();
    const u64 n_slots = ceil_div(op.element_count, region);

    ExecutabilityReport report;
    report.element_count = op.element_count;
    report.region_bytes = region;
    report.slots.resize(n_slots);

    std::vector<VirtualAddressSpace::Run> runs(op.operands.size());
    for (u64 slot = 0; slot < n_slots; ++slot) {
        const u64 off = slot * region;
        const u64 slot_bytes = std::min(region, op.element_count - off);

        for (std::size_t i = 0; i < op.operands.size(); ++i) {
            runs[i] = vas.resolve_run(op.operands[i].virtual_base + off, slot_bytes);
        }

        SlotReport& sr = report.slots[slot];
        sr.verdict = SlotVerdict::fallback;
        bool aligned = true;
        for (const auto& r : runs) {
            if (r.pa % region != 0) aligned = false;
        }
        if (!aligned) {
            sr.reason = FallbackReason::row_misalignment;
            continue;
        }
        bool co_located = true;
        const u64 sa0 = xlat.global_subarray_id(runs[0].pa);
        for (std::size_t i = 1; i < runs.size(); ++i) {
            if (xlat.global_subarray_id(runs[i].pa) != sa0) co_located = false;
        }
        if (!co_located) {
            sr.reason = FallbackReason::subarray_mismatch;
            continue;
        }
        bool covered = true;
        for (const auto& r : runs) {
            if (r.len < slot_bytes) covered = false;
        }
        if (!covered) {
            sr.reason = FallbackReason::row_misalignment;
            continue;
        }
        sr.verdict = SlotVerdict::in_dram;
        sr.reason = FallbackReason::none;
    }
    return report;
}

double execute(const PudOperation& op, const ExecutabilityReport& report,
               const CostModel& cost) {
    cost.validate();
    const bool copy_like =
        op.kind == PudOpKind::row_init_zero || op.kind == PudOpKind::row_copy;
    const double row_cost = copy_like ? cost.t_dram_row_op : cost.t_ambit_row_op;
    const double fallback_cost =
        static_cast<double>(report.region_bytes) * cost.t_cpu_per_byte;

    double latency = 0.0;
    for (const auto& s : report.slots) {
        latency += (s.verdict == SlotVerdict::in_dram) ? row_cost : fallback_cost;
    }
    return latency;
}

} // namespace pumasim
