#pragma once

#include <string>
#include <vector>

#include "pumasim/alloc.hpp"

namespace pumasim {

enum class PudOpKind : u32 { row_init_zero, row_copy, and_, or_, not_ };

const char* to_string(PudOpKind k);
int operand_arity(PudOpKind k); // zero: 1, copy/not: 2, and/or: 3

struct OperandRef {
    u64 virtual_base = 0;
    u64 length = 0;
};

inline OperandRef operand(const Allocation& a) { return {a.virtual_base, a.length}; }

// One in-memory operation over whole rows. Operand order: zero {dst};
// copy/not {src, dst}; and/or {srcA, srcB, dst}.
struct PudOperation {
    PudOpKind kind{};
    std::vector<OperandRef> operands;
    u64 element_count = 0; // bytes

    static PudOperation make(PudOpKind kind, std::vector<OperandRef> operands,
                             u64 element_count);
};

enum class SlotVerdict : u32 { in_dram, fallback };
enum class FallbackReason : u32 { none, subarray_mismatch, row_misalignment };

const char* to_string(SlotVerdict v);
const char* to_string(FallbackReason r);

struct SlotReport {
    SlotVerdict verdict{};
    FallbackReason reason = FallbackReason::none;
};

struct ExecutabilityReport {
    u64 element_count = 0;
    u64 region_bytes = 0;
    std::vector<SlotReport> slots; // one per row slot

    u64 in_dram_slots() const;
    double pim_fraction() const;
    std::string to_csv() const; // slot,verdict,reason
};

// Latency parameters, in abstract time units. The per-row Boolean cost
// covers operand staging and the triple-row activation as one number.
struct CostModel {
    double t_dram_row_op = 10.0;  // row copy / init
    double t_ambit_row_op = 30.0; // Boolean row op
    double t_cpu_per_byte = 1.0;  // fallback compute incl. transfer

    void validate() const; // all parameters > 0
};

// Per-row-slot verdict: in-DRAM iff every operand's slot base is
// row-aligned, all operands' slots sit in the same global subarray, and each
// slot is backed by one physically contiguous run covering it (a full region,
// or the partial extent of the tail slot).
ExecutabilityReport check_executability(const PudOperation& op,
                                        const VirtualAddressSpace& vas,
                                        const AddressTranslator& xlat);

// Modeled latency: in-DRAM slots cost one row op; fallback slots move and
// process their full row footprint on the CPU.
double execute(const PudOperation& op, const ExecutabilityReport& report,
               const CostModel& cost);

} // namespace pumasim
