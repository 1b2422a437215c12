#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nttacc/layout.hpp"

namespace nttacc {

enum class OpKind { ntt, intt, mult };

std::string to_string(OpKind op);
OpKind parse_op_kind(const std::string& name);

/// Read, butterfly and write latencies in cycles. The INTT butterfly is one
/// cycle deeper than the NTT butterfly (the extra halving stage).
struct PipelineConfig {
  unsigned delay_read = 0;
  unsigned delay_write = 0;
  unsigned delay_pe_ntt = 0;
  unsigned delay_pe_intt = 1;
  unsigned delay_pe_mult = 0;

  [[nodiscard]] unsigned delay_pe(OpKind op) const;
  /// delay_pe(op) + delay_read + delay_write
  [[nodiscard]] unsigned total(OpKind op) const;

  /// Throws if delay_pe_intt != delay_pe_ntt + 1.
  void validate() const;

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

/// Named calibrations: "q32" (sums 19/20/18), "q14" (sums 15/16/14) and
/// "ideal" (zero-latency NTT).
PipelineConfig pipeline_profile(const std::string& name);

struct CellRef {
  std::uint8_t array = 0;  // 0 = operand a, 1 = operand b
  std::uint32_t bank = 0;
  std::uint32_t address = 0;

  friend bool operator==(const CellRef&, const CellRef&) = default;
};

/// One PE's work in one issue cycle.
struct Slot {
  std::uint32_t cycle = 0;
  std::uint32_t pe = 0;
  std::uint32_t stage = 0;  // execution order
  std::uint32_t round = 0;
  std::uint32_t index0 = 0;
  std::uint32_t index1 = 0;
  CellRef read0, read1;
  CellRef write0, write1;
  bool has_write1 = true;
  bool has_twiddle = true;
  std::uint32_t tw_idx = 0;
  std::uint32_t tw_bank = 0;     // lane within the full-rate cycle
  std::uint32_t tw_address = 0;  // full-rate cycle index
};

struct StageSpan {
  unsigned stage = 0;    // execution order
  unsigned pattern = 0;  // CT stage whose pairing this stage uses
  unsigned phase = 0;
  std::size_t first_cycle = 0;
  std::size_t cycles = 0;
};

struct RoundSpan {
  unsigned stage = 0;
  std::size_t round = 0;
  std::size_t index_lo = 0;  // coefficient index range [lo, hi)
  std::size_t index_hi = 0;
  std::size_t first_cycle = 0;
  std::size_t last_cycle = 0;
};

struct ScheduleTrace {
  OpKind op = OpKind::ntt;
  std::size_t degree = 0;
  std::size_t banks = 0;
  std::size_t npe = 0;
  LayoutKind layout = LayoutKind::shifted;
  std::size_t issue_cycles = 0;
  std::vector<Slot> slots;                // ordered by cycle, then PE
  std::vector<std::size_t> cycle_offset;  // slots of cycle c: [offset[c], offset[c+1])
  std::vector<StageSpan> stages;
  std::vector<RoundSpan> rounds;

  [[nodiscard]] std::span<const Slot> cycle(std::size_t c) const {
    return {slots.data() + cycle_offset[c], slots.data() + cycle_offset[c + 1]};
  }
  [[nodiscard]] std::size_t twiddle_depth() const;
};

/// Valid PE counts are the powers of two up to n/2.
bool valid_npe(std::size_t degree, std::size_t npe);
void check_npe(std::size_t degree, std::size_t npe);

ScheduleTrace build_schedule(std::size_t degree, std::size_t npe, OpKind op,
                             LayoutKind layout = LayoutKind::shifted, std::uint8_t array = 0);

struct BoundReport {
  std::size_t bound = 0;        // producer-to-consumer issue distance
  unsigned total_delay = 0;     // read + pe + write
  long long slack = 0;          // bound - total_delay
  bool satisfied = true;        // total_delay < bound
  bool applicable = true;       // false for mult (no inter-stage dependency)
};

BoundReport check_raw_bound(std::size_t degree, std::size_t npe, const PipelineConfig& pipeline,
                            OpKind op = OpKind::ntt);

struct ScheduleStats {
  std::vector<std::size_t> cycles_per_stage;
  std::vector<std::size_t> cycles_per_round;  // in trace.rounds order
  std::vector<double> pe_utilization;         // per issue cycle
  double mean_utilization = 0.0;
  std::vector<std::vector<std::size_t>> reads_per_bank;   // [array][bank]
  std::vector<std::vector<std::size_t>> writes_per_bank;  // [array][bank]
};

ScheduleStats trace_stats(const ScheduleTrace& trace);

/// cycle,pe,stage,round,r0_bank,r0_addr,r1_bank,r1_addr,w0_bank,w0_addr,w1_bank,w1_addr,tw_idx
void write_csv(std::ostream& os, const ScheduleTrace& trace);

}  // namespace nttacc
