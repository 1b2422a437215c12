#include "nttacc/schedule.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "nttacc/ntt.hpp"

namespace nttacc {

std::string to_string(OpKind op) {
  switch (op) {
    case OpKind::ntt: return "ntt";
    case OpKind::intt: return "intt";
    case OpKind::mult: return "mult";
  }
  return "?";
}

OpKind parse_op_kind(const std::string& name) {
  if (name == "ntt") return OpKind::ntt;
  if (name == "intt") return OpKind::intt;
  if (name == "mult") return OpKind::mult;
  throw std::invalid_argument("unknown operation '" + name + "' (expected ntt, intt or mult)");
}

unsigned PipelineConfig::delay_pe(OpKind op) const {
  switch (op) {
    case OpKind::ntt: return delay_pe_ntt;
    case OpKind::intt: return delay_pe_intt;
    case OpKind::mult: return delay_pe_mult;
  }
  return 0;
}

unsigned PipelineConfig::total(OpKind op) const { return delay_read + delay_write + delay_pe(op); }

void PipelineConfig::validate() const {
  if (delay_pe_intt != delay_pe_ntt + 1) {
    throw std::invalid_argument("pipeline: delay_pe_intt must equal delay_pe_ntt + 1");
  }
}

PipelineConfig pipeline_profile(const std::string& name) {
  if (name == "q32") return {2, 2, 15, 16, 14};
  if (name == "q14") return {2, 2, 11, 12, 10};
  if (name == "ideal") return {0, 0, 0, 1, 0};
  throw std::invalid_argument("unknown pipeline profile '" + name + "' (expected q32, q14 or ideal)");
}

std::size_t ScheduleTrace::twiddle_depth() const {
  if (op == OpKind::mult) return 0;
  const std::size_t full_rate_cycles = issue_cycles / (banks / (2 * npe));
  return std::max(degree / 2, full_rate_cycles);
}

bool valid_npe(std::size_t degree, std::size_t npe) {
  const std::size_t n = bank_count_for(degree);
  return npe >= 1 && (npe & (npe - 1)) == 0 && npe <= n / 2;
}

void check_npe(std::size_t degree, std::size_t npe) {
  if (!valid_npe(degree, npe)) {
    throw std::invalid_argument("Npe=" + std::to_string(npe) + " invalid for N=" +
                                std::to_string(degree) +
                                ": must be a power of two <= n/2 = " +
                                std::to_string(bank_count_for(degree) / 2));
  }
}

namespace {

struct Butterfly {
  std::uint32_t i0;
  std::uint32_t i1;
  std::uint32_t round;
};

class TraceBuilder {
 public:
  TraceBuilder(std::size_t degree, std::size_t npe, OpKind op, LayoutKind layout, std::uint8_t array)
      : map_(degree, layout), array_(array) {
    trace_.op = op;
    trace_.degree = degree;
    trace_.banks = map_.banks();
    trace_.npe = npe;
    trace_.layout = layout;
  }

  CellRef cell(std::size_t i, std::uint8_t array) const {
    const Placement p = map_.place(i);
    return {array, static_cast<std::uint32_t>(p.bank), static_cast<std::uint32_t>(p.address)};
  }

  // Spreads one full-rate cycle (n/2 butterflies) over n/(2 Npe) issue cycles.
  void emit_full_rate(const std::vector<Butterfly>& list, unsigned stage, unsigned pattern) {
    const std::size_t npe = trace_.npe;
    for (std::size_t pos = 0; pos < list.size(); ++pos) {
      if (pos % npe == 0) trace_.cycle_offset.push_back(trace_.slots.size());
      const Butterfly& b = list[pos];
      Slot s;
      s.cycle = static_cast<std::uint32_t>(trace_.issue_cycles + pos / npe);
      s.pe = static_cast<std::uint32_t>(pos % npe);
      s.stage = stage;
      s.round = b.round;
      s.index0 = b.i0;
      s.index1 = b.i1;
      s.read0 = s.write0 = cell(b.i0, array_);
      s.read1 = s.write1 = cell(b.i1, array_);
      s.tw_idx = static_cast<std::uint32_t>((std::size_t{1} << pattern) + b.round);
      s.tw_bank = static_cast<std::uint32_t>(pos);
      s.tw_address = static_cast<std::uint32_t>(full_rate_cycles_);
      trace_.slots.push_back(s);
      note_round(stage, b);
    }
    trace_.issue_cycles += (list.size() + npe - 1) / npe;
    ++full_rate_cycles_;
  }

  void note_round(unsigned stage, const Butterfly& b) {
    const std::size_t cyc = trace_.slots.back().cycle;
    const std::size_t span = trace_.degree >> trace_.stages.back().pattern;
    if (trace_.rounds.empty() || trace_.rounds.back().stage != stage ||
        trace_.rounds.back().round != b.round) {
      RoundSpan r;
      r.stage = stage;
      r.round = b.round;
      r.index_lo = b.round * span;
      r.index_hi = r.index_lo + span;
      r.first_cycle = cyc;
      trace_.rounds.push_back(r);
    }
    trace_.rounds.back().last_cycle = cyc;
  }

  void build_transform() {
    const std::size_t N = trace_.degree;
    const std::size_t n = trace_.banks;
    const unsigned L = log2_exact(N);
    const unsigned h = L / 2;
    for (unsigned stage = 0; stage < L; ++stage) {
      const unsigned pattern = trace_.op == OpKind::ntt ? stage : L - 1 - stage;
      StageSpan span;
      span.stage = stage;
      span.pattern = pattern;
      span.phase = pattern < h ? 0 : 1;
      span.first_cycle = trace_.issue_cycles;
      trace_.stages.push_back(span);

      std::vector<Butterfly> list;
      list.reserve(n / 2);
      if (pattern < h) {
        // Round r spans rows [r*2g, (r+1)*2g); rows rho and rho+g pair up.
        // Full-rate cycle d takes columns c = d (mod 2g): 2^pattern column
        // segments, each read down g rows, which lands on n distinct banks.
        const std::size_t g = n >> (pattern + 1);
        const std::size_t rounds = std::size_t{1} << pattern;
        for (std::size_t r = 0; r < rounds; ++r) {
          for (std::size_t d = 0; d < 2 * g; ++d) {
            list.clear();
            for (std::size_t c = d; c < n; c += 2 * g) {
              for (std::size_t u = 0; u < g; ++u) {
                const std::size_t row = r * 2 * g + u;
                list.push_back({static_cast<std::uint32_t>(row * n + c),
                                static_cast<std::uint32_t>((row + g) * n + c),
                                static_cast<std::uint32_t>(r)});
              }
            }
            emit_full_rate(list, stage, pattern);
          }
        }
      } else {
        // Pairs sit inside one row; one row per full-rate cycle.
        const std::size_t gap = N >> (pattern + 1);
        for (std::size_t row = 0; row < n; ++row) {
          list.clear();
          for (std::size_t c = 0; c < n; ++c) {
            if (c % (2 * gap) >= gap) continue;
            const std::size_t i0 = row * n + c;
            list.push_back({static_cast<std::uint32_t>(i0), static_cast<std::uint32_t>(i0 + gap),
                            static_cast<std::uint32_t>(i0 / (2 * gap))});
          }
          emit_full_rate(list, stage, pattern);
        }
      }
      trace_.stages.back().cycles = trace_.issue_cycles - span.first_cycle;
    }
  }

  void build_mult() {
    const std::size_t N = trace_.degree;
    const std::size_t npe = trace_.npe;
    trace_.stages.push_back({0, 0, 1, 0, 0});
    trace_.rounds.push_back({0, 0, 0, N, 0, 0});
    for (std::size_t i = 0; i < N; ++i) {
      if (i % npe == 0) trace_.cycle_offset.push_back(trace_.slots.size());
      Slot s;
      s.cycle = static_cast<std::uint32_t>(i / npe);
      s.pe = static_cast<std::uint32_t>(i % npe);
      s.index0 = s.index1 = static_cast<std::uint32_t>(i);
      s.read0 = s.write0 = cell(i, 0);
      s.read1 = cell(i, 1);
      s.has_write1 = false;
      s.has_twiddle = false;
      trace_.slots.push_back(s);
    }
    trace_.issue_cycles = N / npe;
    trace_.stages.back().cycles = trace_.issue_cycles;
    trace_.rounds.back().last_cycle = trace_.issue_cycles - 1;
  }

  ScheduleTrace finish() {
    trace_.cycle_offset.push_back(trace_.slots.size());
    return std::move(trace_);
  }

 private:
  LayoutMap map_;
  std::uint8_t array_;
  ScheduleTrace trace_;
  std::size_t full_rate_cycles_ = 0;
};

}  // namespace

ScheduleTrace build_schedule(std::size_t degree, std::size_t npe, OpKind op, LayoutKind layout,
                             std::uint8_t array) {
  check_npe(degree, npe);
  if (array > 1) throw std::invalid_argument("build_schedule: array must be 0 or 1");
  TraceBuilder builder(degree, npe, op, layout, array);
  if (op == OpKind::mult) {
    builder.build_mult();
  } else {
    builder.build_transform();
  }
  return builder.finish();
}

BoundReport check_raw_bound(std::size_t degree, std::size_t npe, const PipelineConfig& pipeline,
                            OpKind op) {
  check_npe(degree, npe);
  const std::size_t n = bank_count_for(degree);
  BoundReport report;
  report.total_delay = pipeline.total(op);
  if (op == OpKind::mult) {
    report.applicable = false;
    return report;
  }
  report.bound = (n / 2) * (n / (2 * npe));
  report.slack = static_cast<long long>(report.bound) - static_cast<long long>(report.total_delay);
  report.satisfied = report.slack > 0;
  return report;
}

ScheduleStats trace_stats(const ScheduleTrace& trace) {
  ScheduleStats stats;
  for (const StageSpan& s : trace.stages) stats.cycles_per_stage.push_back(s.cycles);
  for (const RoundSpan& r : trace.rounds) stats.cycles_per_round.push_back(r.last_cycle - r.first_cycle + 1);
  stats.reads_per_bank.assign(2, std::vector<std::size_t>(trace.banks, 0));
  stats.writes_per_bank.assign(2, std::vector<std::size_t>(trace.banks, 0));
  double sum = 0.0;
  for (std::size_t c = 0; c < trace.issue_cycles; ++c) {
    const auto slots = trace.cycle(c);
    const double u = static_cast<double>(slots.size()) / static_cast<double>(trace.npe);
    stats.pe_utilization.push_back(u);
    sum += u;
    for (const Slot& s : slots) {
      ++stats.reads_per_bank[s.read0.array][s.read0.bank];
      ++stats.reads_per_bank[s.read1.array][s.read1.bank];
      ++stats.writes_per_bank[s.write0.array][s.write0.bank];
      if (s.has_write1) ++stats.writes_per_bank[s.write1.array][s.write1.bank];
    }
  }
  stats.mean_utilization = trace.issue_cycles ? sum / static_cast<double>(trace.issue_cycles) : 0.0;
  return stats;
}

void write_csv(std::ostream& os, const ScheduleTrace& trace) {
  os << "cycle,pe,stage,round,r0_bank,r0_addr,r1_bank,r1_addr,w0_bank,w0_addr,w1_bank,w1_addr,tw_idx\n";
  for (const Slot& s : trace.slots) {
    os << s.cycle << ',' << s.pe << ',' << s.stage << ',' << s.round << ',' << s.read0.bank << ','
       << s.read0.address << ',' << s.read1.bank << ',' << s.read1.address << ',' << s.write0.bank
       << ',' << s.write0.address << ',';
    if (s.has_write1) os << s.write1.bank << ',' << s.write1.address;
    else os << ',';
    os << ',';
    if (s.has_twiddle) os << s.tw_idx;
    os << '\n';
  }
}

}  // namespace nttacc
