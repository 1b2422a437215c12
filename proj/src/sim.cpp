#include "nttacc/sim.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <ostream>
#include <tuple>

#include "json.hpp"

namespace nttacc {

std::string to_string(HazardPolicy policy) {
  return policy == HazardPolicy::stall ? "stall" : "fail-fast";
}

std::string to_string(SimOp op) {
  switch (op) {
    case SimOp::ntt: return "ntt";
    case SimOp::intt: return "intt";
    case SimOp::polymul: return "polymul";
  }
  return "?";
}

HazardPolicy parse_hazard_policy(const std::string& name) {
  if (name == "stall") return HazardPolicy::stall;
  if (name == "fail-fast") return HazardPolicy::fail_fast;
  throw std::invalid_argument("unknown hazard policy '" + name + "' (expected stall or fail-fast)");
}

SimOp parse_sim_op(const std::string& name) {
  if (name == "ntt") return SimOp::ntt;
  if (name == "intt") return SimOp::intt;
  if (name == "polymul") return SimOp::polymul;
  throw std::invalid_argument("unknown simulation op '" + name + "' (expected ntt, intt or polymul)");
}

std::string to_string(HazardKind kind) {
  switch (kind) {
    case HazardKind::write_conflict: return "write_conflict";
    case HazardKind::raw: return "raw";
    case HazardKind::read_conflict: return "read_conflict";
    case HazardKind::twiddle_conflict: return "twiddle_conflict";
  }
  return "?";
}

bool operator<(const HazardEvent& a, const HazardEvent& b) {
  return std::tuple(a.cycle, a.kind, a.cell.array, a.cell.bank, a.cell.address, a.group, a.detail) <
         std::tuple(b.cycle, b.kind, b.cell.array, b.cell.bank, b.cell.address, b.group, b.detail);
}

HazardError::HazardError(HazardEvent event)
    : std::runtime_error(to_string(event.kind) + " hazard at cycle " + std::to_string(event.cycle) +
                         " (array " + std::to_string(event.cell.array) + ", bank " +
                         std::to_string(event.cell.bank) + ", address " +
                         std::to_string(event.cell.address) + ")"),
      event_(event) {}

void SimConfig::validate() const {
  bank_count_for(degree);
  check_npe(degree, npe);
  pipeline.validate();
  if (basis.size() == 0) throw std::invalid_argument("sim: empty modulus chain");
  for (const Modulus& mod : basis.moduli) {
    if (!mod.g || (mod.q - 1) % (2 * degree) != 0) {
      throw std::invalid_argument("sim: modulus " + std::to_string(mod.q) + " is not NTT-friendly for N=" +
                                  std::to_string(degree));
    }
  }
}

// ---------------------------------------------------------------------------
// BankedMemory

BankedMemory::BankedMemory(std::size_t banks, std::size_t depth)
    : banks_(banks),
      depth_(depth),
      cells_(banks * depth, 0),
      ready_(banks * depth, 0),
      read_claimed_(banks, 0),
      write_claimed_(banks, 0) {}

std::size_t BankedMemory::slot(std::size_t bank, std::size_t address) const {
  if (bank >= banks_ || address >= depth_) throw std::out_of_range("banked memory: cell out of range");
  return bank * depth_ + address;
}

bool BankedMemory::claim_read(std::size_t bank, std::size_t cycle) {
  if (read_claimed_.at(bank) == cycle + 1) return false;
  read_claimed_[bank] = cycle + 1;
  return true;
}

bool BankedMemory::claim_write(std::size_t bank, std::size_t cycle) {
  if (write_claimed_.at(bank) == cycle + 1) return false;
  write_claimed_[bank] = cycle + 1;
  return true;
}

u64 BankedMemory::value(std::size_t bank, std::size_t address) const { return cells_[slot(bank, address)]; }

std::size_t BankedMemory::ready_cycle(std::size_t bank, std::size_t address) const {
  return ready_[slot(bank, address)];
}

void BankedMemory::store(std::size_t bank, std::size_t address, u64 v, std::size_t ready) {
  const std::size_t s = slot(bank, address);
  cells_[s] = v;
  ready_[s] = ready;
}

void BankedMemory::reserve(std::size_t bank, std::size_t address, std::size_t ready) {
  ready_[slot(bank, address)] = ready;
}

void BankedMemory::reset_ready() {
  std::fill(ready_.begin(), ready_.end(), 0);
  std::fill(read_claimed_.begin(), read_claimed_.end(), 0);
  std::fill(write_claimed_.begin(), write_claimed_.end(), 0);
}

// ---------------------------------------------------------------------------
// CbuModel

CbuModel::CbuModel(OpKind mode, unsigned latency, const Modulus& mod)
    : mode_(mode), latency_(latency), mod_(mod) {}

Pair CbuModel::compute(u64 a, u64 b, u64 twiddle) const {
  switch (mode_) {
    case OpKind::ntt: return ct_butterfly(a, b, twiddle, mod_);
    case OpKind::intt: return gs_butterfly(a, b, twiddle, mod_);
    case OpKind::mult: return {barrett_mul_hw(a, b, mod_), 0};
  }
  return {0, 0};
}

std::optional<CbuModel::Result> CbuModel::retire(std::size_t cycle) {
  if (in_flight_.empty() || in_flight_.front().write_cycle != cycle) return std::nullopt;
  Result r = std::move(in_flight_.front());
  in_flight_.pop_front();
  return r;
}

// ---------------------------------------------------------------------------
// Dynamic replay

namespace {

struct Channel {
  Modulus mod;
  TwiddleTable tw;
  std::vector<BankedMemory> mem;  // operand arrays a and b
};

void load(BankedMemory& mem, const LayoutMap& map, const std::vector<u64>& coeffs) {
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const Placement p = map.place(i);
    mem.store(p.bank, p.address, coeffs[i], 0);
  }
}

std::vector<u64> unload(const BankedMemory& mem, const LayoutMap& map) {
  std::vector<u64> out(map.degree());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Placement p = map.place(i);
    out[i] = mem.value(p.bank, p.address);
  }
  return out;
}

class OpRunner {
 public:
  OpRunner(const ScheduleTrace& trace, Channel& ch, const PipelineConfig& pipeline, unsigned setup,
           HazardPolicy policy)
      : trace_(trace),
        ch_(ch),
        latency_(pipeline.total(trace.op)),
        setup_(setup),
        policy_(policy),
        cbu_(trace.op, latency_, ch.mod),
        twiddles_(std::max<std::size_t>(trace.banks / 2, 1), std::max<std::size_t>(trace.twiddle_depth(), 1)) {
    const std::vector<u64>& table = trace.op == OpKind::intt ? ch.tw.inverse : ch.tw.forward;
    for (const Slot& s : trace.slots) {
      if (s.has_twiddle) twiddles_.store(s.tw_bank, s.tw_address, table[s.tw_idx], 0);
    }
    report_.op = trace.op;
    report_.issue_cycles = trace.issue_cycles;
    report_.per_stage.resize(trace.stages.size());
    for (std::size_t i = 0; i < trace.stages.size(); ++i) report_.per_stage[i].stage = trace.stages[i].stage;
  }

  OpReport run() {
    for (auto& m : ch_.mem) m.reset_ready();
    std::size_t cycle = setup_;
    std::size_t k = 0;
    bool reading = false;
    bool raw_reported = false;
    std::vector<bool> served, denied;
    std::vector<u64> operands;
    std::size_t last_write = setup_;
    bool wrote = false;

    while (k < trace_.issue_cycles || !cbu_.idle()) {
      if (k < trace_.issue_cycles) {
        const auto slots = trace_.cycle(k);
        const std::size_t stage_idx = slots.front().stage;
        if (!reading) {
          std::size_t need = 0;
          std::vector<HazardEvent> raw;
          for (const Slot& s : slots) {
            for (const CellRef& c : {s.read0, s.read1}) {
              const std::size_t ready = ch_.mem[c.array].ready_cycle(c.bank, c.address);
              if (ready > cycle) raw.push_back({HazardKind::raw, cycle, k, c, ready});
              need = std::max(need, ready);
            }
          }
          if (!raw_reported) {
            record(raw);
            raw_reported = true;
          }
          if (need > cycle) {
            ++report_.stall_cycles;
            ++report_.per_stage[stage_idx].stall_cycles;
          } else {
            reading = true;
            served.assign(2 * slots.size(), false);
            denied.assign(2 * slots.size(), false);
            operands.assign(2 * slots.size(), 0);
          }
        }
        if (reading) {
          std::map<std::pair<std::uint8_t, std::uint32_t>, HazardEvent> conflicts;
          bool all = true;
          for (std::size_t i = 0; i < served.size(); ++i) {
            if (served[i]) continue;
            const Slot& s = slots[i / 2];
            const CellRef& c = i % 2 == 0 ? s.read0 : s.read1;
            if (ch_.mem[c.array].claim_read(c.bank, cycle)) {
              served[i] = true;
              operands[i] = ch_.mem[c.array].value(c.bank, c.address);
              continue;
            }
            all = false;
            if (!denied[i]) {
              denied[i] = true;
              auto [it, fresh] = conflicts.try_emplace({c.array, c.bank},
                                                      HazardEvent{HazardKind::read_conflict, cycle, k, c, 0});
              ++it->second.detail;
            }
          }
          std::vector<HazardEvent> events;
          for (auto& [key, e] : conflicts) {
            report_.bank_conflicts += e.detail;
            events.push_back(e);
          }
          record(events);
          if (all) {
            issue(slots, operands, cycle, k);
            ++k;
            reading = false;
            raw_reported = false;
          } else {
            ++report_.conflict_cycles;
          }
        }
      }
      // Writes land after this cycle's reads; RAW stamps keep readers off them.
      if (auto r = cbu_.retire(cycle)) {
        retire(*r, cycle);
        last_write = cycle;
        wrote = true;
      }
      ++cycle;
    }
    report_.total_cycles = wrote ? last_write + 1 : setup_;
    const std::size_t window = report_.issue_cycles + report_.stall_cycles + report_.conflict_cycles;
    report_.utilization = window ? static_cast<double>(trace_.slots.size()) /
                                       static_cast<double>(window * trace_.npe)
                                 : 0.0;
    std::sort(report_.events.begin(), report_.events.end());
    return std::move(report_);
  }

 private:
  void record(std::vector<HazardEvent>& events) {
    if (events.empty()) return;
    std::sort(events.begin(), events.end());
    if (policy_ == HazardPolicy::fail_fast) throw HazardError(events.front());
    report_.events.insert(report_.events.end(), events.begin(), events.end());
  }

  void retire(const CbuModel::Result& r, std::size_t cycle) {
    std::map<std::pair<std::uint8_t, std::uint32_t>, HazardEvent> conflicts;
    for (const auto& [c, v] : r.writes) {
      if (!ch_.mem[c.array].claim_write(c.bank, cycle)) {
        auto [it, fresh] = conflicts.try_emplace({c.array, c.bank},
                                                HazardEvent{HazardKind::write_conflict, cycle, r.group, c, 0});
        ++it->second.detail;
      }
    }
    std::vector<HazardEvent> events;
    for (auto& [key, e] : conflicts) {
      report_.bank_conflicts += e.detail;
      events.push_back(e);
    }
    record(events);
    for (const auto& [c, v] : r.writes) ch_.mem[c.array].store(c.bank, c.address, v, cycle + 1);
  }

  void issue(std::span<const Slot> slots, const std::vector<u64>& operands, std::size_t cycle, std::size_t k) {
    std::map<std::uint32_t, HazardEvent> conflicts;
    CbuModel::Result result{cycle + latency_, k, {}};
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const Slot& s = slots[i];
      u64 w = 0;
      if (s.has_twiddle) {
        if (!twiddles_.claim_read(s.tw_bank, cycle)) {
          auto [it, fresh] = conflicts.try_emplace(
              s.tw_bank, HazardEvent{HazardKind::twiddle_conflict, cycle, k, {0, s.tw_bank, s.tw_address}, 0});
          ++it->second.detail;
        }
        w = twiddles_.value(s.tw_bank, s.tw_address);
      }
      if (s.write0 != s.read0 || (s.has_write1 && s.write1 != s.read1)) {
        throw std::logic_error("schedule writes a butterfly result away from its operand cell");
      }
      const Pair p = cbu_.compute(operands[2 * i], operands[2 * i + 1], w);
      result.writes.push_back({s.write0, p.top});
      if (s.has_write1) result.writes.push_back({s.write1, p.bottom});

      StageCycles& st = report_.per_stage[s.stage];
      if (i == 0) {
        if (st.issue_groups == 0) st.first_issue = cycle;
        st.last_issue = cycle;
        ++st.issue_groups;
      }
    }
    std::vector<HazardEvent> events;
    for (auto& [bank, e] : conflicts) {
      report_.twiddle_conflicts += e.detail;
      events.push_back(e);
    }
    record(events);
    for (const auto& [c, v] : result.writes) ch_.mem[c.array].reserve(c.bank, c.address, result.write_cycle + 1);
    cbu_.issue(std::move(result));
  }

  const ScheduleTrace& trace_;
  Channel& ch_;
  unsigned latency_;
  unsigned setup_;
  HazardPolicy policy_;
  CbuModel cbu_;
  BankedMemory twiddles_;
  OpReport report_;
};

struct ChannelOutcome {
  std::vector<OpReport> ops;
  Polynomial result;
};

ChannelOutcome run_channel(const SimConfig& config, const std::vector<const ScheduleTrace*>& traces,
                           const Modulus& mod, const Polynomial& a, const Polynomial* b, SimOp op) {
  const LayoutMap map(config.degree, config.layout);
  Channel ch{mod, gen_twiddles(mod, config.degree),
             {BankedMemory(map.banks(), map.banks()), BankedMemory(map.banks(), map.banks())}};
  load(ch.mem[0], map, a.coeffs);
  if (b) load(ch.mem[1], map, b->coeffs);

  ChannelOutcome out;
  for (const ScheduleTrace* t : traces) {
    OpRunner runner(*t, ch, config.pipeline, config.setup_cycles, config.hazard_policy);
    out.ops.push_back(runner.run());
  }
  out.result = Polynomial(unload(ch.mem[0], map), mod);

  Polynomial expected;
  switch (op) {
    case SimOp::ntt: expected = ntt_ct(a, ch.tw); break;
    case SimOp::intt: expected = intt_gs(a, ch.tw); break;
    case SimOp::polymul: expected = polymul_ntt(a, *b, mod); break;
  }
  if (!(expected == out.result)) {
    throw ResultMismatch("simulated " + to_string(op) + " differs from the reference for q=" +
                         std::to_string(mod.q));
  }
  return out;
}

}  // namespace

SimReport run(const SimConfig& config, const RnsPolynomial& a, const std::optional<RnsPolynomial>& b,
              SimOp op) {
  config.validate();
  auto check_input = [&](const RnsPolynomial& p, const char* name) {
    if (p.channels() != config.basis.size()) {
      throw std::invalid_argument(std::string("sim: operand ") + name + " has " +
                                  std::to_string(p.channels()) + " channels, basis has " +
                                  std::to_string(config.basis.size()));
    }
    for (std::size_t i = 0; i < p.channels(); ++i) {
      if (p.residue_polys[i].size() != config.degree || p.residue_polys[i].mod.q != config.basis.moduli[i].q) {
        throw std::invalid_argument(std::string("sim: operand ") + name + " does not match N or modulus chain");
      }
    }
  };
  check_input(a, "a");
  if (op == SimOp::polymul) {
    if (!b) throw std::invalid_argument("sim: polymul needs two operands");
    check_input(*b, "b");
  }

  std::vector<ScheduleTrace> traces;
  const auto N = config.degree;
  const auto P = config.npe;
  switch (op) {
    case SimOp::ntt: traces.push_back(build_schedule(N, P, OpKind::ntt, config.layout, 0)); break;
    case SimOp::intt: traces.push_back(build_schedule(N, P, OpKind::intt, config.layout, 0)); break;
    case SimOp::polymul:
      traces.push_back(build_schedule(N, P, OpKind::ntt, config.layout, 0));
      traces.push_back(build_schedule(N, P, OpKind::ntt, config.layout, 1));
      traces.push_back(build_schedule(N, P, OpKind::mult, config.layout));
      traces.push_back(build_schedule(N, P, OpKind::intt, config.layout, 0));
      break;
  }
  std::vector<const ScheduleTrace*> trace_ptrs;
  for (const auto& t : traces) trace_ptrs.push_back(&t);

  // Channels share nothing mutable; each runs on its own task.
  std::vector<std::future<ChannelOutcome>> futures;
  for (std::size_t i = 0; i < config.basis.size(); ++i) {
    const Polynomial* bp = op == SimOp::polymul ? &b->residue_polys[i] : nullptr;
    futures.push_back(std::async(std::launch::async, run_channel, std::cref(config), std::cref(trace_ptrs),
                                 std::cref(config.basis.moduli[i]), std::cref(a.residue_polys[i]), bp, op));
  }
  std::vector<ChannelOutcome> outcomes;
  for (auto& f : futures) outcomes.push_back(f.get());

  SimReport report;
  report.op = op;
  report.degree = N;
  report.npe = P;
  report.profile = config.profile;
  report.pipeline = config.pipeline;
  report.setup_cycles = config.setup_cycles;
  report.layout = config.layout;
  report.hazard_policy = config.hazard_policy;
  for (const Modulus& m : config.basis.moduli) report.moduli.push_back(m.q);
  report.ops = outcomes.front().ops;
  for (const auto& o : outcomes) {
    for (std::size_t i = 0; i < o.ops.size(); ++i) {
      if (o.ops[i].total_cycles != report.ops[i].total_cycles) {
        throw std::logic_error("sim: RNS channels disagree on timing");
      }
    }
    report.results.push_back(o.result);
  }

  report.matches_prediction = true;
  std::size_t slots = 0, window = 0;
  for (std::size_t i = 0; i < report.ops.size(); ++i) {
    OpReport& r = report.ops[i];
    report.total_cycles += r.total_cycles;
    report.stall_cycles += r.stall_cycles;
    report.bank_conflicts += r.bank_conflicts + r.twiddle_conflicts;
    slots += traces[i].slots.size();
    window += (r.issue_cycles + r.stall_cycles + r.conflict_cycles) * P;
    if (check_raw_bound(N, P, config.pipeline, r.op).satisfied) {
      r.predicted = predicted_cycles(N, P, config.pipeline, config.setup_cycles, r.op);
    }
    if (!r.predicted || *r.predicted != r.total_cycles) report.matches_prediction = false;
  }
  report.utilization = window ? static_cast<double>(slots) / static_cast<double>(window) : 0.0;
  return report;
}

std::size_t predicted_cycles(std::size_t degree, std::size_t npe, const PipelineConfig& pipeline,
                             unsigned setup_cycles, OpKind op) {
  const BoundReport bound = check_raw_bound(degree, npe, pipeline, op);
  if (!bound.satisfied) {
    throw std::invalid_argument("predicted_cycles: RAW bound violated (delay " +
                                std::to_string(bound.total_delay) + " >= bound " +
                                std::to_string(bound.bound) + "); the closed form does not apply");
  }
  const std::size_t issue = op == OpKind::mult ? degree / npe : degree * log2_exact(degree) / (2 * npe);
  return issue + pipeline.total(op) + setup_cycles;
}

// ---------------------------------------------------------------------------
// Static analysis

namespace {

struct KeyHash {
  std::size_t operator()(const std::tuple<std::uint8_t, std::uint32_t, std::uint32_t>& k) const {
    return (static_cast<std::size_t>(std::get<0>(k)) << 48) ^ (static_cast<std::size_t>(std::get<1>(k)) << 24) ^
           std::get<2>(k);
  }
};

template <typename CellOf>
void multiplicity_events(std::span<const Slot> slots, std::size_t count_per_slot, CellOf cell_of,
                         HazardKind kind, std::size_t cycle, std::size_t group,
                         std::vector<HazardEvent>& out, std::size_t& max_mult) {
  std::map<std::pair<std::uint8_t, std::uint32_t>, std::pair<std::size_t, HazardEvent>> seen;
  for (const Slot& s : slots) {
    for (std::size_t j = 0; j < count_per_slot; ++j) {
      std::optional<CellRef> c = cell_of(s, j);
      if (!c) continue;
      auto [it, fresh] = seen.try_emplace({c->array, c->bank}, 0, HazardEvent{kind, cycle, group, *c, 0});
      if (++it->second.first == 2) it->second.second.cell = *c;  // first access that loses the port
    }
  }
  max_mult = 1;
  for (auto& [key, v] : seen) {
    max_mult = std::max(max_mult, v.first);
    if (v.first > 1) {
      v.second.detail = v.first - 1;
      out.push_back(v.second);
    }
  }
}

struct Analysis {
  std::vector<HazardEvent> events;
  std::size_t stall_cycles = 0;
  std::size_t conflict_cycles = 0;
  std::size_t total_cycles = 0;
};

Analysis analyze(const ScheduleTrace& trace, unsigned latency, unsigned setup, bool replay) {
  Analysis a;
  const std::size_t cells = trace.banks * trace.banks;
  std::vector<std::size_t> ready(2 * cells, 0);
  auto ready_of = [&](const CellRef& c) -> std::size_t& {
    return ready[c.array * cells + static_cast<std::size_t>(c.bank) * trace.banks + c.address];
  };
  auto read_cell = [](const Slot& s, std::size_t j) -> std::optional<CellRef> { return j == 0 ? s.read0 : s.read1; };
  auto write_cell = [](const Slot& s, std::size_t j) -> std::optional<CellRef> {
    if (j == 0) return s.write0;
    if (s.has_write1) return s.write1;
    return std::nullopt;
  };
  auto tw_cell = [](const Slot& s, std::size_t) -> std::optional<CellRef> {
    if (!s.has_twiddle) return std::nullopt;
    return CellRef{0, s.tw_bank, s.tw_address};
  };

  std::size_t start = setup;
  std::size_t last_write = setup;
  bool wrote = false;
  for (std::size_t k = 0; k < trace.issue_cycles; ++k) {
    const auto slots = trace.cycle(k);
    std::size_t need = 0;
    for (const Slot& s : slots) {
      for (const CellRef& c : {s.read0, s.read1}) {
        const std::size_t r = ready_of(c);
        if (r > start) a.events.push_back({HazardKind::raw, start, k, c, r});
        need = std::max(need, r);
      }
    }
    std::size_t read_at = start;
    if (replay && need > start) {
      a.stall_cycles += need - start;
      read_at = need;
    }
    std::size_t max_mult = 1;
    multiplicity_events(slots, 2, read_cell, HazardKind::read_conflict, read_at, k, a.events, max_mult);
    std::size_t issue_at = read_at;
    if (replay) {
      issue_at += max_mult - 1;
      a.conflict_cycles += max_mult - 1;
    }
    std::size_t tw_mult = 1;
    multiplicity_events(slots, 1, tw_cell, HazardKind::twiddle_conflict, issue_at, k, a.events, tw_mult);
    const std::size_t write_at = issue_at + latency;
    std::size_t w_mult = 1;
    multiplicity_events(slots, 2, write_cell, HazardKind::write_conflict, write_at, k, a.events, w_mult);
    for (const Slot& s : slots) {
      ready_of(s.write0) = write_at + 1;
      if (s.has_write1) ready_of(s.write1) = write_at + 1;
    }
    last_write = write_at;
    wrote = true;
    start = issue_at + 1;
  }
  a.total_cycles = wrote ? last_write + 1 : setup;
  std::sort(a.events.begin(), a.events.end());
  return a;
}

}  // namespace

HazardReport detect_hazards(const ScheduleTrace& trace, const PipelineConfig& pipeline, unsigned setup_cycles) {
  const unsigned latency = pipeline.total(trace.op);
  HazardReport report;
  report.findings = analyze(trace, latency, setup_cycles, false).events;
  Analysis replay = analyze(trace, latency, setup_cycles, true);
  report.replay_events = std::move(replay.events);
  report.replay_stall_cycles = replay.stall_cycles;
  report.replay_conflict_cycles = replay.conflict_cycles;
  report.replay_total_cycles = replay.total_cycles;
  return report;
}

// ---------------------------------------------------------------------------
// JSON

void write_json(std::ostream& os, const SimReport& report) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["op"] = to_string(report.op);
  j["N"] = report.degree;
  j["n_pe"] = report.npe;
  j["profile"] = report.profile;
  j["total_cycles"] = report.total_cycles;
  ordered_json stages = ordered_json::array();
  ordered_json ops = ordered_json::array();
  for (const OpReport& r : report.ops) {
    for (const StageCycles& s : r.per_stage) {
      ordered_json st;
      st["op"] = to_string(r.op);
      st["stage"] = s.stage;
      st["first_issue"] = s.first_issue;
      st["last_issue"] = s.last_issue;
      st["issue_cycles"] = s.issue_groups;
      st["stall_cycles"] = s.stall_cycles;
      stages.push_back(st);
    }
    ordered_json o;
    o["op"] = to_string(r.op);
    o["total_cycles"] = r.total_cycles;
    o["issue_cycles"] = r.issue_cycles;
    o["predicted_cycles"] = r.predicted ? ordered_json(*r.predicted) : ordered_json(nullptr);
    o["stall_cycles"] = r.stall_cycles;
    o["conflict_cycles"] = r.conflict_cycles;
    o["bank_conflicts"] = r.bank_conflicts;
    o["twiddle_conflicts"] = r.twiddle_conflicts;
    o["utilization"] = r.utilization;
    o["hazard_events"] = r.events.size();
    ops.push_back(o);
  }
  j["per_stage"] = stages;
  j["stalls"] = report.stall_cycles;
  j["conflicts"] = report.bank_conflicts;
  j["utilization"] = report.utilization;
  j["matches_prediction"] = report.matches_prediction;
  j["ops"] = ops;
  ordered_json cfg;
  cfg["N"] = report.degree;
  cfg["n_pe"] = report.npe;
  cfg["moduli"] = report.moduli;
  cfg["profile"] = report.profile;
  cfg["pipeline"] = {{"delay_read", report.pipeline.delay_read},
                     {"delay_write", report.pipeline.delay_write},
                     {"delay_pe_ntt", report.pipeline.delay_pe_ntt},
                     {"delay_pe_intt", report.pipeline.delay_pe_intt},
                     {"delay_pe_mult", report.pipeline.delay_pe_mult}};
  cfg["setup_cycles"] = report.setup_cycles;
  cfg["layout"] = to_string(report.layout);
  cfg["hazard_policy"] = to_string(report.hazard_policy);
  j["config"] = cfg;
  os << j.dump(2) << '\n';
}

}  // namespace nttacc
