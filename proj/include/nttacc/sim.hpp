#pragma once

#include <cstddef>
#include <deque>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nttacc/ntt.hpp"
#include "nttacc/rns.hpp"
#include "nttacc/schedule.hpp"

namespace nttacc {

enum class HazardPolicy { stall, fail_fast };
enum class SimOp { ntt, intt, polymul };

std::string to_string(HazardPolicy policy);
std::string to_string(SimOp op);
HazardPolicy parse_hazard_policy(const std::string& name);
SimOp parse_sim_op(const std::string& name);

struct SimConfig {
  std::size_t degree = 0;
  std::size_t npe = 1;
  RnsBasis basis;
  PipelineConfig pipeline;
  std::string profile = "custom";
  unsigned setup_cycles = 0;
  HazardPolicy hazard_policy = HazardPolicy::stall;
  LayoutKind layout = LayoutKind::shifted;

  void validate() const;
};

/// Hazard kinds in the order they are observed within one cycle: writes
/// retire before the next group issues.
enum class HazardKind { write_conflict, raw, read_conflict, twiddle_conflict };
std::string to_string(HazardKind kind);

struct HazardEvent {
  HazardKind kind = HazardKind::raw;
  std::size_t cycle = 0;  // cycle the hazard is observed
  std::size_t group = 0;  // issue-group index in the trace
  CellRef cell;           // RAW: the cell; conflicts: array and bank (address of first access)
  std::size_t detail = 0; // RAW: cycle the cell becomes readable; conflicts: excess accesses

  friend bool operator==(const HazardEvent&, const HazardEvent&) = default;
  friend bool operator<(const HazardEvent& a, const HazardEvent& b);
};

class HazardError : public std::runtime_error {
 public:
  explicit HazardError(HazardEvent event);
  const HazardEvent& event() const { return event_; }

 private:
  HazardEvent event_;
};

/// The simulated memory disagreed with the reference transform.
class ResultMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// n banks of depth n, one read port and one write port per bank per cycle.
/// Each cell remembers the first cycle its current value can be read.
class BankedMemory {
 public:
  BankedMemory(std::size_t banks, std::size_t depth);

  [[nodiscard]] std::size_t banks() const { return banks_; }
  [[nodiscard]] std::size_t depth() const { return depth_; }

  /// Claims the bank's read port for `cycle`; false if already taken.
  bool claim_read(std::size_t bank, std::size_t cycle);
  bool claim_write(std::size_t bank, std::size_t cycle);

  [[nodiscard]] u64 value(std::size_t bank, std::size_t address) const;
  [[nodiscard]] std::size_t ready_cycle(std::size_t bank, std::size_t address) const;
  void store(std::size_t bank, std::size_t address, u64 v, std::size_t ready);
  /// Scoreboard entry for an in-flight write: the cell stays unreadable until `ready`.
  void reserve(std::size_t bank, std::size_t address, std::size_t ready);
  void reset_ready();

 private:
  std::size_t slot(std::size_t bank, std::size_t address) const;

  std::size_t banks_;
  std::size_t depth_;
  std::vector<u64> cells_;
  std::vector<std::size_t> ready_;
  std::vector<std::size_t> read_claimed_;   // cycle + 1 of last claim, 0 = never
  std::vector<std::size_t> write_claimed_;
};

/// Configurable butterfly unit array: NTT (CT), INTT (GS with halving) and
/// MultMod modes. Results come out exactly `latency` cycles after issue, in
/// issue order.
class CbuModel {
 public:
  struct Result {
    std::size_t write_cycle;
    std::size_t group;
    std::vector<std::pair<CellRef, u64>> writes;
  };

  CbuModel(OpKind mode, unsigned latency, const Modulus& mod);

  [[nodiscard]] OpKind mode() const { return mode_; }
  Pair compute(u64 a, u64 b, u64 twiddle) const;
  void issue(Result r) { in_flight_.push_back(std::move(r)); }
  [[nodiscard]] bool idle() const { return in_flight_.empty(); }
  /// Pops the result due at `cycle`, if any.
  std::optional<Result> retire(std::size_t cycle);

 private:
  OpKind mode_;
  unsigned latency_;
  Modulus mod_;
  std::deque<Result> in_flight_;
};

struct StageCycles {
  unsigned stage = 0;
  std::size_t first_issue = 0;
  std::size_t last_issue = 0;
  std::size_t issue_groups = 0;
  std::size_t stall_cycles = 0;
};

struct OpReport {
  OpKind op = OpKind::ntt;
  std::size_t total_cycles = 0;
  std::size_t issue_cycles = 0;
  std::size_t stall_cycles = 0;     // RAW
  std::size_t conflict_cycles = 0;  // read-port serialization
  std::size_t bank_conflicts = 0;   // excess data-bank accesses (read + write)
  std::size_t twiddle_conflicts = 0;
  double utilization = 0.0;
  std::vector<StageCycles> per_stage;
  std::vector<HazardEvent> events;
  std::optional<std::size_t> predicted;
};

struct SimReport {
  SimOp op = SimOp::ntt;
  std::size_t degree = 0;
  std::size_t npe = 0;
  std::string profile;
  PipelineConfig pipeline;
  unsigned setup_cycles = 0;
  LayoutKind layout = LayoutKind::shifted;
  HazardPolicy hazard_policy = HazardPolicy::stall;
  std::vector<u64> moduli;
  std::vector<OpReport> ops;  // timing of channel 0; all channels share it
  std::size_t total_cycles = 0;
  std::size_t stall_cycles = 0;
  std::size_t bank_conflicts = 0;
  double utilization = 0.0;
  bool matches_prediction = false;
  std::vector<Polynomial> results;  // one per channel
};

/// Cycle-by-cycle replay of the schedule for each RNS channel. Throws
/// HazardError under fail-fast, ResultMismatch if the memory contents differ
/// from the reference transform.
SimReport run(const SimConfig& config, const RnsPolynomial& a, const std::optional<RnsPolynomial>& b,
              SimOp op);

/// Closed-form cycle count: issue cycles + read + write + butterfly + setup.
/// Refuses configurations whose RAW bound is violated.
std::size_t predicted_cycles(std::size_t degree, std::size_t npe, const PipelineConfig& pipeline,
                             unsigned setup_cycles, OpKind op);

struct HazardReport {
  /// Hazards on the nominal, never-stalled timeline (group k issues at setup + k).
  std::vector<HazardEvent> findings;
  /// Timing-only replay under the stall policy; matches run()'s events.
  std::vector<HazardEvent> replay_events;
  std::size_t replay_stall_cycles = 0;
  std::size_t replay_conflict_cycles = 0;
  std::size_t replay_total_cycles = 0;

  [[nodiscard]] bool clean() const { return findings.empty(); }
};

HazardReport detect_hazards(const ScheduleTrace& trace, const PipelineConfig& pipeline,
                            unsigned setup_cycles = 0);

void write_json(std::ostream& os, const SimReport& report);

}  // namespace nttacc
