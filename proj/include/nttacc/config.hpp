#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nttacc/ntt.hpp"
#include "nttacc/schedule.hpp"
#include "nttacc/sim.hpp"

namespace nttacc {

/// Bad user input: unknown key, malformed value, violated precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ExitCode : int { ok = 0, validation = 1, hazard = 2, mismatch = 3 };

/// SplitMix64: 64-bit state, increment 0x9E3779B97F4A7C15, finalizer
/// multipliers 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// next() % bound; the bias is below 2^-30 for bound < 2^34.
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

 private:
  std::uint64_t state_;
};

Polynomial random_polynomial(std::size_t n, const Modulus& mod, SplitMix64& rng);

using KeyValues = std::map<std::string, std::string>;

/// Every accepted key. Flags use the same names with '_' written as '-' and
/// the "pipeline." prefix dropped (pipeline.delay_read <-> --delay-read).
const std::vector<std::string>& config_keys();

/// Flat "key = value" lines; '#' starts a comment. Throws ValidationError on
/// unknown keys, duplicate keys or a missing file.
KeyValues read_config_file(const std::string& path);

struct RunConfig {
  std::string command;  // ntt, intt, polymul, sim, schedule, layout-check, predict
  std::string action;   // "dump" for schedule
  std::size_t degree = 0;
  std::size_t npe = 1;
  std::vector<u64> primes;   // explicit modulus chain
  unsigned q_bits = 32;      // used when primes is empty
  std::size_t nq = 1;
  std::string profile = "q32";
  PipelineConfig pipeline;
  unsigned setup_cycles = 0;
  HazardPolicy hazard_policy = HazardPolicy::stall;
  LayoutKind layout = LayoutKind::shifted;
  std::string op;  // sim: ntt/intt/polymul; schedule, predict: ntt/intt/mult
  std::string input;
  std::string input_b;
  std::string output;
  std::uint64_t seed = 1;
  std::string format;  // json, csv or text; empty = command default
};

/// Merges file values with flags (flags win) and validates the result.
RunConfig resolve_config(const KeyValues& file, const KeyValues& flags);

/// Resolved configuration as key/value pairs, the form reports embed.
KeyValues to_key_values(const RunConfig& config);

/// Runs the command, writing reports to config.output or `out`. Errors are
/// reported on `err` and mapped to ExitCode.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace nttacc
