#include "nttacc/config.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "nttacc/layout.hpp"
#include "nttacc/rns.hpp"

namespace nttacc {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Polynomial random_polynomial(std::size_t n, const Modulus& mod, SplitMix64& rng) {
  std::vector<u64> c(n);
  for (auto& v : c) v = rng.below(mod.q);
  return Polynomial(std::move(c), mod);
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "command",         "action",          "n",           "npe",
      "primes",          "q_bits",          "nq",          "profile",
      "pipeline.delay_read", "pipeline.delay_write", "pipeline.delay_pe_ntt",
      "pipeline.delay_pe_intt", "pipeline.delay_pe_mult", "setup_cycles",
      "hazard_policy",   "layout",          "op",          "input",
      "input_b",         "output",          "seed",        "format"};
  return keys;
}

namespace {

bool known_key(const std::string& key) {
  const auto& keys = config_keys();
  return std::find(keys.begin(), keys.end(), key) != keys.end();
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || value.empty()) {
    throw ValidationError("config key '" + key + "': expected a non-negative integer, got '" + value + "'");
  }
  return out;
}

std::vector<u64> parse_primes(const std::string& value) {
  std::vector<u64> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const u64 q = parse_uint("primes", item);
    if (!is_prime(q)) throw ValidationError("config key 'primes': " + item + " is not prime");
    out.push_back(q);
  }
  if (out.empty()) throw ValidationError("config key 'primes': empty list");
  return out;
}

bool is_pow2(std::size_t x) { return x != 0 && (x & (x - 1)) == 0; }

void require_file(const std::string& key, const std::string& path) {
  if (!path.empty() && !std::filesystem::is_regular_file(path)) {
    throw ValidationError("config key '" + key + "': file '" + path + "' does not exist");
  }
}

void require_format(const RunConfig& c, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed) {
    if (c.format == f) return;
  }
  std::string list;
  for (const char* f : allowed) list += (list.empty() ? "" : ", ") + std::string(f);
  throw ValidationError("format '" + c.format + "' not supported by " + c.command + " (use " + list + ")");
}

Polynomial load_polynomial(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return read_polynomial(in);
  } catch (const std::exception& e) {
    throw ValidationError("'" + path + "': " + e.what());
  }
}

}  // namespace

KeyValues read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config file '" + path + "' does not exist or is unreadable");
  KeyValues kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (!known_key(key)) throw ValidationError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (kv.count(key)) throw ValidationError(path + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

RunConfig resolve_config(const KeyValues& file, const KeyValues& flags) {
  KeyValues kv = file;
  for (const auto& [k, v] : flags) kv[k] = v;
  for (const auto& [k, v] : kv) {
    if (!known_key(k)) throw ValidationError("unknown config key '" + k + "'");
  }
  auto get = [&](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };

  RunConfig c;
  try {
    c.command = get("command").value_or("");
    static const std::set<std::string> commands = {"ntt",      "intt",         "polymul", "sim",
                                                   "schedule", "layout-check", "predict"};
    if (!commands.count(c.command)) {
      throw ValidationError("unknown command '" + c.command +
                            "' (expected ntt, intt, polymul, sim, schedule, layout-check or predict)");
    }
    c.action = get("action").value_or(c.command == "schedule" ? "dump" : "");
    if (c.command == "schedule" && c.action != "dump") {
      throw ValidationError("schedule: unknown action '" + c.action + "' (expected dump)");
    }
    if (auto v = get("n")) c.degree = parse_uint("n", *v);
    if (auto v = get("npe")) c.npe = parse_uint("npe", *v);
    if (auto v = get("primes")) c.primes = parse_primes(*v);
    if (auto v = get("q_bits")) c.q_bits = static_cast<unsigned>(parse_uint("q_bits", *v));
    if (auto v = get("nq")) c.nq = parse_uint("nq", *v);
    if (c.q_bits < 3 || c.q_bits > 62) throw ValidationError("q_bits must be in [3, 62]");
    if (c.nq == 0) throw ValidationError("nq must be at least 1");

    c.profile = get("profile").value_or("q32");
    c.pipeline = pipeline_profile(c.profile);
    bool custom = false;
    auto delay = [&](const char* key, unsigned& field) {
      if (auto v = get(key)) {
        const auto d = static_cast<unsigned>(parse_uint(key, *v));
        custom = custom || d != field;
        field = d;
      }
    };
    delay("pipeline.delay_read", c.pipeline.delay_read);
    delay("pipeline.delay_write", c.pipeline.delay_write);
    delay("pipeline.delay_pe_ntt", c.pipeline.delay_pe_ntt);
    delay("pipeline.delay_pe_intt", c.pipeline.delay_pe_intt);
    delay("pipeline.delay_pe_mult", c.pipeline.delay_pe_mult);
    if (custom) c.profile = "custom";
    c.pipeline.validate();

    if (auto v = get("setup_cycles")) c.setup_cycles = static_cast<unsigned>(parse_uint("setup_cycles", *v));
    if (auto v = get("hazard_policy")) c.hazard_policy = parse_hazard_policy(*v);
    if (auto v = get("layout")) c.layout = parse_layout_kind(*v);
    c.input = get("input").value_or("");
    c.input_b = get("input_b").value_or("");
    c.output = get("output").value_or("");
    if (auto v = get("seed")) c.seed = parse_uint("seed", *v);

    const std::string& cmd = c.command;
    if (cmd == "sim") {
      c.op = get("op").value_or("ntt");
      parse_sim_op(c.op);
    } else if (cmd == "schedule" || cmd == "predict") {
      c.op = get("op").value_or("ntt");
      parse_op_kind(c.op);
    } else if (get("op")) {
      throw ValidationError("config key 'op' does not apply to " + cmd);
    }

    static const std::map<std::string, std::string> default_format = {
        {"ntt", "text"}, {"intt", "text"}, {"polymul", "text"}, {"sim", "json"},
        {"schedule", "csv"}, {"layout-check", "json"}, {"predict", "text"}};
    c.format = get("format").value_or(default_format.at(cmd));
    if (cmd == "ntt" || cmd == "intt" || cmd == "polymul") require_format(c, {"text", "json"});
    if (cmd == "sim") require_format(c, {"json", "text", "csv"});
    if (cmd == "schedule") require_format(c, {"csv", "json"});
    if (cmd == "layout-check" || cmd == "predict") require_format(c, {"json", "text"});

    require_file("input", c.input);
    require_file("input_b", c.input_b);

    if (cmd == "ntt" || cmd == "intt" || cmd == "polymul") {
      if (c.input.empty() && c.degree == 0) throw ValidationError(cmd + ": give n or an input file");
      if (cmd == "polymul" && c.input.empty() != c.input_b.empty()) {
        throw ValidationError("polymul: give both input and input_b, or neither for random operands");
      }
      if (c.degree != 0 && (!is_pow2(c.degree) || c.degree < 2)) {
        throw ValidationError("n=" + std::to_string(c.degree) + " must be a power of two >= 2");
      }
      if (c.primes.size() > 1) throw ValidationError(cmd + " works on one modulus; give a single prime");
    } else {
      if (c.degree == 0) throw ValidationError(cmd + ": missing n");
      bank_count_for(c.degree);
      if (cmd != "layout-check") check_npe(c.degree, c.npe);
    }
    if (cmd == "sim" && !c.input.empty()) {
      if (c.primes.size() > 1 || (c.primes.empty() && c.nq > 1)) {
        throw ValidationError("sim: input files hold one residue polynomial; use random inputs for RNS runs");
      }
      if (c.op == "polymul" && c.input_b.empty()) throw ValidationError("sim polymul: input_b missing");
    }
  } catch (const ValidationError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  return c;
}

KeyValues to_key_values(const RunConfig& c) {
  KeyValues kv;
  kv["command"] = c.command;
  if (!c.action.empty()) kv["action"] = c.action;
  kv["n"] = std::to_string(c.degree);
  kv["npe"] = std::to_string(c.npe);
  std::string primes;
  for (u64 q : c.primes) primes += (primes.empty() ? "" : ",") + std::to_string(q);
  kv["primes"] = primes;
  kv["q_bits"] = std::to_string(c.q_bits);
  kv["nq"] = std::to_string(c.nq);
  kv["profile"] = c.profile;
  kv["pipeline.delay_read"] = std::to_string(c.pipeline.delay_read);
  kv["pipeline.delay_write"] = std::to_string(c.pipeline.delay_write);
  kv["pipeline.delay_pe_ntt"] = std::to_string(c.pipeline.delay_pe_ntt);
  kv["pipeline.delay_pe_intt"] = std::to_string(c.pipeline.delay_pe_intt);
  kv["pipeline.delay_pe_mult"] = std::to_string(c.pipeline.delay_pe_mult);
  kv["setup_cycles"] = std::to_string(c.setup_cycles);
  kv["hazard_policy"] = to_string(c.hazard_policy);
  kv["layout"] = to_string(c.layout);
  kv["op"] = c.op;
  kv["input"] = c.input;
  kv["input_b"] = c.input_b;
  kv["output"] = c.output;
  kv["seed"] = std::to_string(c.seed);
  kv["format"] = c.format;
  return kv;
}

namespace {

using nlohmann::ordered_json;

ordered_json config_json(const RunConfig& c) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, v] : to_key_values(c)) j[k] = v;
  return j;
}

Modulus single_modulus(const RunConfig& c, std::size_t n, std::optional<u64> from_file) {
  u64 q = 0;
  if (from_file) {
    q = *from_file;
    if (!c.primes.empty() && c.primes.front() != q) {
      throw ValidationError("input modulus " + std::to_string(q) + " differs from configured prime " +
                            std::to_string(c.primes.front()));
    }
  } else if (!c.primes.empty()) {
    q = c.primes.front();
  } else {
    q = find_ntt_prime(c.q_bits, n, 0);
  }
  return ntt_modulus(q, n);
}

void emit_polynomial(std::ostream& os, const RunConfig& c, const Polynomial& p) {
  if (c.format == "text") {
    write_polynomial(os, p);
    return;
  }
  ordered_json j;
  j["config"] = config_json(c);
  j["N"] = p.size();
  j["q"] = p.mod.q;
  j["coeffs"] = p.coeffs;
  os << j.dump(2) << '\n';
}

void run_transform(const RunConfig& c, std::ostream& os) {
  std::optional<Polynomial> a, b;
  std::size_t n = c.degree;
  if (!c.input.empty()) {
    a = load_polynomial(c.input);
    if (c.command == "polymul") {
      b = load_polynomial(c.input_b);
      if (b->size() != a->size() || b->mod.q != a->mod.q) {
        throw ValidationError("polymul: input and input_b differ in N or q");
      }
    }
    if (n != 0 && n != a->size()) {
      throw ValidationError("n=" + std::to_string(n) + " but input has " + std::to_string(a->size()) +
                            " coefficients");
    }
    n = a->size();
    if (!is_pow2(n) || n < 2) throw ValidationError("input length must be a power of two >= 2");
  }
  const Modulus mod = single_modulus(c, n, a ? std::optional<u64>(a->mod.q) : std::nullopt);
  SplitMix64 rng(c.seed);
  if (a) {
    a->mod = mod;
    if (b) b->mod = mod;
  } else {
    a = random_polynomial(n, mod, rng);
    if (c.command == "polymul") b = random_polynomial(n, mod, rng);
  }

  if (c.command == "polymul") {
    emit_polynomial(os, c, polymul_ntt(*a, *b, mod));
    return;
  }
  const TwiddleTable tw = gen_twiddles(mod, n);
  emit_polynomial(os, c, c.command == "ntt" ? ntt_ct(*a, tw) : intt_gs(*a, tw));
}

void run_sim(const RunConfig& c, std::ostream& os) {
  SimConfig sc;
  sc.degree = c.degree;
  sc.npe = c.npe;
  sc.basis = c.primes.empty() ? gen_basis(c.q_bits, c.nq, c.degree) : make_basis(c.primes, c.degree);
  sc.pipeline = c.pipeline;
  sc.profile = c.profile;
  sc.setup_cycles = c.setup_cycles;
  sc.hazard_policy = c.hazard_policy;
  sc.layout = c.layout;
  const SimOp op = parse_sim_op(c.op);

  RnsPolynomial a, b;
  if (!c.input.empty()) {
    Polynomial pa = load_polynomial(c.input);
    if (pa.size() != c.degree || pa.mod.q != sc.basis.moduli[0].q) {
      throw ValidationError("sim: input does not match n and the modulus");
    }
    pa.mod = sc.basis.moduli[0];
    a.residue_polys.push_back(pa);
    if (op == SimOp::polymul) {
      Polynomial pb = load_polynomial(c.input_b);
      if (pb.size() != c.degree || pb.mod.q != sc.basis.moduli[0].q) {
        throw ValidationError("sim: input_b does not match n and the modulus");
      }
      pb.mod = sc.basis.moduli[0];
      b.residue_polys.push_back(pb);
    }
  } else {
    SplitMix64 rng(c.seed);
    for (const Modulus& m : sc.basis.moduli) a.residue_polys.push_back(random_polynomial(c.degree, m, rng));
    if (op == SimOp::polymul) {
      for (const Modulus& m : sc.basis.moduli) b.residue_polys.push_back(random_polynomial(c.degree, m, rng));
    }
  }
  const SimReport report = run(sc, a, op == SimOp::polymul ? std::optional<RnsPolynomial>(b) : std::nullopt, op);

  if (c.format == "json") {
    std::ostringstream ss;
    write_json(ss, report);
    ordered_json j = ordered_json::parse(ss.str());
    ordered_json cfg = config_json(c);
    cfg["moduli"] = report.moduli;
    j["config"] = cfg;
    os << j.dump(2) << '\n';
  } else if (c.format == "csv") {
    os << "op,total_cycles,issue_cycles,predicted_cycles,stall_cycles,conflict_cycles,bank_conflicts,"
          "twiddle_conflicts,utilization\n";
    for (const OpReport& r : report.ops) {
      os << to_string(r.op) << ',' << r.total_cycles << ',' << r.issue_cycles << ','
         << (r.predicted ? std::to_string(*r.predicted) : "") << ',' << r.stall_cycles << ','
         << r.conflict_cycles << ',' << r.bank_conflicts << ',' << r.twiddle_conflicts << ',' << r.utilization
         << '\n';
    }
  } else {
    os << "# config:";
    for (const auto& [k, v] : to_key_values(c)) os << ' ' << k << '=' << v;
    os << '\n';
    for (const OpReport& r : report.ops) {
      os << to_string(r.op) << ": " << r.total_cycles << " cycles, " << r.stall_cycles << " stall, "
         << r.bank_conflicts << " bank conflicts";
      if (r.predicted) os << ", predicted " << *r.predicted;
      os << '\n';
    }
    os << "total: " << report.total_cycles << " cycles\n";
  }
}

void run_schedule(const RunConfig& c, std::ostream& os) {
  const ScheduleTrace trace = build_schedule(c.degree, c.npe, parse_op_kind(c.op), c.layout);
  if (c.format == "csv") {
    write_csv(os, trace);
    return;
  }
  const ScheduleStats stats = trace_stats(trace);
  ordered_json j;
  j["config"] = config_json(c);
  j["issue_cycles"] = trace.issue_cycles;
  j["slots"] = trace.slots.size();
  j["cycles_per_stage"] = stats.cycles_per_stage;
  j["cycles_per_round"] = stats.cycles_per_round;
  j["mean_utilization"] = stats.mean_utilization;
  j["reads_per_bank"] = stats.reads_per_bank;
  j["writes_per_bank"] = stats.writes_per_bank;
  os << j.dump(2) << '\n';
}

void run_layout_check(const RunConfig& c, std::ostream& os) {
  const ConflictReport report = verify_conflict_free(c.degree, c.layout);
  if (c.format == "json") {
    ordered_json head;
    head["config"] = config_json(c);
    os << head.dump() << '\n';
    write_json_lines(os, report);
    return;
  }
  os << "N=" << report.degree << " layout=" << to_string(report.kind) << " pairs=" << report.pairs_checked
     << " violations=" << report.violations.size() << '\n';
  for (const auto& v : report.violations) {
    os << "  " << v.index << " and " << v.partner << " share bank " << v.bank << '\n';
  }
}

void run_predict(const RunConfig& c, std::ostream& os) {
  const OpKind op = parse_op_kind(c.op);
  const BoundReport bound = check_raw_bound(c.degree, c.npe, c.pipeline, op);
  if (!bound.satisfied) {
    throw ValidationError("predict: pipeline depth " + std::to_string(bound.total_delay) +
                          " is not below the RAW bound " + std::to_string(bound.bound) +
                          "; the schedule would stall and the closed form does not apply");
  }
  const std::size_t cycles = predicted_cycles(c.degree, c.npe, c.pipeline, c.setup_cycles, op);
  if (c.format == "text") {
    os << cycles << '\n';
    return;
  }
  ordered_json j;
  j["config"] = config_json(c);
  j["predicted_cycles"] = cycles;
  j["bound_applicable"] = bound.applicable;
  if (bound.applicable) {
    j["bound"] = bound.bound;
    j["slack"] = bound.slack;
  }
  j["total_delay"] = bound.total_delay;
  os << j.dump(2) << '\n';
}

void dispatch(const RunConfig& c, std::ostream& os) {
  if (c.command == "ntt" || c.command == "intt" || c.command == "polymul") return run_transform(c, os);
  if (c.command == "sim") return run_sim(c, os);
  if (c.command == "schedule") return run_schedule(c, os);
  if (c.command == "layout-check") return run_layout_check(c, os);
  if (c.command == "predict") return run_predict(c, os);
  throw ValidationError("unknown command '" + c.command + "'");
}

}  // namespace

int execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.output.empty()) {
      dispatch(config, out);
    } else {
      std::ostringstream buffer;
      dispatch(config, buffer);
      std::ofstream file(config.output);
      if (!file) throw ValidationError("cannot write '" + config.output + "'");
      file << buffer.str();
    }
    return static_cast<int>(ExitCode::ok);
  } catch (const HazardError& e) {
    err << "hazard: " << e.what() << '\n';
    return static_cast<int>(ExitCode::hazard);
  } catch (const ResultMismatch& e) {
    err << "internal error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::mismatch);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::validation);
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::validation);
  } catch (const std::logic_error& e) {
    err << "internal error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::mismatch);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::validation);
  }
}

}  // namespace nttacc
