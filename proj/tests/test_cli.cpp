#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "json.hpp"
#include "nttacc/config.hpp"

using namespace nttacc;

namespace {

std::filesystem::path scratch() {
  auto dir = std::filesystem::temp_directory_path() / "nttacc_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
  const auto path = scratch() / name;
  std::ofstream(path) << text;
  return path.string();
}

struct Outcome {
  int code;
  std::string out, err;
};

Outcome exec(const KeyValues& flags, const KeyValues& file = {}) {
  std::ostringstream out, err;
  const RunConfig c = resolve_config(file, flags);
  const int code = execute(c, out, err);
  return {code, out.str(), err.str()};
}

int shell(const std::string& args, std::string* stdout_text = nullptr) {
  const auto out = scratch() / "stdout.txt";
  const std::string cmd = std::string(NTTACC_CLI) + " " + args + " > " + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  if (stdout_text) {
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    *stdout_text = ss.str();
  }
  return WEXITSTATUS(status);
}

}  // namespace

TEST(SplitMix64, PublishedSequence) {
  // first outputs for seed 1234567
  SplitMix64 rng(1234567);
  EXPECT_EQ(rng.next(), 6457827717110365317ULL);
  EXPECT_EQ(rng.next(), 3203168211198807973ULL);
  EXPECT_EQ(rng.next(), 9817491932198370423ULL);
}

TEST(Config, FileAndFlagOverride) {
  const std::string path = write_file("a.cfg",
                                      "# headline run\n"
                                      "command = sim\n"
                                      "n = 4096\n"
                                      "npe = 16   # overridden below\n"
                                      "q_bits = 32\n"
                                      "pipeline.delay_read = 2\n");
  const RunConfig c = resolve_config(read_config_file(path), {{"npe", "32"}});
  EXPECT_EQ(c.command, "sim");
  EXPECT_EQ(c.degree, 4096u);
  EXPECT_EQ(c.npe, 32u);
  EXPECT_EQ(c.profile, "q32");
  EXPECT_EQ(c.op, "ntt");
  EXPECT_EQ(c.format, "json");
}

TEST(Config, Rejections) {
  auto rejects = [](const KeyValues& kv, const std::string& needle) {
    try {
      resolve_config({}, kv);
      ADD_FAILURE() << "accepted";
    } catch (const ValidationError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  rejects({{"command", "sim"}, {"n", "4096"}, {"npe", "3"}}, "power of two");
  rejects({{"command", "sim"}, {"n", "2048"}}, "odd log2 N");
  rejects({{"command", "sim"}, {"n", "x"}}, "'n'");
  rejects({{"command", "sim"}, {"n", "64"}, {"bogus", "1"}}, "unknown config key 'bogus'");
  rejects({{"command", "frobnicate"}}, "unknown command");
  rejects({{"command", "ntt"}, {"input", "/nonexistent/file"}}, "does not exist");
  rejects({{"command", "sim"}, {"n", "64"}, {"pipeline.delay_pe_intt", "3"}}, "delay_pe_intt");
  rejects({{"command", "ntt"}, {"n", "16"}, {"primes", "15"}}, "not prime");
  rejects({{"command", "schedule"}, {"action", "load"}, {"n", "16"}}, "dump");
  rejects({{"command", "predict"}, {"n", "16"}, {"format", "csv"}}, "format");
  const std::string bad = write_file("bad.cfg", "nq = 2\nwhat = 3\n");
  EXPECT_THROW(read_config_file(bad), ValidationError);
  EXPECT_THROW(read_config_file("/nonexistent.cfg"), ValidationError);
}

TEST(Cli, PolymulGoldenPair) {
  const std::string a = write_file("a.txt", "4 17\n1\n1\n0\n0\n");
  const std::string b = write_file("b.txt", "4 17\n16\n1\n0\n0\n");
  const std::string out = (scratch() / "c.txt").string();
  const Outcome o = exec({{"command", "polymul"}, {"input", a}, {"input_b", b}, {"output", out}});
  ASSERT_EQ(o.code, 0) << o.err;
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "4 17\n16\n0\n1\n0\n");
}

TEST(Cli, NttThenInttRoundtrip) {
  const Outcome f = exec({{"command", "ntt"}, {"n", "64"}, {"q_bits", "20"}, {"seed", "9"}});
  ASSERT_EQ(f.code, 0) << f.err;
  const std::string evals = write_file("evals.txt", f.out);
  const Outcome i = exec({{"command", "intt"}, {"input", evals}});
  ASSERT_EQ(i.code, 0) << i.err;
  std::istringstream in(i.out);
  const Polynomial back = read_polynomial(in);
  SplitMix64 rng(9);
  EXPECT_EQ(back.coeffs, random_polynomial(64, back.mod, rng).coeffs);
}

TEST(Cli, Predict) {
  const Outcome o = exec({{"command", "predict"}, {"n", "4096"}, {"npe", "16"}, {"profile", "q32"}});
  EXPECT_EQ(o.code, 0);
  EXPECT_EQ(o.out, "1555\n");
  const Outcome v = exec({{"command", "predict"}, {"n", "16"}, {"npe", "2"}});
  EXPECT_EQ(v.code, 1);
  EXPECT_NE(v.err.find("RAW bound"), std::string::npos);
}

TEST(Cli, LayoutCheck) {
  const Outcome seq = exec({{"command", "layout-check"}, {"n", "16"}, {"layout", "sequential"}});
  const Outcome sh = exec({{"command", "layout-check"}, {"n", "16"}, {"layout", "shifted"}});
  ASSERT_EQ(seq.code, 0);
  ASSERT_EQ(sh.code, 0);
  auto summary = [](const std::string& text) {
    std::istringstream in(text);
    std::string config_line, line;
    std::getline(in, config_line);
    EXPECT_TRUE(nlohmann::json::parse(config_line).contains("config"));
    std::getline(in, line);
    return nlohmann::json::parse(line);
  };
  EXPECT_GT(summary(seq.out)["violations"].get<int>(), 0);
  EXPECT_EQ(summary(sh.out)["violations"].get<int>(), 0);
}

TEST(Cli, SimReportEmbedsConfigAndIsDeterministic) {
  const KeyValues flags = {{"command", "sim"}, {"n", "1024"}, {"npe", "4"}, {"op", "polymul"},
                           {"nq", "2"},       {"seed", "5"}};
  const Outcome a = exec(flags), b = exec(flags);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto j = nlohmann::json::parse(a.out);
  EXPECT_EQ(j["config"]["seed"], "5");
  EXPECT_EQ(j["config"]["moduli"].size(), 2u);
  EXPECT_EQ(j["ops"].size(), 4u);
  EXPECT_TRUE(j["matches_prediction"].get<bool>());
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(exec({{"command", "sim"}, {"n", "16"}, {"npe", "2"}, {"hazard_policy", "fail-fast"}}).code, 2);
  EXPECT_EQ(exec({{"command", "sim"}, {"n", "16"}, {"npe", "2"}}).code, 0);
  EXPECT_EQ(exec({{"command", "ntt"}, {"n", "16"}, {"primes", "17"}}).code, 1);  // 17 != 1 mod 32
}

TEST(Cli, ScheduleDumpMatchesGolden) {
  const Outcome o = exec({{"command", "schedule"}, {"action", "dump"}, {"n", "16"}, {"npe", "2"}});
  ASSERT_EQ(o.code, 0);
  std::ifstream golden(std::string(NTTACC_GOLDEN_DIR) + "/schedule_n16_npe2_ntt.csv");
  std::stringstream want;
  want << golden.rdbuf();
  EXPECT_EQ(o.out, want.str());
}

TEST(CliBinary, EndToEnd) {
  std::string out;
  EXPECT_EQ(shell("predict --n 4096 --npe 16 --profile q32", &out), 0);
  EXPECT_EQ(out, "1555\n");
  EXPECT_EQ(shell("sim --n 4096 --npe 3 --q-bits 32 --nq 1"), 1);
  EXPECT_EQ(shell("sim --n 2048 --npe 4"), 1);
  EXPECT_EQ(shell("sim --n 16 --npe 2 --hazard-policy fail-fast"), 2);
  EXPECT_EQ(shell("schedule dump --n 16 --npe 2", &out), 0);
  EXPECT_EQ(out.substr(0, 5), "cycle");
  const std::string cfg = write_file("sim.cfg", "n = 64\nnpe = 4\nop = intt\n");
  EXPECT_EQ(shell("sim --config " + cfg + " --format csv", &out), 0);
  EXPECT_NE(out.find("intt,"), std::string::npos);
  EXPECT_EQ(shell("--config " + cfg + " sim --nope 3"), 1);
}
