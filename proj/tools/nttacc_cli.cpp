#include <iostream>

#include "CLI11.hpp"
#include "nttacc/config.hpp"

int main(int argc, char** argv) {
  using namespace nttacc;

  CLI::App app{"NTT accelerator toolkit: transforms, cycle-accurate simulation, schedules and layout audits"};
  app.require_subcommand(0, 1);

  KeyValues flags;
  std::string config_path;
  app.add_option("--config", config_path, "flat key = value config file; flags override it");

  // Each flag mirrors a config key: '_' becomes '-', "pipeline." is dropped.
  for (const std::string& key : config_keys()) {
    if (key == "command" || key == "action") continue;
    std::string flag = key.rfind("pipeline.", 0) == 0 ? key.substr(9) : key;
    for (char& ch : flag) {
      if (ch == '_') ch = '-';
    }
    app.add_option_function<std::string>("--" + flag, [&flags, key](const std::string& v) { flags[key] = v; },
                                         "config key " + key);
  }

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"ntt", "forward negacyclic NTT of a polynomial file (or a seeded random one)"},
      {"intt", "inverse NTT"},
      {"polymul", "negacyclic product of two polynomials"},
      {"sim", "cycle-accurate simulation of ntt, intt or polymul"},
      {"schedule", "schedule export: 'schedule dump'"},
      {"layout-check", "audit the banked layout for same-bank butterfly pairs"},
      {"predict", "closed-form cycle count"}};
  std::string action;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    if (name == "schedule") sub->add_option("action", action, "dump")->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::validation);
  }

  try {
    KeyValues file;
    if (!config_path.empty()) file = read_config_file(config_path);
    for (CLI::App* sub : app.get_subcommands()) flags["command"] = sub->get_name();
    if (!action.empty()) flags["action"] = action;
    const RunConfig config = resolve_config(file, flags);
    return execute(config, std::cout, std::cerr);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::validation);
  }
}
