#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "hyperwalk/experiment.hpp"

namespace {

using hyperwalk::ConfigKey;
using hyperwalk::ValueType;

struct Invocation {
  std::string config_path;
  std::string out;
  unsigned workers = 1;
  std::map<std::string, std::string> text;
  std::map<std::string, bool> switches;
};

bool key_applies(const ConfigKey& key, const std::string& kind) {
  if (kind.empty() || key.kinds.empty()) return true;
  for (const auto& k : key.kinds) {
    if (k == kind) return true;
  }
  return false;
}

std::string option_names(const std::string& key) {
  std::string dashed = key;
  for (char& c : dashed) {
    if (c == '_') c = '-';
  }
  return dashed == key ? "--" + key : "--" + dashed + ",--" + key;
}

// Registers one option per schema key accepted by `kind` (all keys when empty).
void add_experiment_options(CLI::App& cmd, Invocation& inv, const std::string& kind) {
  cmd.add_option("--config", inv.config_path, "JSON config file (flags override its values)");
  cmd.add_option("--out", inv.out, "output directory (default: hyperwalk-out/<kind>)");
  cmd.add_option("--workers", inv.workers, "worker threads; results do not depend on it")->check(CLI::PositiveNumber);
  for (const auto& key : hyperwalk::config_schema()) {
    if (key.name == "schema_version" || (key.name == "kind" && !kind.empty())) continue;
    if (!key_applies(key, kind)) continue;
    if (key.type == ValueType::Boolean) {
      cmd.add_flag(option_names(key.name), inv.switches[key.name], key.help);
    } else {
      cmd.add_option(option_names(key.name), inv.text[key.name], key.help);
    }
  }
}

std::optional<nlohmann::json> load_document(const std::string& path) {
  if (path.empty()) return std::nullopt;
  std::ifstream in(path);
  if (!in) throw hyperwalk::ConfigError("cannot read config file " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return hyperwalk::parse_config_text(os.str());
}

int execute(CLI::App& cmd, Invocation& inv, const std::string& kind) {
  std::map<std::string, std::string> flags;
  for (const auto& [name, value] : inv.text) {
    if (cmd.get_option(option_names(name).substr(0, option_names(name).find(',')))->count() > 0) flags[name] = value;
  }
  for (const auto& [name, value] : inv.switches) {
    if (cmd.get_option(option_names(name).substr(0, option_names(name).find(',')))->count() > 0) {
      flags[name] = value ? "true" : "false";
    }
  }
  if (!kind.empty()) flags["kind"] = kind;
  std::optional<nlohmann::json> doc;
  try {
    doc = load_document(inv.config_path);
  } catch (const hyperwalk::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  std::string out = inv.out;
  if (out.empty()) {
    std::string k = kind;
    if (k.empty() && flags.count("kind")) k = flags["kind"];
    if (k.empty() && doc && doc->contains("kind") && (*doc)["kind"].is_string()) k = (*doc)["kind"].get<std::string>();
    out = "hyperwalk-out/" + (k.empty() ? std::string("run") : k);
  }
  return hyperwalk::run_and_report(doc, flags, inv.workers, out, std::cout, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random walks, quasiconvex sets and the comparison chain: experiment runner"};
  app.require_subcommand(1);
  app.set_version_flag("--version", hyperwalk::kToolVersion);

  std::map<std::string, Invocation> invocations;
  std::map<std::string, CLI::App*> commands;
  commands["run"] = app.add_subcommand("run", "run an experiment of any kind (--kind)");
  add_experiment_options(*commands["run"], invocations["run"], "");
  for (const auto& kind : hyperwalk::experiment_kinds()) {
    commands[kind] = app.add_subcommand(kind, "run a " + kind + " experiment");
    add_experiment_options(*commands[kind], invocations[kind], kind);
  }
  std::string report_dir;
  auto* report = app.add_subcommand("report", "print the summary of an existing output directory");
  report->add_option("--out,dir", report_dir, "output directory of a previous run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (report->parsed()) return hyperwalk::report_run(report_dir, std::cout, std::cerr);
  for (auto& [name, cmd] : commands) {
    if (cmd->parsed()) return execute(*cmd, invocations[name], name == "run" ? "" : name);
  }
  return 2;
}
