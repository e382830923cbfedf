#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qwalk/runner.hpp"

namespace {

using qwalk::runner::json;

struct Options {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  double tol = 0.0;
  bool tol_set = false;
  std::vector<std::string> params;
  bool quiet = false;
};

json load_config(const Options& opt, const std::string& command) {
  json j = json::object();
  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path);
    if (!in) throw qwalk::runner::ValidationError("cannot open config " + opt.config_path, {"--config"});
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw qwalk::runner::ValidationError(std::string("config is not valid JSON: ") + e.what(), {"--config"});
    }
    if (!j.is_object()) throw qwalk::runner::ValidationError("config must be a JSON object", {"--config"});
    if (j.contains("command") && j["command"] != command) {
      throw qwalk::runner::ValidationError("config command does not match subcommand " + command, {"command"});
    }
  }
  j["command"] = command;
  if (!j.contains("params")) j["params"] = json::object();
  for (const auto& kv : opt.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw qwalk::runner::ValidationError("--param expects KEY=VALUE, got " + kv, {"--param"});
    }
    const std::string key = kv.substr(0, eq);
    const std::string text = kv.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;
    j["params"][key] = value;
  }
  if (opt.seed_set) j["rng_seed"] = opt.seed;
  if (!opt.out.empty()) j["output"] = opt.out;
  if (opt.tol_set) j["tol"] = opt.tol;
  return j;
}

int execute(const Options& opt, const std::string& command) {
  try {
    const auto cfg = qwalk::runner::ExperimentConfig::from_json(load_config(opt, command));
    const auto rec = qwalk::runner::run(cfg);
    qwalk::runner::write_outputs(rec, cfg.output);
    if (!opt.quiet) {
      json brief = rec.scalars;
      if (brief.contains("points") && brief["points"].size() > 20) brief.erase("points");
      std::cout << brief.dump(2) << "\n";
      std::cout << "wrote " << cfg.output << "/result.json";
      for (const auto& t : rec.tables) std::cout << " " << t.name << ".csv";
      std::cout << "\n";
    }
    return 0;
  } catch (const qwalk::runner::ValidationError& e) {
    json err = {{"error", "validation"}, {"message", e.what()}, {"fields", e.fields()}};
    std::cerr << err.dump(2) << "\n";
    return 2;
  } catch (const qwalk::runner::SimulationError& e) {
    json err = {{"error", "simulation"}, {"module", e.module()}, {"message", e.what()}};
    std::cerr << err.dump(2) << "\n";
    return 1;
  } catch (const std::exception& e) {
    json err = {{"error", "simulation"}, {"message", e.what()}};
    std::cerr << err.dump(2) << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qwalk: topological quantum walk and subspace rotation simulations"};
  app.require_subcommand(1);
  Options opt;
  std::string chosen;

  for (const auto& name : qwalk::runner::commands()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", opt.config_path, "JSON config file");
    sub->add_option("--seed", opt.seed, "RNG seed")->each([&](const std::string&) { opt.seed_set = true; });
    sub->add_option("--out", opt.out, "output directory (default: config output or ./out)");
    sub->add_option("--tol", opt.tol, "tolerance for pass/fail checks")->each([&](const std::string&) {
      opt.tol_set = true;
    });
    sub->add_option("-p,--param", opt.params, "override a param, KEY=JSON");
    sub->add_flag("-q,--quiet", opt.quiet, "do not print the summary");
    sub->callback([&chosen, name] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  return execute(opt, chosen);
}
