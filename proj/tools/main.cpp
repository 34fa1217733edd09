// SPDX-License-Identifier: Apache-2.0
//
// conelab command line front end. Thin wrapper over the C API in conelab.h:
// reads a JSON config, applies command line overrides, runs one command and
// writes the JSON report.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "conelab.h"

namespace {

int exit_code_for(clab_status st) {
  switch (st) {
    case CLAB_OK: return 0;
    case CLAB_E_CONFIG:
    case CLAB_E_INVALID: return 2;
    case CLAB_E_BUDGET: return 3;
    default: return 4;
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"conelab: exact arithmetic and counting experiments on ternary quadratic cones"};
  app.require_subcommand(1);
  app.fallthrough(); // allow global flags after the subcommand

  std::string config_path, out_dir;
  long long threads = -1, seed = -1, budget = -1;
  app.add_option("--config", config_path, "JSON config file (default: empty config)");
  app.add_option("--out", out_dir, "directory for the JSON report (default: stdout)");
  app.add_option("--threads", threads, "worker threads override");
  app.add_option("--seed", seed, "RNG seed override");
  app.add_option("--budget", budget, "work budget override (operations)");

  size_t n_commands = 0;
  const char* const* names = clab_command_names(&n_commands);
  std::vector<CLI::App*> subs;
  for (size_t i = 0; i < n_commands; ++i) subs.push_back(app.add_subcommand(names[i]));

  CLI11_PARSE(app, argc, argv);

  std::string command;
  for (size_t i = 0; i < n_commands; ++i)
    if (subs[i]->parsed()) command = names[i];

  nlohmann::json cfg = nlohmann::json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "conelab: cannot open config " << config_path << "\n";
      return 2;
    }
    cfg = nlohmann::json::parse(in, nullptr, false);
    if (cfg.is_discarded()) {
      std::cerr << "conelab: malformed JSON in " << config_path << "\n";
      return 2;
    }
  }
  if (threads >= 0) cfg["threads"] = threads;
  if (seed >= 0) cfg["seed"] = seed;
  if (budget >= 0) cfg["budget"] = budget;

  char* report = nullptr;
  clab_status st = clab_run_json(command.c_str(), cfg.dump().c_str(), &report);
  if (st != CLAB_OK) {
    std::cerr << "conelab " << command << ": " << clab_last_error() << "\n";
    return exit_code_for(st);
  }

  if (out_dir.empty()) {
    std::cout << report << "\n";
  } else {
    std::filesystem::create_directories(out_dir);
    auto path = std::filesystem::path(out_dir) / (command + "-report.json");
    std::ofstream out(path);
    out << report << "\n";
    std::cout << path.string() << "\n";
  }
  clab_string_free(report);
  return 0;
}
