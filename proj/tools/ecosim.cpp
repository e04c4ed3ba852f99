#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "ecosim/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"ecosim: run, explore and plan over controlled-English world descriptions"};
  app.require_subcommand(1);

  ecosim::CliOptions opts;
  std::string prelude = "core";
  app.add_option("--lib-path", opts.lib_path, "Extra library directories (colon-separated)");
  app.add_option("--depth-limit", opts.depth_limit, "Planner depth limit")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--json", opts.json, "Machine-readable output");
  app.add_flag("--continue-on-error", opts.continue_on_error,
               "Keep running a scenario after a failed step");

  std::string run_path;
  auto* run = app.add_subcommand("run", "Run a scenario file and check its assertions");
  run->add_option("file", run_path, "Scenario file")->required();

  std::string plan_path;
  std::optional<std::string> goal;
  auto* plan = app.add_subcommand("plan", "Find a shortest action sequence reaching a goal");
  plan->add_option("file", plan_path, "Scenario file")->required();
  plan->add_option("--goal", goal, "Goal statement, e.g. \"Goal: the bag is burst.\"");

  auto* repl = app.add_subcommand("repl", "Interactive session");
  repl->add_option("--prelude", prelude, "Comma-separated libraries to load");

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "HTTP/JSON session service");
  serve->add_option("--prelude", prelude, "Default libraries for new sessions");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  opts.prelude.clear();
  std::stringstream ss(prelude);
  for (std::string name; std::getline(ss, name, ',');) {
    if (!name.empty()) opts.prelude.push_back(name);
  }

  if (*run) return ecosim::cmd_run(run_path, opts, std::cout, std::cerr);
  if (*plan) return ecosim::cmd_plan(plan_path, goal, opts, std::cout, std::cerr);
  if (*repl) return ecosim::cmd_repl(std::cin, std::cout, opts);
  return ecosim::serve(host, port, opts);
}
