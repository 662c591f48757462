/*
 * Copyright 2026 The e2ecov Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// e2ecov: endpoint coverage of end-to-end test suites.
//
// Exit status: 0 success, 1 coverage gate failed, 2 input or configuration
// error, 3 internal error. Warnings go to standard error.

#include <cstdio>
#include <iostream>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "e2ecov/config.hpp"
#include "e2ecov/errors.hpp"
#include "e2ecov/pipeline.hpp"
#include "e2ecov/serialize.hpp"

namespace {

using e2ecov::RunConfig;

constexpr int kExitOk = 0;
constexpr int kExitGateFailed = 1;
constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

struct OptionSpec {
  const char* key;
  const char* help;
  bool repeatable;
  bool is_flag = false;
};

const std::vector<OptionSpec> kInventoryOptions{
    {"source-root", "Source tree to scan for controller annotations (repeatable)", true},
    {"services", "Services manifest JSON naming service directories and gateway flags", false},
    {"single-service", "Treat each source root as one service with this id", false},
    {"openapi", "OpenAPI document for a service, as <service>=<file> (repeatable)", true},
    {"inventory", "Prebuilt inventory JSON to merge in", false},
    {"gateway-service", "Mark a service as an API gateway (repeatable)", true},
    {"exclude-path-regex", "Drop endpoints whose path matches this ECMAScript regex (repeatable)", true},
};

const std::vector<OptionSpec> kTraceOptions{
    {"traces", "Trace file (repeatable)", true},
    {"format", "Trace file format: jsonl or skywalking-es", false},
    {"manifest", "Test manifest JSON with per-test time windows", false},
    {"clock-skew", "Offset added to every test window, e.g. 250ms or -2s", false},
    {"relation-index", "Index name of endpoint-relation records", false},
    {"source-field", "Field holding the encoded source endpoint", false},
    {"dest-field", "Field holding the encoded destination endpoint", false},
    {"timestamp-field", "Timestamp field, tried in order (repeatable)", true},
    {"entry-marker", "Decoded source service marking calls from the UI", false},
};

const std::vector<OptionSpec> kReportOptions{
    {"color-scale", "Coverage color buckets, e.g. 0:red,50:orange,99.99:yellow,100:green", false},
    {"from-cache", "Reuse stage outputs whose inputs are unchanged", false, true},
};

struct Command {
  CLI::App* app = nullptr;
  std::string config_file;
  std::map<std::string, std::vector<std::string>> values;
  std::map<std::string, CLI::Option*> options;
};

void add_options(Command& cmd, const std::vector<OptionSpec>& specs) {
  for (const auto& spec : specs) {
    std::string name = std::string("--") + spec.key;
    auto& slot = cmd.values[spec.key];
    CLI::Option* opt = nullptr;
    if (spec.is_flag) {
      opt = cmd.app->add_flag_callback(name, [&slot] { slot = {"true"}; }, spec.help);
    } else {
      opt = cmd.app->add_option(name, slot, spec.help);
      if (spec.repeatable) {
        opt->allow_extra_args(false)->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
      } else {
        opt->expected(1)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
      }
    }
    cmd.options[spec.key] = opt;
  }
}

Command& add_command(CLI::App& app, std::vector<Command>& cmds, const char* name, const char* help,
                     std::initializer_list<const std::vector<OptionSpec>*> groups) {
  Command& cmd = cmds.emplace_back();
  cmd.app = app.add_subcommand(name, help);
  cmd.app->add_option("--config", cmd.config_file, "Key-value config file; command-line flags take precedence");
  add_options(cmd, {{"out", "Output directory (default e2ecov-out)", false}});
  for (const auto* g : groups) add_options(cmd, *g);
  return cmd;
}

// Config file values first, then everything given on the command line.
RunConfig resolve(const Command& cmd) {
  RunConfig cfg;
  std::set<std::string> given;
  for (const auto& [key, opt] : cmd.options)
    if (opt->count() > 0) given.insert(key);
  if (!cmd.config_file.empty()) {
    auto entries = e2ecov::parse_config(e2ecov::read_file(cmd.config_file));
    e2ecov::apply_config(cfg, entries, given);
  }
  for (const auto& key : given) e2ecov::set_option(cfg, key, cmd.values.at(key));
  return cfg;
}

void print_warnings(const e2ecov::Diagnostics& diag) {
  for (const auto& w : diag.warnings()) std::cerr << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Endpoint coverage of end-to-end test suites in microservice systems"};
  app.require_subcommand(1);
  std::vector<Command> cmds;
  cmds.reserve(4);
  Command& extract = add_command(app, cmds, "extract", "Build the endpoint inventory", {&kInventoryOptions});
  Command& ingest = add_command(app, cmds, "ingest", "Cut traces into per-test call logs", {&kTraceOptions});
  Command& analyze = add_command(app, cmds, "analyze", "Match calls and write coverage reports",
                                 {&kInventoryOptions, &kTraceOptions, &kReportOptions});
  Command& check = add_command(app, cmds, "check", "Analyze, then fail when suite coverage is below a threshold",
                               {&kInventoryOptions, &kTraceOptions, &kReportOptions});
  add_options(check, {{"min-suite-coverage", "Minimum suite coverage in percent", false}});

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  e2ecov::Diagnostics diag;
  int status = kExitOk;
  try {
    if (extract.app->parsed()) {
      RunConfig cfg = resolve(extract);
      e2ecov::cmd_extract(cfg, diag);
      std::cout << "inventory written to " << (cfg.out_dir / "inventory.json").string() << '\n';
    } else if (ingest.app->parsed()) {
      RunConfig cfg = resolve(ingest);
      e2ecov::cmd_ingest(cfg, diag);
      std::cout << "call logs written to " << cfg.out_dir.string() << '\n';
    } else if (analyze.app->parsed()) {
      RunConfig cfg = resolve(analyze);
      auto report = e2ecov::cmd_analyze(cfg, diag);
      std::printf("suite coverage %.2f%% (%zu/%zu endpoints); reports written to %s\n",
                  report.suite_coverage * 100.0, report.suite_tested, report.universe, cfg.out_dir.c_str());
    } else if (check.app->parsed()) {
      RunConfig cfg = resolve(check);
      e2ecov::CoverageReport report;
      bool pass = e2ecov::cmd_check(cfg, diag, &report);
      std::printf("suite coverage %.2f%% %s threshold %.2f%%: %s\n", report.suite_coverage * 100.0,
                  pass ? ">=" : "<", *cfg.min_suite_coverage, pass ? "PASS" : "FAIL");
      status = pass ? kExitOk : kExitGateFailed;
    }
  } catch (const e2ecov::InputError& e) {
    print_warnings(diag);
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::filesystem::filesystem_error& e) {
    print_warnings(diag);
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    print_warnings(diag);
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  print_warnings(diag);
  return status;
}
