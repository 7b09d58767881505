/*
 * Copyright (C) 2026 The feller-toolkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "feller/commands.hpp"
#include "feller/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Feller process analysis toolkit"};
  app.set_version_flag("--version", std::string(feller::kToolkitName) + " " + feller::kToolkitVersion);
  app.require_subcommand(1);

  feller::CommandLine cl;
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
  unsigned threads = 0;
  for (const char* name : {"analyze", "simulate", "validate"}) {
    CLI::App* sub = app.add_subcommand(name, std::string(name) + " an experiment config");
    sub->add_option("--config", config, "experiment config (JSON)")->required();
    sub->add_option("--seed", seed, "root seed, overrides simulation.seed");
    sub->add_option("--out", out, "output directory, overrides output.directory");
    sub->add_option("--threads", threads, "worker threads (0: all cores)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  CLI::App* sub = app.get_subcommands().front();
  cl.command = sub->get_name();
  cl.config = config;
  if (sub->count("--seed")) cl.seed = seed;
  if (sub->count("--out")) cl.out = out;
  if (sub->count("--threads")) cl.threads = threads;
  return feller::execute(cl, std::cout, std::cerr);
}
