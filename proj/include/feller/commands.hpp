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
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"

#include "feller/config.hpp"

namespace feller {

/*
 * Each command writes its files into `out_dir` (created if missing) and
 * returns the JSON document it wrote last.
 *
 *   analyze   report.json, curves.csv
 *   simulate  ensemble.flpe, summary.json (and ensemble.csv on request)
 *   validate  margins.csv, validation.json
 */
nlohmann::json run_analyze(const ExperimentConfig& config, const std::filesystem::path& out_dir);
nlohmann::json run_simulate(const ExperimentConfig& config, const std::filesystem::path& out_dir);
nlohmann::json run_validate(const ExperimentConfig& config, const std::filesystem::path& out_dir);

/* The "verdicts" object of an analyze report. */
nlohmann::json report_verdicts(const nlohmann::json& report);

/* The configuration echoed in a report, parsed again. */
ExperimentConfig config_from_report(const nlohmann::json& report);

struct CommandLine {
  std::string command;  // analyze, simulate or validate
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
};

/*
 * Loads the config, applies flag overrides (recorded in the echo), runs the
 * command and maps failures to exit codes: 0 success, 2 configuration or
 * precondition error, 3 numerical failure.
 */
int execute(const CommandLine& cl, std::ostream& out, std::ostream& err);

}  // namespace feller
