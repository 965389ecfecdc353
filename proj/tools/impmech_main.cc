//
// Copyright 2026 The impmech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// impmech: runs one configured experiment and writes a CSV result table
// plus a JSON sidecar with witnesses.
//
//   impmech verify   --config verify.json --out results/verify.csv
//   impmech sweep    --config sweep.json --seed 7 --jobs 4
//   impmech example1
//   impmech example3 --out ex3.csv

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "harness/config.h"
#include "harness/experiments.h"
#include "harness/results.h"
#include "impmech/status.h"

namespace {

using impmech::harness::ExperimentConfig;
using impmech::harness::ExperimentKind;

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  int jobs = 1;
  bool timing = false;
};

bool KindMatches(const std::string& command, ExperimentKind kind) {
  if (command == "verify") {
    return kind == ExperimentKind::kVerify ||
           kind == ExperimentKind::kPricing ||
           kind == ExperimentKind::kFacility;
  }
  if (command == "sweep") return kind == ExperimentKind::kGapSweep;
  if (command == "example1") return kind == ExperimentKind::kExample1;
  return kind == ExperimentKind::kExample3;
}

ExperimentKind DefaultKind(const std::string& command) {
  if (command == "sweep") return ExperimentKind::kGapSweep;
  if (command == "example1") return ExperimentKind::kExample1;
  if (command == "example3") return ExperimentKind::kExample3;
  return ExperimentKind::kVerify;
}

int Fail(const absl::Status& status) {
  std::cerr << "impmech: " << status << "\n";
  return impmech::harness::ExitCodeFor(status);
}

int Run(const std::string& command, const Flags& flags) {
  ExperimentConfig config;
  if (flags.config.empty()) {
    config = impmech::harness::DefaultConfig(DefaultKind(command));
  } else {
    absl::StatusOr<ExperimentConfig> loaded =
        impmech::harness::LoadConfig(flags.config);
    if (!loaded.ok()) return Fail(loaded.status());
    config = *std::move(loaded);
  }
  if (!KindMatches(command, config.kind)) {
    return Fail(impmech::MakeError(
        impmech::ErrorKind::kConfigInvalid,
        absl::StrCat("config describes a ",
                     impmech::harness::ExperimentKindName(config.kind),
                     " experiment, not ", command)));
  }
  if (flags.seed) config.seed = *flags.seed;
  if (!flags.out.empty()) config.output = flags.out;
  if (flags.jobs < 1) {
    return Fail(impmech::MakeError(impmech::ErrorKind::kConfigInvalid,
                                   "--jobs must be at least 1"));
  }

  absl::StatusOr<impmech::harness::ExperimentResult> result =
      impmech::harness::RunExperiment(config, {flags.jobs});
  if (!result.ok()) return Fail(result.status());

  const std::string csv = impmech::harness::FormatCsv(result->rows,
                                                      flags.timing);
  const nlohmann::json sidecar = impmech::harness::FormatSidecar(
      *result, impmech::harness::ConfigToJson(config));
  if (config.output.empty()) {
    std::cout << csv;
  } else {
    if (absl::Status s = impmech::harness::WriteAtomically(config.output, csv);
        !s.ok()) {
      return Fail(s);
    }
    if (absl::Status s = impmech::harness::WriteAtomically(
            config.output + ".json", sidecar.dump(2) + "\n");
        !s.ok()) {
      return Fail(s);
    }
  }

  for (const impmech::harness::ResultRow& row : result->rows) {
    std::cerr << (row.pass ? "[ok]   " : "[FAIL] ") << row.property;
    if (row.n) std::cerr << " n=" << *row.n;
    if (!row.pass && !row.detail.empty()) std::cerr << " " << row.detail.dump();
    std::cerr << "\n";
  }
  return result->AllPass() ? impmech::harness::kExitOk
                           : impmech::harness::kExitAssertionFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Imposing-mechanism experiment runner"};
  app.require_subcommand(1);
  Flags flags;
  for (const char* name : {"verify", "sweep", "example1", "example3"}) {
    CLI::App* sub = app.add_subcommand(name, absl::StrCat("run ", name));
    sub->add_option("--config", flags.config, "JSON experiment config")
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "master seed (overrides config)");
    sub->add_option("--out", flags.out,
                    "CSV output path; sidecar goes to <out>.json");
    sub->add_option("--jobs", flags.jobs, "worker threads");
    sub->add_flag("--timing", flags.timing, "fill the wall_clock_s column");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return impmech::harness::kExitConfigInvalid;
  }
  return Run(app.get_subcommands().front()->get_name(), flags);
}
