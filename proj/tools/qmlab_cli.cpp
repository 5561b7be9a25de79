// Copyright 2026 The qmlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qmlab command line. Exit status: 0 all checks pass, 1 a check fails,
// 2 inconclusive, 3 bad usage or the run could not be carried out.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qmlab/qmlab.h"

namespace {

constexpr int kExitError = 3;

const char* verdict_text(qmlab_verdict v) {
  switch (v) {
    case QMLAB_VERDICT_PASS: return "pass";
    case QMLAB_VERDICT_FAIL: return "fail";
    case QMLAB_VERDICT_INCONCLUSIVE: return "inconclusive";
  }
  return "?";
}

int report_error(const char* what) {
  std::fprintf(stderr, "qmlab: %s: %s\n", what, qmlab_last_error());
  return kExitError;
}

int run(const std::string& command, const std::string& config_path,
        const std::vector<std::string>& overrides, const std::string& out_dir) {
  qmlab_config* cfg = nullptr;
  const qmlab_status loaded = config_path.empty() ? qmlab_config_parse("", &cfg)
                                                  : qmlab_config_load(config_path.c_str(), &cfg);
  if (loaded != QMLAB_OK) return report_error("config");
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "qmlab: --set expects section.key=value, got '%s'\n", o.c_str());
      qmlab_config_free(cfg);
      return kExitError;
    }
    if (qmlab_config_set(cfg, o.substr(0, eq).c_str(), o.substr(eq + 1).c_str()) != QMLAB_OK) {
      qmlab_config_free(cfg);
      return report_error("--set");
    }
  }

  qmlab_report* report = nullptr;
  const qmlab_status ran = qmlab_run(command.c_str(), cfg, &report);
  qmlab_config_free(cfg);
  if (ran != QMLAB_OK) return report_error(command.c_str());
  if (qmlab_report_write(report, out_dir.c_str()) != QMLAB_OK) {
    qmlab_report_free(report);
    return report_error("writing report");
  }

  const size_t n = qmlab_report_check_count(report);
  for (size_t i = 0; i < n; ++i) {
    const char* name = nullptr;
    const char* detail = nullptr;
    qmlab_verdict v;
    qmlab_report_check(report, i, &name, &v, &detail);
    std::printf("%-12s %s", verdict_text(v), name);
    if (detail && *detail) std::printf(": %s", detail);
    std::printf("\n");
  }
  qmlab_verdict verdict;
  qmlab_report_verdict(report, &verdict);
  std::printf("%s: %s (report in %s)\n", command.c_str(), verdict_text(verdict),
              out_dir.c_str());
  qmlab_report_free(report);
  return static_cast<int>(verdict);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasimodes of the semiclassical Gross-Pitaevskii equation on circles"};
  app.set_version_flag("--version", std::string(qmlab_version()));
  app.require_subcommand(1);

  std::string config_path, out_dir, which;
  std::vector<std::string> overrides;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory")->required();
    sub->add_option("--set", overrides, "override a key, section.key=value (repeatable)");
  };

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"ground-state", "ground state, energy curve and slope at zero coupling"},
      {"cascade", "ground state, spectral gap and both correction levels"},
      {"quasimode", "quasimode profile and its residual at one h"},
      {"residual-scaling", "residual norms across the h sweep"},
      {"evolve", "evolve quasimodes and track the deviation"},
  };
  for (const auto& [name, help] : commands) common(app.add_subcommand(name, help));

  CLI::App* experiment = app.add_subcommand("experiment", "instability experiments");
  experiment->add_option("name", which, "geometric-rate, geometric-blowup or projective")
      ->required()
      ->check(CLI::IsMember({"geometric-rate", "geometric-blowup", "projective"}));
  common(experiment);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitError;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  const std::string command = chosen == experiment ? which : chosen->get_name();
  return run(command, config_path, overrides, out_dir);
}
