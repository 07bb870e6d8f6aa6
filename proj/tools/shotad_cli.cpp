// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0
//
// Command line front end. Talks to the pipeline exclusively through the C
// API; config overrides are plain JSON edits applied before the run opens.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "shotad.h"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CLI::ValidationError("--config", "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// "key=value"; the value is parsed as JSON when possible, else kept as a
// string, so --set jobs=4 and --set profile=TV-AD both work.
std::string apply_overrides(const std::string& config_text,
                            const std::vector<std::string>& sets) {
  if (sets.empty()) return config_text;
  nlohmann::ordered_json j =
      nlohmann::ordered_json::parse(config_text, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw CLI::ValidationError("--set", "config file is not a JSON object");
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw CLI::ValidationError("--set", "expected key=value, got " + kv);
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    nlohmann::ordered_json parsed =
        nlohmann::ordered_json::parse(value, nullptr, false);
    if (parsed.is_discarded() || parsed.is_object() || parsed.is_array())
      j[key] = value;
    else
      j[key] = parsed;
  }
  return j.dump();
}

struct RunHandle {
  shotad_run* run = nullptr;
  ~RunHandle() { shotad_run_close(run); }
};

int open_run(const std::string& config_path,
             const std::vector<std::string>& sets, RunHandle& handle) {
  const std::string text = apply_overrides(read_file(config_path), sets);
  char errbuf[1024];
  handle.run = shotad_run_open(text.c_str(), errbuf, sizeof(errbuf));
  if (handle.run == nullptr) {
    std::cerr << "error: " << errbuf << "\n";
    return SHOTAD_ERR_CONFIG;
  }
  return SHOTAD_OK;
}

int fail(const shotad_run* run, int code) {
  std::cerr << "error: " << shotad_run_last_error(run) << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shotad: shot-aware audio description generation and "
               "evaluation"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  std::string stage_name;
  std::string show_stage;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "run config JSON file")
        ->required();
    cmd->add_option("--set", sets,
                    "override a config key, e.g. --set jobs=4 (repeatable)");
  };

  CLI::App* run = app.add_subcommand("run", "run every stage in order");
  add_common(run);

  CLI::App* stage =
      app.add_subcommand("stage", "run a single stage (see 'stages')");
  stage->add_option("name", stage_name, "stage name")->required();
  add_common(stage);

  CLI::App* show =
      app.add_subcommand("show", "print a stage artifact to stdout");
  show->add_option("name", show_stage, "stage name")->required();
  add_common(show);

  CLI::App* stages =
      app.add_subcommand("stages", "list pipeline stages in order");
  CLI::App* version = app.add_subcommand("version", "print the version");

  CLI11_PARSE(app, argc, argv);

  try {
    if (version->parsed()) {
      std::cout << shotad_version() << "\n";
      return 0;
    }
    if (stages->parsed()) {
      for (int i = 0; shotad_stage_name(i) != nullptr; ++i)
        std::cout << shotad_stage_name(i) << "\n";
      return 0;
    }

    RunHandle handle;
    const int open_rc = open_run(config_path, sets, handle);
    if (open_rc != SHOTAD_OK) return open_rc;

    if (run->parsed()) {
      const int rc = shotad_run_all(handle.run);
      if (rc != SHOTAD_OK) return fail(handle.run, rc);
      std::cout << "run complete\n";
      return 0;
    }
    if (stage->parsed()) {
      int ran = 0;
      const int rc = shotad_run_stage(handle.run, stage_name.c_str(), &ran);
      if (rc != SHOTAD_OK) return fail(handle.run, rc);
      std::cout << stage_name << ": " << (ran ? "ran" : "cached") << "\n";
      return 0;
    }
    if (show->parsed()) {
      char* text = nullptr;
      size_t len = 0;
      const int rc =
          shotad_run_read_artifact(handle.run, show_stage.c_str(), &text,
                                   &len);
      if (rc != SHOTAD_OK) return fail(handle.run, rc);
      std::fwrite(text, 1, len, stdout);
      shotad_free(text);
      return 0;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return SHOTAD_ERR_OTHER;
  }
  return 0;
}
