// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0
//
// Orchestration: twelve cacheable stages from manifest ingest to the text
// report, over pluggable backends. Every stage writes one artifact into
// the run store and is skipped when its cache key is unchanged.

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "shotad/backends.hpp"
#include "shotad/corpus.hpp"
#include "shotad/shotseg.hpp"
#include "shotad/threads.hpp"

namespace shotad {

struct RunConfig {
  std::string manifest_path;
  std::string run_dir;
  std::string profile = "CMD-AD";
  std::uint64_t seed = 0;
  std::string mode = "single";   // single | joint | independent
  std::string backend = "mock";  // mock | remote

  // Remote backend plumbing; ignored for mock.
  std::string endpoint;
  std::string credential_env;  // env var NAME; the value is never stored
  std::string model;
  int max_attempts = 3;
  double backoff_seconds = 0.5;
  int requests_per_minute = 0;
  int max_concurrency = 0;

  ShotParams shot_params;
  ThreadParams thread_params;
  int budget_in = 16;
  int budget_out = 16;
  int max_past = 2;
  int max_future = 2;
  std::string scale_backend = "heuristic";  // heuristic | constant:K

  // Sampling for independent assistant candidates.
  double top_p = 0.90;
  double temperature = 0.6;

  int recall_k = 1;
  int recall_n = 5;
  int jobs = 1;
};

// Flat JSON, unknown keys rejected by name.
RunConfig parse_run_config(const std::string& json_text);
void validate(const RunConfig& cfg);
nlohmann::ordered_json run_config_to_json(const RunConfig& cfg);

// ingest shots context threads scales stage1 stage2 assist select
// score-actions eval report
const std::vector<std::string>& stage_names();

class Pipeline {
 public:
  // transport: injected for tests; defaults to HTTP when remote.
  explicit Pipeline(RunConfig cfg, Transport* transport = nullptr);

  // Runs one stage; throws on failure. Returns false when the stage was
  // already fresh and was skipped.
  bool run_stage(const std::string& stage);

  // All stages in dependency order; mode picks stage2 or assist.
  void run_all();

  RunStore& store() { return store_; }
  const RunConfig& config() const { return cfg_; }
  const DatasetProfile& profile() const { return profile_; }
  const BackendStats& last_stats() const { return last_stats_; }

 private:
  struct ClipShots {
    double fps = 0;
    int frame_count = 0;
    std::vector<Shot> shots;
  };

  bool run_ingest();
  bool run_shots();
  bool run_context();
  bool run_threads();
  bool run_scales();
  bool run_stage1();
  bool run_stage2();
  bool run_assist();
  bool run_select();
  bool run_score_actions();
  bool run_eval();
  bool run_report();

  void ensure_backends();
  Manifest load_ingested() const;
  std::map<std::string, ClipShots> load_clip_shots() const;
  std::map<std::string, nlohmann::ordered_json> load_rows(
      const std::string& stage, const std::string& id_key) const;
  std::string prediction_source() const;  // "select" or "stage2"
  void write_stats(const std::string& stage, bool cached);
  int effective_jobs() const;

  RunConfig cfg_;
  RunStore store_;
  DatasetProfile profile_;
  Transport* transport_ = nullptr;
  std::unique_ptr<Transport> own_transport_;
  bool backends_ready_ = false;
  std::unique_ptr<LlmBackend> llm_;
  std::unique_ptr<VideoLlmBackend> videollm_;
  std::unique_ptr<EmbeddingBackend> embedder_;
  std::unique_ptr<ParserBackend> parser_;
  std::unique_ptr<FeatureExtractorBackend> features_;
  BackendStats last_stats_;
};

}  // namespace shotad
