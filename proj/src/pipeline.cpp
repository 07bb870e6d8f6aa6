// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0

#include "shotad/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <thread>

#include "shotad/actionscore.hpp"
#include "shotad/context.hpp"
#include "shotad/errors.hpp"
#include "shotad/evalsuite.hpp"
#include "shotad/prompts.hpp"
#include "shotad/scales.hpp"
#include "shotad/util.hpp"
#include "shotad/video.hpp"

namespace shotad {

namespace {

using nlohmann::ordered_json;

const std::vector<std::string> kStages = {
    "ingest", "shots",  "context",       "threads", "scales", "stage1",
    "stage2", "assist", "select", "score-actions", "eval",   "report"};

SamplingParams greedy_params(std::uint64_t seed) {
  return SamplingParams{1.0, 0.0, seed};
}

// Per-AD work result: the artifact row plus log lines, written in order
// after the parallel section so artifacts and logs stay deterministic.
struct TaskOut {
  ordered_json row;
  std::vector<std::string> logs;
  std::vector<std::string> flags;
};

template <typename Fn>
std::vector<TaskOut> map_indexed(int n, int jobs, BackendStats& stats,
                                 Fn&& fn) {
  std::vector<TaskOut> out(static_cast<std::size_t>(n));
  jobs = std::max(1, std::min(jobs, n));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(i, stats);
    return out;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::mutex err_mutex;
  std::exception_ptr err;
  std::vector<BackendStats> locals(static_cast<std::size_t>(jobs));
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(jobs));
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n || failed.load()) return;
        try {
          out[static_cast<std::size_t>(i)] =
              fn(i, locals[static_cast<std::size_t>(w)]);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!err) err = std::current_exception();
          failed.store(true);
          return;
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (err) std::rethrow_exception(err);
  for (const auto& l : locals) stats.merge(l);
  return out;
}

// Re-throws with the AD id prefixed, preserving the error type so exit
// codes survive.
template <typename Fn>
auto with_ad_context(const std::string& ad_id, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    throw ConfigError("ad " + ad_id + ": " + e.what());
  } catch (const MissingArtifactError& e) {
    throw MissingArtifactError(e.stage(), "ad " + ad_id + ": " + e.what());
  } catch (const BackendError& e) {
    throw BackendError("ad " + ad_id + ": " + e.what(), e.attempts());
  } catch (const IoError& e) {
    throw IoError("ad " + ad_id + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError("ad " + ad_id + ": " + e.what());
  } catch (const Error& e) {
    throw Error("ad " + ad_id + ": " + e.what());
  }
}

std::vector<std::string> jsonl_lines(const std::string& payload) {
  std::vector<std::string> lines;
  std::istringstream in(payload);
  std::string line;
  while (std::getline(in, line)) {
    if (!trim(line).empty()) lines.push_back(line);
  }
  return lines;
}

std::string payload_of(const std::vector<TaskOut>& tasks) {
  std::string payload;
  for (const auto& t : tasks) payload += t.row.dump() + "\n";
  return payload;
}

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

std::string fmt(double v, int prec = 3) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*f", prec, v);
  return buf;
}

}  // namespace

const std::vector<std::string>& stage_names() { return kStages; }

RunConfig parse_run_config(const std::string& json_text) {
  ordered_json j = ordered_json::parse(json_text, nullptr, false);
  if (j.is_discarded())
    throw ConfigError("config: not valid JSON");
  if (!j.is_object())
    throw ConfigError("config: top level must be a JSON object");

  RunConfig cfg;
  auto str = [](const ordered_json& v, const char* key) {
    if (!v.is_string())
      throw ConfigError(std::string("config: key '") + key +
                        "' must be a string");
    return v.get<std::string>();
  };
  auto num = [](const ordered_json& v, const char* key) {
    if (!v.is_number())
      throw ConfigError(std::string("config: key '") + key +
                        "' must be a number");
    return v.get<double>();
  };
  auto integer = [&](const ordered_json& v, const char* key) {
    if (!v.is_number_integer() && !v.is_number_unsigned())
      throw ConfigError(std::string("config: key '") + key +
                        "' must be an integer");
    return v.get<std::int64_t>();
  };

  for (const auto& [key, value] : j.items()) {
    if (key == "manifest") {
      cfg.manifest_path = str(value, "manifest");
    } else if (key == "run_dir") {
      cfg.run_dir = str(value, "run_dir");
    } else if (key == "profile") {
      cfg.profile = str(value, "profile");
    } else if (key == "seed") {
      const auto v = integer(value, "seed");
      if (v < 0) throw ConfigError("config: key 'seed' must be >= 0");
      cfg.seed = static_cast<std::uint64_t>(v);
    } else if (key == "mode") {
      cfg.mode = str(value, "mode");
    } else if (key == "backend") {
      cfg.backend = str(value, "backend");
    } else if (key == "endpoint") {
      cfg.endpoint = str(value, "endpoint");
    } else if (key == "credential_env") {
      cfg.credential_env = str(value, "credential_env");
    } else if (key == "model") {
      cfg.model = str(value, "model");
    } else if (key == "max_attempts") {
      cfg.max_attempts = static_cast<int>(integer(value, "max_attempts"));
    } else if (key == "backoff_seconds") {
      cfg.backoff_seconds = num(value, "backoff_seconds");
    } else if (key == "requests_per_minute") {
      cfg.requests_per_minute =
          static_cast<int>(integer(value, "requests_per_minute"));
    } else if (key == "max_concurrency") {
      cfg.max_concurrency =
          static_cast<int>(integer(value, "max_concurrency"));
    } else if (key == "shot_threshold") {
      cfg.shot_params.adaptive_ratio_threshold = num(value, "shot_threshold");
    } else if (key == "shot_window") {
      cfg.shot_params.window = static_cast<int>(integer(value, "shot_window"));
    } else if (key == "min_shot_len") {
      cfg.shot_params.min_shot_len = num(value, "min_shot_len");
    } else if (key == "thread_n") {
      cfg.thread_params.n = static_cast<int>(integer(value, "thread_n"));
    } else if (key == "thread_tau") {
      cfg.thread_params.tau = num(value, "thread_tau");
    } else if (key == "thread_epsilon") {
      cfg.thread_params.epsilon = num(value, "thread_epsilon");
    } else if (key == "budget_in") {
      cfg.budget_in = static_cast<int>(integer(value, "budget_in"));
    } else if (key == "budget_out") {
      cfg.budget_out = static_cast<int>(integer(value, "budget_out"));
    } else if (key == "max_past") {
      cfg.max_past = static_cast<int>(integer(value, "max_past"));
    } else if (key == "max_future") {
      cfg.max_future = static_cast<int>(integer(value, "max_future"));
    } else if (key == "scale_backend") {
      cfg.scale_backend = str(value, "scale_backend");
    } else if (key == "top_p") {
      cfg.top_p = num(value, "top_p");
    } else if (key == "temperature") {
      cfg.temperature = num(value, "temperature");
    } else if (key == "recall_k") {
      cfg.recall_k = static_cast<int>(integer(value, "recall_k"));
    } else if (key == "recall_n") {
      cfg.recall_n = static_cast<int>(integer(value, "recall_n"));
    } else if (key == "jobs") {
      cfg.jobs = static_cast<int>(integer(value, "jobs"));
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  validate(cfg);
  return cfg;
}

void validate(const RunConfig& cfg) {
  if (cfg.manifest_path.empty())
    throw ConfigError("config: key 'manifest' is required");
  if (cfg.run_dir.empty())
    throw ConfigError("config: key 'run_dir' is required");
  if (cfg.profile != "CMD-AD" && cfg.profile != "TV-AD" &&
      cfg.profile != "MAD-Eval")
    throw ConfigError("config: profile must be CMD-AD, TV-AD, or MAD-Eval");
  if (cfg.mode != "single" && cfg.mode != "joint" &&
      cfg.mode != "independent")
    throw ConfigError("config: mode must be single, joint, or independent");
  if (cfg.backend != "mock" && cfg.backend != "remote")
    throw ConfigError("config: backend must be mock or remote");
  if (cfg.backend == "remote") {
    if (cfg.endpoint.empty())
      throw ConfigError("config: remote backend requires 'endpoint'");
    if (cfg.credential_env.empty())
      throw ConfigError("config: remote backend requires 'credential_env'");
  }
  if (cfg.max_attempts < 1)
    throw ConfigError("config: max_attempts must be >= 1");
  if (cfg.backoff_seconds < 0)
    throw ConfigError("config: backoff_seconds must be >= 0");
  if (cfg.requests_per_minute < 0)
    throw ConfigError("config: requests_per_minute must be >= 0");
  if (cfg.max_concurrency < 0)
    throw ConfigError("config: max_concurrency must be >= 0");
  if (!(cfg.shot_params.adaptive_ratio_threshold > 0))
    throw ConfigError("config: shot_threshold must be positive");
  if (cfg.shot_params.window < 1)
    throw ConfigError("config: shot_window must be >= 1");
  if (!(cfg.shot_params.min_shot_len > 0))
    throw ConfigError("config: min_shot_len must be positive");
  try {
    validate(cfg.thread_params);
  } catch (const Error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (cfg.budget_in < 1 || cfg.budget_out < 0)
    throw ConfigError("config: budgets must be budget_in >= 1, "
                      "budget_out >= 0");
  if (cfg.max_past < 0 || cfg.max_future < 0)
    throw ConfigError("config: max_past and max_future must be >= 0");
  if (cfg.scale_backend != "heuristic") {
    const std::string prefix = "constant:";
    if (cfg.scale_backend.rfind(prefix, 0) != 0)
      throw ConfigError(
          "config: scale_backend must be 'heuristic' or 'constant:K'");
    const std::string rest = cfg.scale_backend.substr(prefix.size());
    if (rest.size() != 1 || rest[0] < '0' || rest[0] > '4')
      throw ConfigError("config: constant scale class must be 0..4");
  }
  if (!(cfg.top_p > 0.0) || cfg.top_p > 1.0)
    throw ConfigError("config: top_p must be in (0, 1]");
  if (cfg.temperature < 0)
    throw ConfigError("config: temperature must be >= 0");
  if (cfg.recall_k < 1 || cfg.recall_n < cfg.recall_k)
    throw ConfigError("config: need recall_n >= recall_k >= 1");
  if (cfg.jobs < 1) throw ConfigError("config: jobs must be >= 1");
}

ordered_json run_config_to_json(const RunConfig& cfg) {
  return ordered_json{
      {"manifest", cfg.manifest_path},
      {"run_dir", cfg.run_dir},
      {"profile", cfg.profile},
      {"seed", cfg.seed},
      {"mode", cfg.mode},
      {"backend", cfg.backend},
      {"endpoint", cfg.endpoint},
      {"credential_env", cfg.credential_env},
      {"model", cfg.model},
      {"max_attempts", cfg.max_attempts},
      {"backoff_seconds", cfg.backoff_seconds},
      {"requests_per_minute", cfg.requests_per_minute},
      {"max_concurrency", cfg.max_concurrency},
      {"shot_threshold", cfg.shot_params.adaptive_ratio_threshold},
      {"shot_window", cfg.shot_params.window},
      {"min_shot_len", cfg.shot_params.min_shot_len},
      {"thread_n", cfg.thread_params.n},
      {"thread_tau", cfg.thread_params.tau},
      {"thread_epsilon", cfg.thread_params.epsilon},
      {"budget_in", cfg.budget_in},
      {"budget_out", cfg.budget_out},
      {"max_past", cfg.max_past},
      {"max_future", cfg.max_future},
      {"scale_backend", cfg.scale_backend},
      {"top_p", cfg.top_p},
      {"temperature", cfg.temperature},
      {"recall_k", cfg.recall_k},
      {"recall_n", cfg.recall_n},
      {"jobs", cfg.jobs},
  };
}

Pipeline::Pipeline(RunConfig cfg, Transport* transport)
    : cfg_(std::move(cfg)),
      store_(cfg_.run_dir),
      profile_(profile_by_name(cfg_.profile)),
      transport_(transport) {
  validate(cfg_);
  atomic_write_file(std::filesystem::path(cfg_.run_dir) / "config.json",
                    run_config_to_json(cfg_).dump(2) + "\n");
}

void Pipeline::ensure_backends() {
  if (backends_ready_) return;
  if (cfg_.backend == "mock") {
    llm_ = std::make_unique<MockLlm>();
    videollm_ = std::make_unique<MockVideoLlm>();
    embedder_ = std::make_unique<HashedBagEmbedding>();
  } else {
    if (transport_ == nullptr) {
      own_transport_ = std::make_unique<HttpTransport>();
      transport_ = own_transport_.get();
    }
    auto base = [&](const char* kind) {
      BackendConfig b;
      b.kind = kind;
      b.endpoint = cfg_.endpoint;
      b.credential_env = cfg_.credential_env;
      b.model = cfg_.model;
      b.retry.max_attempts = cfg_.max_attempts;
      b.retry.backoff_seconds = cfg_.backoff_seconds;
      b.requests_per_minute = cfg_.requests_per_minute;
      b.max_concurrency = cfg_.max_concurrency;
      return b;
    };
    llm_ = std::make_unique<RemoteLlm>(base("llm"), *transport_);
    videollm_ = std::make_unique<RemoteVideoLlm>(base("videollm"),
                                                 *transport_);
    embedder_ = std::make_unique<RemoteEmbedding>(base("embedding"),
                                                  *transport_);
  }
  parser_ = std::make_unique<RuleParser>();
  features_ = std::make_unique<MockFeatureExtractor>();
  backends_ready_ = true;
}

Manifest Pipeline::load_ingested() const {
  // Force the missing-artifact error before touching the file directly.
  store_.load_stage("ingest");
  return load_manifest(store_.artifact_path("ingest"));
}

std::map<std::string, Pipeline::ClipShots> Pipeline::load_clip_shots() const {
  std::map<std::string, ClipShots> out;
  for (const auto& line : jsonl_lines(store_.load_stage("shots"))) {
    ordered_json j = ordered_json::parse(line);
    ClipShots cs;
    cs.fps = j.at("fps").get<double>();
    cs.frame_count = j.at("frame_count").get<int>();
    cs.shots = shots_from_json(j.at("shots").dump());
    out[j.at("clip_id").get<std::string>()] = std::move(cs);
  }
  return out;
}

std::map<std::string, ordered_json> Pipeline::load_rows(
    const std::string& stage, const std::string& id_key) const {
  std::map<std::string, ordered_json> out;
  for (const auto& line : jsonl_lines(store_.load_stage(stage))) {
    ordered_json j = ordered_json::parse(line);
    if (!j.contains(id_key)) continue;
    out[j.at(id_key).get<std::string>()] = std::move(j);
  }
  return out;
}

std::string Pipeline::prediction_source() const {
  return store_.has_stage("select") ? "select" : "stage2";
}

void Pipeline::write_stats(const std::string& stage, bool cached) {
  ordered_json j{{"stage", stage}, {"cached", cached}};
  j["calls"] = last_stats_.to_json();
  atomic_write_file(store_.log_path("stats-" + stage + ".json"),
                    j.dump() + "\n");
}

int Pipeline::effective_jobs() const {
  int jobs = cfg_.jobs;
  if (cfg_.backend == "remote" && cfg_.max_concurrency > 0)
    jobs = std::min(jobs, cfg_.max_concurrency);
  return jobs;
}

bool Pipeline::run_stage(const std::string& stage) {
  last_stats_ = BackendStats{};
  bool ran = false;
  if (stage == "ingest") {
    ran = run_ingest();
  } else if (stage == "shots") {
    ran = run_shots();
  } else if (stage == "context") {
    ran = run_context();
  } else if (stage == "threads") {
    ran = run_threads();
  } else if (stage == "scales") {
    ran = run_scales();
  } else if (stage == "stage1") {
    ran = run_stage1();
  } else if (stage == "stage2") {
    ran = run_stage2();
  } else if (stage == "assist") {
    ran = run_assist();
  } else if (stage == "select") {
    ran = run_select();
  } else if (stage == "score-actions") {
    ran = run_score_actions();
  } else if (stage == "eval") {
    ran = run_eval();
  } else if (stage == "report") {
    ran = run_report();
  } else {
    throw ConfigError("unknown stage '" + stage + "'");
  }
  write_stats(stage, !ran);
  return ran;
}

void Pipeline::run_all() {
  for (const auto& stage : kStages) {
    if (stage == "stage2" && cfg_.mode != "single") continue;
    if (stage == "assist" && cfg_.mode == "single") continue;
    run_stage(stage);
  }
}

bool Pipeline::run_ingest() {
  const std::string raw = read_text_file(cfg_.manifest_path);
  const std::string key = CacheKeyBuilder("ingest")
                              .field("manifest", hex64(fnv1a(raw)))
                              .finish();
  if (store_.is_fresh("ingest", key)) return false;

  Manifest m = load_manifest(cfg_.manifest_path);
  store_.persist_stage("ingest", manifest_to_jsonl(m), key);
  store_.append_log("ingest.log",
                    ordered_json{{"clips", m.clips.size()},
                                 {"events", m.events.size()},
                                 {"rejected", m.rejected}}
                        .dump());
  return true;
}

bool Pipeline::run_shots() {
  const Manifest m = load_ingested();
  const std::string key =
      CacheKeyBuilder("shots")
          .field("upstream", store_.stage_hash("ingest"))
          .field("threshold", cfg_.shot_params.adaptive_ratio_threshold)
          .field("window", std::int64_t{cfg_.shot_params.window})
          .field("min_shot_len", cfg_.shot_params.min_shot_len)
          .finish();
  if (store_.is_fresh("shots", key)) return false;

  std::string payload;
  for (const auto& clip : m.clips) {
    auto src = open_video(clip.path);
    const auto shots = detect_shots(*src, cfg_.shot_params);
    ordered_json row{{"clip_id", clip.clip_id},
                     {"fps", src->fps()},
                     {"frame_count", src->frame_count()},
                     {"shots", ordered_json::parse(shots_to_json(shots))}};
    payload += row.dump() + "\n";
  }
  store_.persist_stage("shots", payload, key);
  return true;
}

bool Pipeline::run_context() {
  const Manifest m = load_ingested();
  const auto clip_shots = load_clip_shots();
  const std::string key =
      CacheKeyBuilder("context")
          .field("manifest", store_.stage_hash("ingest"))
          .field("shots", store_.stage_hash("shots"))
          .field("budget_in", std::int64_t{cfg_.budget_in})
          .field("budget_out", std::int64_t{cfg_.budget_out})
          .field("max_past", std::int64_t{cfg_.max_past})
          .field("max_future", std::int64_t{cfg_.max_future})
          .finish();
  if (store_.is_fresh("context", key)) return false;

  std::string payload;
  for (const auto& e : m.events) {
    with_ad_context(e.ad_id, [&] {
      const auto& cs = clip_shots.at(e.clip_id);
      const auto window = build_window(cs.shots, e.start, e.end, e.ad_id,
                                       cfg_.max_past, cfg_.max_future);
      const auto frames = sample_frames(window, e.start, e.end, cs.fps,
                                        cfg_.budget_in, cfg_.budget_out);
      ordered_json row{
          {"ad_id", e.ad_id},
          {"clip_id", e.clip_id},
          {"window", ordered_json::parse(window_to_json(window))},
          {"frames", ordered_json::parse(sampled_frames_to_json(
                         frames, window.current_labels))}};
      payload += row.dump() + "\n";
    });
  }
  store_.persist_stage("context", payload, key);
  return true;
}

bool Pipeline::run_threads() {
  const Manifest m = load_ingested();
  const auto clip_shots = load_clip_shots();
  const auto context_rows = load_rows("context", "ad_id");
  ensure_backends();
  const std::string key =
      CacheKeyBuilder("threads")
          .field("shots", store_.stage_hash("shots"))
          .field("context", store_.stage_hash("context"))
          .field("n", std::int64_t{cfg_.thread_params.n})
          .field("tau", cfg_.thread_params.tau)
          .field("epsilon", cfg_.thread_params.epsilon)
          .field("features", features_->id())
          .finish();
  if (store_.is_fresh("threads", key)) return false;

  std::string payload;
  for (const auto& clip : m.clips) {
    const auto& cs = clip_shots.at(clip.clip_id);
    auto src = open_video(clip.path);

    std::map<std::pair<int, int>, double> scores;
    for (std::size_t i = 0; i < cs.shots.size(); ++i) {
      for (std::size_t j = i + 1; j < cs.shots.size(); ++j) {
        scores[{static_cast<int>(i), static_cast<int>(j)}] = shot_pair_score(
            *src, cs.shots[i], cs.shots[j], *features_, cfg_.thread_params);
        last_stats_.feature_extracts += 2;
      }
    }
    const auto clip_result =
        cluster_threads(scores, cfg_.thread_params.epsilon,
                        static_cast<int>(cs.shots.size()));
    ordered_json adj = ordered_json::array();
    for (const auto& [pair, s] : scores)
      adj.push_back({pair.first, pair.second, s});
    ordered_json clip_row{{"clip_id", clip.clip_id},
                          {"adjacency", std::move(adj)},
                          {"threads", clip_result.threads},
                          {"n_thread", clip_result.n_thread},
                          {"n_shot", clip_result.n_shot}};
    payload += clip_row.dump() + "\n";

    for (const ADEvent* e : m.events_for_clip(clip.clip_id)) {
      with_ad_context(e->ad_id, [&] {
        const auto ctx = context_rows.find(e->ad_id);
        if (ctx == context_rows.end())
          throw Error("no context row for this ad");
        const auto window =
            window_from_json(ctx->second.at("window").dump());
        std::map<std::pair<int, int>, double> local;
        for (std::size_t a = 0; a < window.shots.size(); ++a) {
          for (std::size_t b = a + 1; b < window.shots.size(); ++b) {
            const int gi = window.shots[a].second.index;
            const int gj = window.shots[b].second.index;
            local[{window.shots[a].first, window.shots[b].first}] =
                scores.at({gi, gj});
          }
        }
        const auto result =
            cluster_threads(local, cfg_.thread_params.epsilon,
                            static_cast<int>(window.shots.size()));
        payload += threading_to_json(e->ad_id, result) + "\n";
      });
    }
  }
  store_.persist_stage("threads", payload, key);
  return true;
}

bool Pipeline::run_scales() {
  const Manifest m = load_ingested();
  const auto context_rows = load_rows("context", "ad_id");
  const std::string key = CacheKeyBuilder("scales")
                              .field("context", store_.stage_hash("context"))
                              .field("backend", cfg_.scale_backend)
                              .finish();
  if (store_.is_fresh("scales", key)) return false;

  std::string payload;
  std::string open_clip;
  std::unique_ptr<FrameSource> src;
  std::unique_ptr<ScaleClassifierBackend> backend;
  for (const auto& e : m.events) {
    with_ad_context(e.ad_id, [&] {
      if (e.clip_id != open_clip) {
        const VideoClip* clip = m.find_clip(e.clip_id);
        src = open_video(clip->path);
        if (cfg_.scale_backend == "heuristic") {
          std::vector<FaceBox> tracks;
          if (!clip->face_tracks_path.empty())
            tracks = load_face_tracks(clip->face_tracks_path);
          backend = std::make_unique<HeuristicScaleBackend>(std::move(tracks));
        } else {
          backend = std::make_unique<ConstantScaleBackend>(
              cfg_.scale_backend.back() - '0');
        }
        open_clip = e.clip_id;
      }
      const auto ctx = context_rows.find(e.ad_id);
      if (ctx == context_rows.end())
        throw Error("no context row for this ad");
      const auto window = window_from_json(ctx->second.at("window").dump());

      ScaleReport report;
      report.ad_id = e.ad_id;
      std::vector<int> classes;
      for (int label : window.current_labels) {
        const Shot* shot = window.shot_by_label(label);
        const int cls = classify_shot_scale(*src, *shot, *backend);
        report.per_shot[label] = cls;
        classes.push_back(cls);
      }
      report.s_eff = effective_scale(classes);
      report.factor = compose_factor(report.s_eff);
      payload += scale_report_to_json(report) + "\n";
    });
  }
  store_.persist_stage("scales", payload, key);
  return true;
}

bool Pipeline::run_stage1() {
  const Manifest m = load_ingested();
  const auto context_rows = load_rows("context", "ad_id");
  const auto scale_rows = load_rows("scales", "ad_id");
  const auto thread_rows = load_rows("threads", "ad_id");
  ensure_backends();
  const std::string key = CacheKeyBuilder("stage1")
                              .field("context", store_.stage_hash("context"))
                              .field("threads", store_.stage_hash("threads"))
                              .field("scales", store_.stage_hash("scales"))
                              .field("videollm", videollm_->id())
                              .field("profile", cfg_.profile)
                              .finish();
  if (store_.is_fresh("stage1", key)) return false;

  const int n = static_cast<int>(m.events.size());
  auto tasks = map_indexed(
      n, effective_jobs(), last_stats_, [&](int i, BackendStats& stats) {
        const ADEvent& e = m.events[static_cast<std::size_t>(i)];
        return with_ad_context(e.ad_id, [&]() -> TaskOut {
          const auto ctx = context_rows.find(e.ad_id);
          if (ctx == context_rows.end())
            throw Error("no context row for this ad");
          const auto scale_it = scale_rows.find(e.ad_id);
          if (scale_it == scale_rows.end())
            throw Error("no scale row for this ad");
          const auto thread_it = thread_rows.find(e.ad_id);
          if (thread_it == thread_rows.end())
            throw Error("no threading row for this ad");

          const auto window =
              window_from_json(ctx->second.at("window").dump());
          const ScaleReport scales =
              scale_report_from_json(scale_it->second.dump());
          const auto threading =
              threading_from_json(thread_it->second.dump());
          const std::string fragment = thread_prompt_fragment(threading);

          const VideoClip* clip = m.find_clip(e.clip_id);
          auto src = open_video(clip->path);
          std::vector<FaceBox> tracks;
          if (!clip->face_tracks_path.empty())
            tracks = load_face_tracks(clip->face_tracks_path);

          std::vector<Image> frames;
          for (const auto& fj : ctx->second.at("frames").at("frames")) {
            const int frame_index = fj.at("frame").get<int>();
            const int shot_label = fj.at("shot_label").get<int>();
            Image img = src->frame(frame_index);
            std::vector<FaceBox> boxes;
            for (const auto& b : tracks)
              if (b.frame == frame_index) boxes.push_back(b);
            annotate_frame(img, shot_label, boxes);
            frames.push_back(std::move(img));
          }

          const PromptBundle prompt =
              build_stage1(window, scales.factor, fragment,
                           profile_.video_type, make_char_text(e.cast));
          const std::string text =
              videollm_generate(*videollm_, frames, prompt, &stats);

          TaskOut out;
          out.row = ordered_json{{"ad_id", e.ad_id},
                                 {"text", text},
                                 {"factor", factor_name(scales.factor)},
                                 {"thread_fragment", fragment},
                                 {"prompt_hash", hex64(prompt.hash())}};
          out.logs.push_back(
              ordered_json{{"stage", "stage1"},
                           {"kind", "videollm"},
                           {"ad_id", e.ad_id},
                           {"frames", frames.size()},
                           {"prompt_hash", hex64(prompt.hash())},
                           {"completion_chars", text.size()}}
                  .dump());
          return out;
        });
      });

  store_.persist_stage("stage1", payload_of(tasks), key);
  for (const auto& t : tasks)
    for (const auto& l : t.logs) store_.append_log("transcript.jsonl", l);
  return true;
}

namespace {

std::string require_candidate(const ordered_json& obj, const char* key) {
  if (!obj.contains(key) || !obj.at(key).is_string())
    throw BackendError(std::string("completion lacks string key '") + key +
                       "'");
  const std::string text = obj.at(key).get<std::string>();
  if (trim(text).empty())
    throw BackendError(std::string("empty candidate for key '") + key + "'");
  return text;
}

}  // namespace

bool Pipeline::run_stage2() {
  const Manifest m = load_ingested();
  const auto stage1_rows = load_rows("stage1", "ad_id");
  ensure_backends();
  const std::string key = CacheKeyBuilder("stage2")
                              .field("stage1", store_.stage_hash("stage1"))
                              .field("llm", llm_->id())
                              .field("profile", cfg_.profile)
                              .field("mode", "single")
                              .field("seed", std::int64_t(cfg_.seed))
                              .finish();
  if (store_.is_fresh("stage2", key)) return false;

  const int n = static_cast<int>(m.events.size());
  auto tasks = map_indexed(
      n, effective_jobs(), last_stats_, [&](int i, BackendStats& stats) {
        const ADEvent& e = m.events[static_cast<std::size_t>(i)];
        return with_ad_context(e.ad_id, [&]() -> TaskOut {
          const auto s1 = stage1_rows.find(e.ad_id);
          if (s1 == stage1_rows.end())
            throw Error("no stage1 row for this ad");
          const std::string desc = s1->second.at("text").get<std::string>();
          const double duration = e.end - e.start;
          const PromptBundle prompt =
              build_stage2(desc, duration, profile_, false, cfg_.seed);
          const auto params = greedy_params(cfg_.seed);
          const auto obj = llm_generate_json(*llm_, prompt, params, &stats);
          const std::string cand = require_candidate(obj, "summarized_AD");

          TaskOut out;
          out.row = ordered_json{
              {"ad_id", e.ad_id},
              {"candidates", ordered_json::array({cand})},
              {"mode", "single"},
              {"sampling",
               ordered_json::array(
                   {ordered_json{{"top_p", params.top_p},
                                 {"temperature", params.temperature},
                                 {"seed", params.seed}}})}};
          const long long limit =
              stage2_word_limit(duration, profile_.speed_factor);
          const long long words =
              static_cast<long long>(split_whitespace(cand).size());
          if (words > limit)
            out.flags.push_back(ordered_json{{"ad_id", e.ad_id},
                                             {"candidate", 0},
                                             {"words", words},
                                             {"limit", limit}}
                                    .dump());
          out.logs.push_back(ordered_json{{"stage", "stage2"},
                                          {"kind", "llm"},
                                          {"ad_id", e.ad_id},
                                          {"prompt_hash",
                                           hex64(prompt.hash())},
                                          {"completion_chars", cand.size()}}
                                 .dump());
          return out;
        });
      });

  store_.persist_stage("stage2", payload_of(tasks), key);
  for (const auto& t : tasks) {
    for (const auto& l : t.logs) store_.append_log("transcript.jsonl", l);
    for (const auto& f : t.flags) store_.append_log("limit_flags.jsonl", f);
  }
  return true;
}

bool Pipeline::run_assist() {
  if (cfg_.mode != "joint" && cfg_.mode != "independent")
    throw ConfigError("assist requires mode joint or independent");
  const Manifest m = load_ingested();
  const auto stage1_rows = load_rows("stage1", "ad_id");
  ensure_backends();
  const std::string key = CacheKeyBuilder("stage2")
                              .field("stage1", store_.stage_hash("stage1"))
                              .field("llm", llm_->id())
                              .field("profile", cfg_.profile)
                              .field("mode", cfg_.mode)
                              .field("seed", std::int64_t(cfg_.seed))
                              .field("top_p", cfg_.top_p)
                              .field("temperature", cfg_.temperature)
                              .finish();
  if (store_.is_fresh("stage2", key)) return false;

  const int n = static_cast<int>(m.events.size());
  auto tasks = map_indexed(
      n, effective_jobs(), last_stats_, [&](int i, BackendStats& stats) {
        const ADEvent& e = m.events[static_cast<std::size_t>(i)];
        return with_ad_context(e.ad_id, [&]() -> TaskOut {
          const auto s1 = stage1_rows.find(e.ad_id);
          if (s1 == stage1_rows.end())
            throw Error("no stage1 row for this ad");
          const std::string desc = s1->second.at("text").get<std::string>();
          const double duration = e.end - e.start;

          std::vector<std::string> candidates;
          ordered_json sampling = ordered_json::array();
          TaskOut out;
          if (cfg_.mode == "joint") {
            const PromptBundle prompt =
                build_stage2(desc, duration, profile_, true, cfg_.seed);
            const auto params = greedy_params(cfg_.seed);
            const auto obj =
                llm_generate_json(*llm_, prompt, params, &stats);
            for (int c = 1; c <= 5; ++c) {
              const std::string cand = require_candidate(
                  obj, ("summarized_AD_" + std::to_string(c)).c_str());
              candidates.push_back(cand);
              sampling.push_back(ordered_json{
                  {"top_p", params.top_p},
                  {"temperature", params.temperature},
                  {"seed", params.seed}});
            }
            out.logs.push_back(
                ordered_json{{"stage", "assist"},
                             {"kind", "llm"},
                             {"ad_id", e.ad_id},
                             {"prompt_hash", hex64(prompt.hash())},
                             {"candidates", 5}}
                    .dump());
          } else {
            const PromptBundle prompt =
                build_stage2(desc, duration, profile_, false, cfg_.seed);
            for (int c = 1; c <= 5; ++c) {
              SamplingParams params{cfg_.top_p, cfg_.temperature,
                                    cfg_.seed + static_cast<std::uint64_t>(c)};
              const auto obj =
                  llm_generate_json(*llm_, prompt, params, &stats);
              candidates.push_back(
                  require_candidate(obj, "summarized_AD"));
              sampling.push_back(ordered_json{
                  {"top_p", params.top_p},
                  {"temperature", params.temperature},
                  {"seed", params.seed}});
              out.logs.push_back(
                  ordered_json{{"stage", "assist"},
                               {"kind", "llm"},
                               {"ad_id", e.ad_id},
                               {"prompt_hash", hex64(prompt.hash())},
                               {"candidate", c}}
                      .dump());
            }
          }

          const long long limit =
              stage2_word_limit(duration, profile_.speed_factor);
          for (std::size_t c = 0; c < candidates.size(); ++c) {
            const long long words = static_cast<long long>(
                split_whitespace(candidates[c]).size());
            if (words > limit)
              out.flags.push_back(
                  ordered_json{{"ad_id", e.ad_id},
                               {"candidate", c},
                               {"words", words},
                               {"limit", limit}}
                      .dump());
          }
          out.row = ordered_json{{"ad_id", e.ad_id},
                                 {"candidates", candidates},
                                 {"mode", cfg_.mode},
                                 {"sampling", std::move(sampling)}};
          return out;
        });
      });

  store_.persist_stage("stage2", payload_of(tasks), key);
  for (const auto& t : tasks) {
    for (const auto& l : t.logs) store_.append_log("transcript.jsonl", l);
    for (const auto& f : t.flags) store_.append_log("limit_flags.jsonl", f);
  }
  return true;
}

bool Pipeline::run_select() {
  const Manifest m = load_ingested();
  const auto stage2_rows = load_rows("stage2", "ad_id");
  ensure_backends();
  const std::string key = CacheKeyBuilder("select")
                              .field("stage2", store_.stage_hash("stage2"))
                              .field("llm", llm_->id())
                              .field("embedder", embedder_->id())
                              .field("parser", parser_->id())
                              .finish();
  if (store_.is_fresh("select", key)) return false;

  std::map<std::string, std::string> refs;
  for (const auto& e : m.events)
    if (e.has_gt()) refs[e.ad_id] = e.gt_text;
  const CiderScorer scorer(refs);
  const ActionScoreConfig action_cfg;

  const int n = static_cast<int>(m.events.size());
  auto tasks = map_indexed(
      n, effective_jobs(), last_stats_, [&](int i, BackendStats& stats) {
        const ADEvent& e = m.events[static_cast<std::size_t>(i)];
        return with_ad_context(e.ad_id, [&]() -> TaskOut {
          if (!e.has_gt())
            throw Error("expert selection requires ground truth");
          const auto s2 = stage2_rows.find(e.ad_id);
          if (s2 == stage2_rows.end())
            throw Error("no stage2 row for this ad");
          const auto candidates =
              s2->second.at("candidates").get<std::vector<std::string>>();
          if (candidates.empty())
            throw Error("stage2 row has no candidates");

          std::vector<std::string> gt_actions = e.gt_actions;
          if (gt_actions.empty())
            gt_actions = preprocess_gt_actions(
                e.gt_text, *llm_, greedy_params(cfg_.seed), &stats);

          int best_index = 0;
          double best_combined = 0.0;
          ordered_json scored = ordered_json::array();
          for (std::size_t c = 0; c < candidates.size(); ++c) {
            const double cider = scorer.score_item(e.ad_id, candidates[c]);
            double action = 0.0;
            if (!gt_actions.empty()) {
              const auto pred =
                  parse_prediction(candidates[c], *parser_, &stats);
              const auto matches = score_actions(gt_actions, pred,
                                                 *embedder_, action_cfg,
                                                 &stats);
              action = ad_action_score(matches);
            }
            const double combined = (cider + action) / 2.0;
            scored.push_back(ordered_json{{"cider", cider},
                                          {"action", action},
                                          {"combined", combined}});
            if (c == 0 || combined > best_combined) {
              best_combined = combined;
              best_index = static_cast<int>(c);
            }
          }

          TaskOut out;
          out.row = ordered_json{
              {"ad_id", e.ad_id},
              {"index", best_index},
              {"text", candidates[static_cast<std::size_t>(best_index)]},
              {"scores", std::move(scored)}};
          out.logs.push_back(ordered_json{{"stage", "select"},
                                          {"ad_id", e.ad_id},
                                          {"candidates", candidates.size()},
                                          {"selected", best_index}}
                                 .dump());
          return out;
        });
      });

  store_.persist_stage("select", payload_of(tasks), key);
  for (const auto& t : tasks)
    for (const auto& l : t.logs) store_.append_log("transcript.jsonl", l);
  return true;
}

bool Pipeline::run_score_actions() {
  const Manifest m = load_ingested();
  const std::string source = prediction_source();
  const auto source_rows = load_rows(source, "ad_id");
  ensure_backends();
  const std::string key = CacheKeyBuilder("score-actions")
                              .field("source", source)
                              .field("predictions",
                                     store_.stage_hash(source))
                              .field("llm", llm_->id())
                              .field("embedder", embedder_->id())
                              .field("parser", parser_->id())
                              .finish();
  if (store_.is_fresh("score-actions", key)) return false;

  const ActionScoreConfig action_cfg;
  std::vector<const ADEvent*> scored_events;
  int without_gt = 0;
  for (const auto& e : m.events) {
    if (e.has_gt())
      scored_events.push_back(&e);
    else
      ++without_gt;
  }

  const int n = static_cast<int>(scored_events.size());
  auto tasks = map_indexed(
      n, effective_jobs(), last_stats_, [&](int i, BackendStats& stats) {
        const ADEvent& e = *scored_events[static_cast<std::size_t>(i)];
        return with_ad_context(e.ad_id, [&]() -> TaskOut {
          const auto row_it = source_rows.find(e.ad_id);
          if (row_it == source_rows.end())
            throw Error("no " + source + " row for this ad");
          const std::string pred =
              source == "select"
                  ? row_it->second.at("text").get<std::string>()
                  : row_it->second.at("candidates").at(0).get<std::string>();

          std::vector<std::string> gt_actions = e.gt_actions;
          if (gt_actions.empty())
            gt_actions = preprocess_gt_actions(
                e.gt_text, *llm_, greedy_params(cfg_.seed), &stats);

          TaskOut out;
          ordered_json actions = ordered_json::array();
          if (gt_actions.empty()) {
            out.row = ordered_json{{"ad_id", e.ad_id},
                                   {"actions", std::move(actions)},
                                   {"ad_mean", nullptr}};
            return out;
          }
          const auto set = parse_prediction(pred, *parser_, &stats);
          const auto matches =
              score_actions(gt_actions, set, *embedder_, action_cfg, &stats);
          for (std::size_t a = 0; a < matches.size(); ++a) {
            actions.push_back(ordered_json{
                {"gt_action", gt_actions[a]},
                {"s_sim", round3(matches[a].s_sim)},
                {"s_verb", round3(matches[a].s_verb)},
                {"s_action_raw", round3(matches[a].raw)},
                {"s_action", round3(matches[a].rescaled)}});
          }
          out.row = ordered_json{{"ad_id", e.ad_id},
                                 {"actions", std::move(actions)},
                                 {"ad_mean", round3(ad_action_score(matches))}};
          return out;
        });
      });

  store_.persist_stage("score-actions", payload_of(tasks), key);
  store_.append_log(
      "score_actions.log",
      ordered_json{{"scored", scored_events.size()}, {"without_gt", without_gt}}
          .dump());
  return true;
}

bool Pipeline::run_eval() {
  const Manifest m = load_ingested();
  const std::string source = prediction_source();
  const auto source_rows = load_rows(source, "ad_id");
  const auto action_rows = load_rows("score-actions", "ad_id");
  const auto thread_clip_rows = load_rows("threads", "clip_id");
  ensure_backends();
  const std::string key = CacheKeyBuilder("eval")
                              .field("source", source)
                              .field("predictions", store_.stage_hash(source))
                              .field("actions",
                                     store_.stage_hash("score-actions"))
                              .field("threads", store_.stage_hash("threads"))
                              .field("llm", llm_->id())
                              .field("embedder", embedder_->id())
                              .field("recall_k", std::int64_t{cfg_.recall_k})
                              .field("recall_n", std::int64_t{cfg_.recall_n})
                              .finish();
  if (store_.is_fresh("eval", key)) return false;

  std::map<std::string, std::string> preds, refs;
  for (const auto& e : m.events) {
    if (!e.has_gt()) continue;
    const auto row_it = source_rows.find(e.ad_id);
    if (row_it == source_rows.end())
      throw Error("eval: no " + source + " row for ad " + e.ad_id);
    preds[e.ad_id] =
        source == "select"
            ? row_it->second.at("text").get<std::string>()
            : row_it->second.at("candidates").at(0).get<std::string>();
    refs[e.ad_id] = e.gt_text;
  }
  if (preds.size() < 2)
    throw Error("eval: need at least two ground-truth ADs");

  const ActionScoreConfig action_cfg;
  const CiderScorer scorer(refs);
  const double cider_value = scorer.corpus(preds);

  const auto recall =
      recall_at_k(preds, m, cfg_.recall_k, cfg_.recall_n, *embedder_,
                  action_cfg.embed_instruction, &last_stats_);
  const auto critic = critic_corpus(preds, m);
  const auto judge = llm_ad_eval(preds, refs, *llm_,
                                 greedy_params(cfg_.seed), &last_stats_);

  // Corpus action score from the frozen artifact: mean over AD means.
  double action_sum = 0.0;
  int action_ads = 0, action_skipped = 0;
  std::map<std::string, double> action_per_ad;
  for (const auto& [ad_id, row] : action_rows) {
    if (row.at("ad_mean").is_null()) {
      ++action_skipped;
      continue;
    }
    const double v = row.at("ad_mean").get<double>();
    action_per_ad[ad_id] = v;
    action_sum += v;
    ++action_ads;
  }
  const double action_value =
      action_ads > 0 ? 100.0 * action_sum / action_ads : 0.0;

  // Thread metrics per clip against annotated gt_threads.
  ordered_json per_clip = ordered_json::object();
  double tp = 0, tr = 0, tap = 0, twcp = 0;
  int thread_clips = 0, thread_skipped = 0;
  for (const auto& clip : m.clips) {
    if (clip.gt_threads.empty()) continue;
    const auto row_it = thread_clip_rows.find(clip.clip_id);
    if (row_it == thread_clip_rows.end())
      throw Error("eval: no threads row for clip " + clip.clip_id);
    const int n_shot = row_it->second.at("n_shot").get<int>();
    if (n_shot < 2) {
      ++thread_skipped;
      continue;
    }
    std::map<std::pair<int, int>, double> scores;
    for (const auto& entry : row_it->second.at("adjacency"))
      scores[{entry.at(0).get<int>(), entry.at(1).get<int>()}] =
          entry.at(2).get<double>();
    const auto pred_threads =
        row_it->second.at("threads").get<std::vector<std::vector<int>>>();
    const auto tm = thread_metrics(scores, pred_threads, clip.gt_threads,
                                   n_shot, cfg_.thread_params.epsilon);
    per_clip[clip.clip_id] = ordered_json{{"precision", round3(tm.precision)},
                                          {"recall", round3(tm.recall)},
                                          {"ap", round3(tm.ap)},
                                          {"wcp", round3(tm.wcp)}};
    tp += tm.precision;
    tr += tm.recall;
    tap += tm.ap;
    twcp += tm.wcp;
    ++thread_clips;
  }

  ordered_json per_ad = ordered_json::object();
  for (const auto& [ad_id, pred] : preds) {
    ordered_json entry;
    entry["cider"] = round3(scorer.score_item(ad_id, pred));
    if (recall.rank.count(ad_id)) entry["recall_rank"] = recall.rank.at(ad_id);
    if (critic.per_ad.count(ad_id))
      entry["critic"] = round3(critic.per_ad.at(ad_id));
    if (judge.per_ad.count(ad_id))
      entry["llm_ad_eval"] = judge.per_ad.at(ad_id);
    if (action_per_ad.count(ad_id))
      entry["action"] = round3(action_per_ad.at(ad_id));
    entry["text"] = pred;
    per_ad[ad_id] = std::move(entry);
  }

  ordered_json report;
  report["source"] = source;
  report["ads_evaluated"] = preds.size();
  report["metrics"] = ordered_json{
      {"cider",
       ordered_json{{"value", round3(cider_value)},
                    {"config", ordered_json{{"max_n", scorer.max_n()},
                                            {"sigma", scorer.sigma()},
                                            {"scale", "x100"}}}}},
      {"recall_at_k",
       ordered_json{{"value", round3(recall.percent)},
                    {"hits", recall.hits},
                    {"total", recall.total},
                    {"truncated", recall.truncated},
                    {"config",
                     ordered_json{{"k", cfg_.recall_k},
                                  {"n", cfg_.recall_n},
                                  {"embedder", embedder_->id()}}}}},
      {"critic",
       ordered_json{{"value", round3(critic.mean_x100)},
                    {"engaged", critic.engaged},
                    {"skipped", critic.skipped},
                    {"config", ordered_json{{"scale", "x100"}}}}},
      {"llm_ad_eval",
       ordered_json{{"value", round3(judge.mean)},
                    {"scored", judge.scored},
                    {"skipped", judge.skipped},
                    {"config", ordered_json{{"scale", "1-5"},
                                            {"judge", llm_->id()}}}}},
      {"action_score",
       ordered_json{{"value", round3(action_value)},
                    {"ads", action_ads},
                    {"skipped", action_skipped},
                    {"config",
                     ordered_json{{"sim_weight", action_cfg.sim_weight},
                                  {"verb_weight", action_cfg.verb_weight},
                                  {"scale", "x100"}}}}},
      {"thread",
       ordered_json{
           {"precision", thread_clips ? round3(tp / thread_clips) : 0.0},
           {"recall", thread_clips ? round3(tr / thread_clips) : 0.0},
           {"ap", thread_clips ? round3(tap / thread_clips) : 0.0},
           {"wcp", thread_clips ? round3(twcp / thread_clips) : 0.0},
           {"clips", thread_clips},
           {"skipped", thread_skipped},
           {"config",
            ordered_json{{"epsilon", cfg_.thread_params.epsilon}}}}},
  };
  // Slots for externally computed scorers (SPICE, BERTScore, ...).
  report["external"] = ordered_json::object();
  report["per_ad"] = std::move(per_ad);
  report["per_clip_threads"] = std::move(per_clip);

  store_.persist_stage("eval", report.dump(2) + "\n", key);
  return true;
}

bool Pipeline::run_report() {
  const std::string eval_text = store_.load_stage("eval");
  const std::string key = CacheKeyBuilder("report")
                              .field("eval", store_.stage_hash("eval"))
                              .field("profile", cfg_.profile)
                              .field("mode", cfg_.mode)
                              .field("backend", cfg_.backend)
                              .field("seed", std::int64_t(cfg_.seed))
                              .finish();
  if (store_.is_fresh("report", key)) return false;

  const ordered_json ev = ordered_json::parse(eval_text);
  const auto& metrics = ev.at("metrics");

  std::ostringstream out;
  out << "shotad evaluation report\n";
  out << "========================\n";
  out << "profile: " << cfg_.profile << "  mode: " << cfg_.mode
      << "  backend: " << cfg_.backend << "  seed: " << cfg_.seed << "\n";
  out << "predictions: " << ev.at("source").get<std::string>() << " ("
      << ev.at("ads_evaluated").get<int>() << " ADs)\n\n";

  const auto& cider = metrics.at("cider");
  out << "cider          " << fmt(cider.at("value").get<double>())
      << "  (max_n=" << cider.at("config").at("max_n").get<int>()
      << " sigma=" << fmt(cider.at("config").at("sigma").get<double>(), 1)
      << ", x100)\n";
  const auto& recall = metrics.at("recall_at_k");
  out << "recall@" << recall.at("config").at("k").get<int>() << "/"
      << recall.at("config").at("n").get<int>() << "     "
      << fmt(recall.at("value").get<double>()) << "  (hits "
      << recall.at("hits").get<int>() << "/" << recall.at("total").get<int>()
      << ", truncated " << recall.at("truncated").get<int>() << ")\n";
  const auto& critic = metrics.at("critic");
  out << "critic         " << fmt(critic.at("value").get<double>())
      << "  (engaged " << critic.at("engaged").get<int>() << ", skipped "
      << critic.at("skipped").get<int>() << ", x100)\n";
  const auto& judge = metrics.at("llm_ad_eval");
  out << "llm-ad-eval    " << fmt(judge.at("value").get<double>())
      << "  (scored " << judge.at("scored").get<int>() << ", skipped "
      << judge.at("skipped").get<int>() << ", 1-5)\n";
  const auto& action = metrics.at("action_score");
  out << "action score   " << fmt(action.at("value").get<double>())
      << "  (ads " << action.at("ads").get<int>() << ", skipped "
      << action.at("skipped").get<int>() << ", x100)\n";
  const auto& thread = metrics.at("thread");
  out << "thread         precision " << fmt(thread.at("precision").get<double>())
      << "  recall " << fmt(thread.at("recall").get<double>()) << "  AP "
      << fmt(thread.at("ap").get<double>()) << "  WCP "
      << fmt(thread.at("wcp").get<double>()) << "  (clips "
      << thread.at("clips").get<int>() << ", skipped "
      << thread.at("skipped").get<int>() << ")\n";

  out << "\nper-AD\n";
  out << "------\n";
  for (const auto& [ad_id, entry] : ev.at("per_ad").items()) {
    out << ad_id << "  cider " << fmt(entry.at("cider").get<double>());
    if (entry.contains("recall_rank"))
      out << "  rank " << entry.at("recall_rank").get<int>();
    if (entry.contains("critic"))
      out << "  critic " << fmt(entry.at("critic").get<double>());
    if (entry.contains("llm_ad_eval"))
      out << "  judge " << entry.at("llm_ad_eval").get<int>();
    if (entry.contains("action"))
      out << "  action " << fmt(entry.at("action").get<double>());
    out << "\n    " << entry.at("text").get<std::string>() << "\n";
  }

  store_.persist_stage("report", out.str(), key);
  return true;
}

}  // namespace shotad
