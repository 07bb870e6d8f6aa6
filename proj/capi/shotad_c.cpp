// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0

#include "shotad.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "shotad/errors.hpp"
#include "shotad/pipeline.hpp"
#include "shotad/scales.hpp"
#include "shotad/threads.hpp"

struct shotad_run {
  std::unique_ptr<shotad::Pipeline> pipeline;
  std::string last_error;
};

namespace {

int code_of(const std::exception& e) {
  if (dynamic_cast<const shotad::ConfigError*>(&e)) return SHOTAD_ERR_CONFIG;
  if (dynamic_cast<const shotad::MissingArtifactError*>(&e))
    return SHOTAD_ERR_MISSING_ARTIFACT;
  if (dynamic_cast<const shotad::BackendError*>(&e))
    return SHOTAD_ERR_BACKEND;
  return SHOTAD_ERR_OTHER;
}

template <typename Fn>
int guarded(shotad_run* run, Fn&& fn) {
  if (run == nullptr) return SHOTAD_ERR_OTHER;
  try {
    fn();
    run->last_error.clear();
    return SHOTAD_OK;
  } catch (const std::exception& e) {
    run->last_error = e.what();
    return code_of(e);
  } catch (...) {
    run->last_error = "unknown error";
    return SHOTAD_ERR_OTHER;
  }
}

}  // namespace

extern "C" {

const char* shotad_version(void) { return "0.1.0"; }

const char* shotad_stage_name(int index) {
  const auto& names = shotad::stage_names();
  if (index < 0 || static_cast<std::size_t>(index) >= names.size())
    return nullptr;
  return names[static_cast<std::size_t>(index)].c_str();
}

shotad_run* shotad_run_open(const char* config_json, char* errbuf,
                            size_t errlen) {
  std::string message;
  try {
    if (config_json == nullptr)
      throw shotad::ConfigError("config: null config text");
    auto cfg = shotad::parse_run_config(config_json);
    auto run = std::make_unique<shotad_run>();
    run->pipeline = std::make_unique<shotad::Pipeline>(std::move(cfg));
    return run.release();
  } catch (const std::exception& e) {
    message = e.what();
  } catch (...) {
    message = "unknown error";
  }
  if (errbuf != nullptr && errlen > 0) {
    const size_t n = std::min(errlen - 1, message.size());
    std::memcpy(errbuf, message.data(), n);
    errbuf[n] = '\0';
  }
  return nullptr;
}

void shotad_run_close(shotad_run* run) { delete run; }

int shotad_run_stage(shotad_run* run, const char* stage, int* ran) {
  return guarded(run, [&] {
    if (stage == nullptr) throw shotad::ConfigError("null stage name");
    const bool executed = run->pipeline->run_stage(stage);
    if (ran != nullptr) *ran = executed ? 1 : 0;
  });
}

int shotad_run_all(shotad_run* run) {
  return guarded(run, [&] { run->pipeline->run_all(); });
}

const char* shotad_run_last_error(const shotad_run* run) {
  if (run == nullptr) return "null run handle";
  return run->last_error.c_str();
}

int shotad_run_read_artifact(shotad_run* run, const char* stage, char** out,
                             size_t* len) {
  return guarded(run, [&] {
    if (stage == nullptr) throw shotad::ConfigError("null stage name");
    if (out == nullptr) throw shotad::Error("null output pointer");
    const std::string text = run->pipeline->store().load_stage(stage);
    char* buf = static_cast<char*>(std::malloc(text.size() + 1));
    if (buf == nullptr) throw shotad::Error("out of memory");
    std::memcpy(buf, text.data(), text.size());
    buf[text.size()] = '\0';
    *out = buf;
    if (len != nullptr) *len = text.size();
  });
}

void shotad_free(void* p) { std::free(p); }

double shotad_matching_score(const double* cost, int n_patches, double tau) {
  if (cost == nullptr || n_patches <= 0 || !(tau > 0)) return -1.0;
  const std::vector<double> c(
      cost, cost + static_cast<std::size_t>(n_patches) * n_patches);
  try {
    return shotad::matching_score(c, n_patches, tau);
  } catch (...) {
    return -1.0;
  }
}

int shotad_cost_volume(const float* a, const float* b, int h, int w, int c,
                       int n, double* out) {
  if (a == nullptr || b == nullptr || out == nullptr)
    return SHOTAD_ERR_OTHER;
  if (h <= 0 || w <= 0 || c <= 0 || n <= 0 || n % 2 == 0)
    return SHOTAD_ERR_CONFIG;
  try {
    shotad::FeatureMap fa(h, w, c), fb(h, w, c);
    const std::size_t total = static_cast<std::size_t>(h) * w * c;
    std::memcpy(fa.data.data(), a, total * sizeof(float));
    std::memcpy(fb.data.data(), b, total * sizeof(float));
    shotad::normalize_features(fa);
    shotad::normalize_features(fb);
    const auto volume = shotad::cost_volume(fa, fb, n);
    std::memcpy(out, volume.data(), volume.size() * sizeof(double));
    return SHOTAD_OK;
  } catch (const std::exception& e) {
    return code_of(e);
  } catch (...) {
    return SHOTAD_ERR_OTHER;
  }
}

const char* shotad_compose_factor(double s_eff) {
  static const std::string names[] = {"facial_expression", "key_object",
                                      "environment", "none"};
  switch (shotad::compose_factor(s_eff)) {
    case shotad::Factor::kFacialExpression:
      return names[0].c_str();
    case shotad::Factor::kKeyObject:
      return names[1].c_str();
    case shotad::Factor::kEnvironment:
      return names[2].c_str();
    default:
      return names[3].c_str();
  }
}

long long shotad_stage2_word_limit(double duration, double speed_factor) {
  return shotad::stage2_word_limit(duration, speed_factor);
}

}  // extern "C"
