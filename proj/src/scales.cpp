// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0

#include "shotad/scales.hpp"

#include <algorithm>

#include "json.hpp"

#include "shotad/errors.hpp"

namespace shotad {

using json = nlohmann::ordered_json;

std::string factor_name(Factor f) {
  switch (f) {
    case Factor::kFacialExpression: return "facial_expression";
    case Factor::kKeyObject: return "key_object";
    case Factor::kEnvironment: return "environment";
    case Factor::kNone: return "none";
  }
  throw Error("unreachable factor");
}

Factor factor_by_name(const std::string& name) {
  if (name == "facial_expression") return Factor::kFacialExpression;
  if (name == "key_object") return Factor::kKeyObject;
  if (name == "environment") return Factor::kEnvironment;
  if (name == "none") return Factor::kNone;
  throw ValidationError("unknown factor: " + name);
}

int classify_shot_scale(const FrameSource& clip, const Shot& shot,
                        ScaleClassifierBackend& backend) {
  const int mid = (shot.start_frame + shot.end_frame) / 2;
  int cls;
  try {
    cls = backend.classify(clip.frame(mid), mid);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw BackendError("scale classification failed for shot " +
                           std::to_string(shot.index) + ": " + e.what(),
                       1);
  }
  if (cls < 0 || cls > 4)
    throw BackendError("scale backend returned class outside 0..4: " +
                           std::to_string(cls),
                       1);
  return cls;
}

double effective_scale(const std::vector<int>& current_classes) {
  if (current_classes.empty())
    throw Error("effective_scale: no current shots");
  double acc = 0;
  for (int c : current_classes) acc += c;
  return acc / static_cast<double>(current_classes.size());
}

Factor compose_factor(double s_eff) {
  if (!(s_eff >= 0 && s_eff <= 4))
    throw Error("compose_factor: effective scale outside [0,4]");
  if (s_eff <= 1.5) return Factor::kFacialExpression;
  if (s_eff >= 2 && s_eff <= 3) return Factor::kKeyObject;
  if (s_eff >= 3.5) return Factor::kEnvironment;
  return Factor::kNone;
}

int HeuristicScaleBackend::classify(const Image& frame, int frame_index) {
  (void)frame;
  double best_h = 0;
  for (const auto& b : tracks_)
    if (b.frame == frame_index) best_h = std::max(best_h, b.h);
  if (best_h >= 0.5) return 0;
  if (best_h >= 0.25) return 1;
  if (best_h >= 0.12) return 2;
  if (best_h >= 0.05) return 3;
  return 4;
}

std::string scale_report_to_json(const ScaleReport& r) {
  json j;
  j["ad_id"] = r.ad_id;
  json per = json::object();
  for (const auto& [label, cls] : r.per_shot)
    per[std::to_string(label)] = cls;
  j["per_shot"] = per;
  j["s_eff"] = r.s_eff;
  j["factor"] = factor_name(r.factor);
  return j.dump();
}

ScaleReport scale_report_from_json(const std::string& text) {
  ScaleReport r;
  try {
    const json j = json::parse(text);
    r.ad_id = j.at("ad_id").get<std::string>();
    for (const auto& [key, val] : j.at("per_shot").items())
      r.per_shot[std::stoi(key)] = val.get<int>();
    r.s_eff = j.at("s_eff").get<double>();
    r.factor = factor_by_name(j.at("factor").get<std::string>());
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad scale report: ") + e.what());
  }
  return r;
}

}  // namespace shotad
