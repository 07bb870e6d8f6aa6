// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include "shotad/corpus.hpp"
#include "shotad/image.hpp"
#include "shotad/shotseg.hpp"
#include "shotad/video.hpp"

namespace shotad {

// 0 = extreme close-up .. 4 = long shot.
class ScaleClassifierBackend {
 public:
  virtual ~ScaleClassifierBackend() = default;
  virtual int classify(const Image& frame, int frame_index) = 0;
  virtual std::string id() const = 0;
};

enum class Factor { kFacialExpression, kKeyObject, kEnvironment, kNone };

std::string factor_name(Factor f);
Factor factor_by_name(const std::string& name);

struct ScaleReport {
  std::string ad_id;
  std::map<int, int> per_shot;  // local label -> class
  double s_eff = 0;
  Factor factor = Factor::kNone;
};

// Classifies the shot's middle frame, floor((start+end)/2).
int classify_shot_scale(const FrameSource& clip, const Shot& shot,
                        ScaleClassifierBackend& backend);

double effective_scale(const std::vector<int>& current_classes);

// <= 1.5 facial expression; [2, 3] key object; >= 3.5 environment; the gap
// regions map to none.
Factor compose_factor(double s_eff);

// Always answers the same class. For tests and smoke runs.
class ConstantScaleBackend : public ScaleClassifierBackend {
 public:
  explicit ConstantScaleBackend(int cls) : cls_(cls) {}
  int classify(const Image&, int) override { return cls_; }
  std::string id() const override {
    return "scale-const-" + std::to_string(cls_);
  }

 private:
  int cls_;
};

// Model-free stand-in, not the trained classifier: class from the largest
// face box's height fraction with cut points 0.5 / 0.25 / 0.12 / 0.05, no
// face means long shot.
class HeuristicScaleBackend : public ScaleClassifierBackend {
 public:
  explicit HeuristicScaleBackend(std::vector<FaceBox> tracks)
      : tracks_(std::move(tracks)) {}
  int classify(const Image& frame, int frame_index) override;
  std::string id() const override { return "scale-heuristic"; }

 private:
  std::vector<FaceBox> tracks_;
};

std::string scale_report_to_json(const ScaleReport& r);
ScaleReport scale_report_from_json(const std::string& text);

}  // namespace shotad
