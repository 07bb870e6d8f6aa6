// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0

#include "shotad/threads.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <numeric>
#include <sstream>

#include "json.hpp"

#include "shotad/errors.hpp"
#include "shotad/util.hpp"

namespace shotad {

using json = nlohmann::ordered_json;

FeatureMap::FeatureMap(int h_, int w_, int c_) : h(h_), w(w_), c(c_) {
  if (h < 1 || w < 1 || c < 1) throw Error("FeatureMap: bad shape");
  data.resize(static_cast<std::size_t>(h) * w * c, 0.0f);
}

void normalize_features(FeatureMap& fm) {
  for (int y = 0; y < fm.h; ++y) {
    for (int x = 0; x < fm.w; ++x) {
      float* v = fm.at(y, x);
      double norm2 = 0;
      for (int k = 0; k < fm.c; ++k) norm2 += static_cast<double>(v[k]) * v[k];
      if (norm2 <= 0) continue;
      const double inv = 1.0 / std::sqrt(norm2);
      for (int k = 0; k < fm.c; ++k)
        v[k] = static_cast<float>(v[k] * inv);
    }
  }
}

void validate(const ThreadParams& p) {
  if (p.n < 1 || p.n % 2 == 0) throw Error("ThreadParams: n must be odd >= 1");
  if (!(p.tau > 0)) throw Error("ThreadParams: tau must be positive");
  if (!(p.epsilon > 0 && p.epsilon < 1))
    throw Error("ThreadParams: epsilon must lie in (0,1)");
}

std::vector<double> cost_volume(const FeatureMap& a, const FeatureMap& b,
                                int n) {
  if (a.h != b.h || a.w != b.w || a.c != b.c)
    throw Error("cost_volume: shape mismatch");
  if (n < 1 || n % 2 == 0) throw Error("cost_volume: n must be odd >= 1");
  const int N = a.patches();
  const int radius = n / 2;
  std::vector<double> c(static_cast<std::size_t>(N) * N, 0.0);
  for (int py = 0; py < a.h; ++py) {
    for (int px = 0; px < a.w; ++px) {
      const int p = py * a.w + px;
      const float* va = a.at(py, px);
      for (int qy = std::max(0, py - radius);
           qy <= std::min(a.h - 1, py + radius); ++qy) {
        for (int qx = std::max(0, px - radius);
             qx <= std::min(a.w - 1, px + radius); ++qx) {
          const int q = qy * a.w + qx;
          const float* vb = b.at(qy, qx);
          double dot = 0;
          for (int k = 0; k < a.c; ++k)
            dot += static_cast<double>(va[k]) * vb[k];
          c[static_cast<std::size_t>(p) * N + q] = dot;
        }
      }
    }
  }
  return c;
}

double matching_score(const std::vector<double>& c, int n_patches,
                      double tau) {
  if (n_patches < 1 ||
      c.size() != static_cast<std::size_t>(n_patches) * n_patches)
    throw Error("matching_score: bad volume size");
  if (!(tau > 0)) throw Error("matching_score: tau must be positive");
  double acc = 0;
  for (int p = 0; p < n_patches; ++p) {
    const double* row = c.data() + static_cast<std::size_t>(p) * n_patches;
    double m = -1e300;
    for (int q = 0; q < n_patches; ++q) {
      if (!std::isfinite(row[q]))
        throw Error("matching_score: non-finite cost at row " +
                    std::to_string(p));
      m = std::max(m, row[q]);
    }
    // Shifting by the row max makes the largest softmax value
    // 1 / sum exp((C - max)/tau), numerically stable for small tau.
    double denom = 0;
    for (int q = 0; q < n_patches; ++q)
      denom += std::exp((row[q] - m) / tau);
    acc += 1.0 / denom;
  }
  return acc / n_patches;
}

double shot_pair_score(const FrameSource& clip, const Shot& shot_i,
                       const Shot& shot_j, FeatureExtractorBackend& features,
                       const ThreadParams& params) {
  validate(params);
  if (shot_i.start_frame >= shot_j.start_frame)
    throw Error("shot_pair_score: shots must be temporally ordered");
  auto extract = [&](int frame_idx, int shot_idx) {
    try {
      Image img = clip.frame(frame_idx);
      img = resize_short_side(img, 224);
      FeatureMap fm = features.extract(img);
      normalize_features(fm);
      return fm;
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw BackendError("feature extraction failed for shot " +
                             std::to_string(shot_idx) + ": " + e.what(),
                         1);
    }
  };
  const FeatureMap fa = extract(shot_i.end_frame, shot_i.index);
  const FeatureMap fb = extract(shot_j.start_frame, shot_j.index);
  const auto c = cost_volume(fa, fb, params.n);
  return matching_score(c, fa.patches(), params.tau);
}

ThreadingResult cluster_threads(
    const std::map<std::pair<int, int>, double>& scores, double epsilon,
    int shot_count) {
  if (shot_count < 1) throw Error("cluster_threads: need at least one shot");
  std::vector<int> parent(static_cast<std::size_t>(shot_count));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (const auto& [pair, s] : scores) {
    const auto [i, j] = pair;
    if (i < 0 || j < 0 || i >= shot_count || j >= shot_count || i >= j)
      throw Error("cluster_threads: bad pair (" + std::to_string(i) + "," +
                  std::to_string(j) + ")");
    if (s > epsilon) parent[static_cast<std::size_t>(find(i))] = find(j);
  }
  std::map<int, std::vector<int>> comps;
  for (int i = 0; i < shot_count; ++i) comps[find(i)].push_back(i);
  ThreadingResult r;
  r.adjacency = scores;
  r.n_shot = shot_count;
  for (auto& [root, members] : comps) {
    std::sort(members.begin(), members.end());
    r.threads.push_back(members);
  }
  std::sort(r.threads.begin(), r.threads.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  r.n_thread = static_cast<int>(r.threads.size());
  return r;
}

std::string thread_statements(const ThreadingResult& result) {
  if (!result.has_structure()) return "";
  std::vector<std::string> parts;
  for (const auto& t : result.threads) {
    if (t.size() < 2) continue;
    std::string shots;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i) shots += ", ";
      shots += "Shot " + std::to_string(t[i]);
    }
    parts.push_back("[" + shots + "] share the same camera setup.");
  }
  return join(parts, " ");
}

std::string thread_prompt_fragment(const ThreadingResult& result) {
  const std::string statements = thread_statements(result);
  if (statements.empty()) return "";
  return "Finally, in one sentence, briefly explain why " + statements + "\n";
}

void write_feature_map(const std::filesystem::path& path,
                       const FeatureMap& fm) {
  std::string blob;
  blob.reserve(16 + fm.data.size() * 4);
  blob += "FGT1";
  auto put_u32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
      blob += static_cast<char>((v >> (8 * i)) & 0xff);
  };
  put_u32(static_cast<std::uint32_t>(fm.h));
  put_u32(static_cast<std::uint32_t>(fm.w));
  put_u32(static_cast<std::uint32_t>(fm.c));
  for (float f : fm.data) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    put_u32(bits);
  }
  atomic_write_file(path, blob);
}

FeatureMap read_feature_map(const std::filesystem::path& path) {
  const std::string blob = read_text_file(path);
  if (blob.size() < 16 || blob.compare(0, 4, "FGT1") != 0)
    throw IoError("not a feature tensor file: " + path.string());
  auto get_u32 = [&](std::size_t off) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(
               static_cast<unsigned char>(blob[off + static_cast<std::size_t>(i)]))
           << (8 * i);
    return v;
  };
  const std::uint32_t h = get_u32(4);
  const std::uint32_t w = get_u32(8);
  const std::uint32_t c = get_u32(12);
  const std::size_t count = static_cast<std::size_t>(h) * w * c;
  if (h < 1 || w < 1 || c < 1 || blob.size() != 16 + count * 4)
    throw IoError("corrupt feature tensor file: " + path.string());
  FeatureMap fm(static_cast<int>(h), static_cast<int>(w), static_cast<int>(c));
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint32_t bits = get_u32(16 + i * 4);
    std::memcpy(&fm.data[i], &bits, 4);
  }
  return fm;
}

std::string threading_to_json(const std::string& ad_id,
                              const ThreadingResult& r) {
  json j;
  j["ad_id"] = ad_id;
  json adj = json::array();
  for (const auto& [pair, s] : r.adjacency)
    adj.push_back({pair.first, pair.second, s});
  j["adjacency"] = adj;
  j["threads"] = r.threads;
  j["n_thread"] = r.n_thread;
  j["n_shot"] = r.n_shot;
  return j.dump();
}

ThreadingResult threading_from_json(const std::string& text) {
  ThreadingResult r;
  try {
    const json j = json::parse(text);
    for (const auto& e : j.at("adjacency")) {
      r.adjacency[{e.at(0).get<int>(), e.at(1).get<int>()}] =
          e.at(2).get<double>();
    }
    r.threads = j.at("threads").get<std::vector<std::vector<int>>>();
    r.n_thread = j.at("n_thread").get<int>();
    r.n_shot = j.at("n_shot").get<int>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad threading artifact: ") + e.what());
  }
  return r;
}

}  // namespace shotad
