#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "patchrank/features.hpp"
#include "patchrank/image.hpp"
#include "patchrank/model.hpp"
#include "patchrank/types.hpp"

namespace patchrank {

struct SyntheticSpec {
  std::uint64_t seed = 0;
  int n = 32;                 // patch count (instance mode)
  int p = 8;                  // feature dimension
  int clusters = 2;           // 1 foreground + clusters-1 background
  double separation = 3.0;    // distance between cluster means
  double corruption = 0.0;    // fraction of current-frame columns replaced by noise
  double graph_noise = 0.0;   // fraction of prior-graph edges replaced by random weights
  int frames = 50;            // sequence mode
  double motion = 2.0;        // horizontal target speed, px/frame
  Params params;
};

struct GeneratedInstance {
  RankingInstance instance;
  Vector labels;  // ground-truth foreground indicator, one per patch
  int grid_rows = 0;
  int grid_cols = 0;
};

/// Cluster-separated Gaussian feature columns on a grid; a seeded subset of
/// cells is foreground, queries are a seeded subset of the foreground, the
/// prior graph comes from the clean features. Memory frames are jittered
/// clean copies with the true labels as weights. Fully deterministic in
/// (seed, spec).
GeneratedInstance gen_instance(const SyntheticSpec& spec);

struct GeneratedSequence {
  std::vector<Frame> frames;
  std::vector<BoundingBox> gt;
};

/// Checker-textured square target translating horizontally over a static
/// noise background.
GeneratedSequence gen_sequence(const SyntheticSpec& spec);

/// Writes frame_0001.ppm ... plus gt.txt into `dir` (created if needed).
void write_sequence(const GeneratedSequence& seq, const std::string& dir);

}  // namespace patchrank
