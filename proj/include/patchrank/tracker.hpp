#pragma once

#include <string>
#include <vector>

#include "patchrank/features.hpp"
#include "patchrank/model.hpp"
#include "patchrank/types.hpp"

namespace patchrank {

struct TrackParams {
  Params ranking;
  double shrink = 0.6;     // foreground query region ratio
  double expand = 1.4;     // background ring ratio
  double fuse_eps = 43.0;  // logistic sharpness for weight fusion
  double theta = 0.3;      // confidence gate for classifier updates
  int stride = 2;          // candidate grid step, px
  double pa_c = 1.0;       // passive-aggressive step cap
  int pa_budget = 16;      // violators applied per update
  int init_epochs = 10;    // structured passes over frame-1 candidates
  int min_side = 32;       // minimum box side after preprocessing
  double neg_iou = 0.5;    // candidates below this IoU act as negatives
  bool unweighted = false; // force all patch weights to 1 (ablation baseline)

  bool set(const std::string& name, double value);
  void validate() const;
};

/// Linear classifiers over the flattened weighted descriptor (32*64 dims).
struct ClassifierBank {
  Vector h_first, h_prev2, h_prev1;
  double alpha1 = 0.63;  // weight of h_prev1
  double alpha2 = 0.07;  // weight of h_prev2
  double alpha3 = 0.03;  // weight of h_first

  static ClassifierBank zeros();
};

struct FrameMemory {
  MemoryFrame first;
  MemoryFrame prev;
};

struct TrackedFrame {
  BoundingBox box;
  double confidence = 0.0;
  Vector weight_map;  // fused per-patch weights, kPatchCount entries
  bool lost = false;
};

using Trajectory = std::vector<TrackedFrame>;

struct Preprocessed {
  Frame frame;
  BoundingBox box;
  double scale = 1.0;
};

/// Uniform upscale so min(w, h) >= min_side; identity when already large
/// enough. The scale is kept for mapping results back.
Preprocessed preprocess(const Frame& frame, const BoundingBox& box, int min_side);

/// Translations of prev_box on a stride-px grid with centers inside the
/// square window of side 2*sqrt(w*h) around the previous center; boxes
/// leaving the frame are dropped.
std::vector<BoundingBox> candidates(const BoundingBox& prev_box, int frame_w, int frame_h,
                                    int stride);

double score(const ClassifierBank& bank, const Matrix& Xw);

struct Selection {
  int index = -1;
  double confidence = 0.0;
};

/// Argmax of the scores; ties go to the candidate closest to prev_box.
/// Confidence is the min-max normalized winning score (1 when all equal).
Selection select(const std::vector<double>& scores, const std::vector<BoundingBox>& boxes,
                 const BoundingBox& prev_box);

/// Gated history rotation plus a passive-aggressive structured pass: among
/// candidates with IoU below neg_iou, the worst margin violators (capped by
/// pa_budget) each pull h toward the selected box's descriptor.
void update_classifier(ClassifierBank& bank, int star, const std::vector<Matrix>& pool,
                       const std::vector<BoundingBox>& boxes, double confidence,
                       const TrackParams& params);

/// Frame-1 training: repeated passive-aggressive passes from h = 0 until no
/// violations remain (or init_epochs passes); seeds all three classifiers.
void train_initial(ClassifierBank& bank, int star, const std::vector<Matrix>& pool,
                   const std::vector<BoundingBox>& boxes, const TrackParams& params);

/// Patch-weight computation at one box: foreground ranking on the box grid,
/// background ranking on the extended grid (u = 0 when no ring survives),
/// logistic fusion.
struct PatchWeights {
  PatchGrid grid;
  Vector v;       // foreground ranking
  Vector u;       // background ranking restricted to the box patches
  Vector fused;   // weights used for descriptors
};

PatchWeights compute_patch_weights(const Frame& frame, const BoundingBox& box,
                                   const TrackParams& params, const FrameMemory* memory);

Trajectory track(const std::vector<Frame>& frames, const BoundingBox& init_box,
                 const TrackParams& params);

}  // namespace patchrank
