#include "patchrank/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "patchrank/solver.hpp"

namespace patchrank {

namespace {

Vector flatten(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

BoundingBox scale_box(const BoundingBox& box, double s) {
  return {static_cast<int>(std::lround(box.x * s)), static_cast<int>(std::lround(box.y * s)),
          static_cast<int>(std::lround(box.w * s)), static_cast<int>(std::lround(box.h * s))};
}

BoundingBox unscale_box(const BoundingBox& box, double s) {
  if (s == 1.0) return box;
  return {static_cast<int>(std::lround(box.x / s)), static_cast<int>(std::lround(box.y / s)),
          static_cast<int>(std::lround(box.w / s)), static_cast<int>(std::lround(box.h / s))};
}

// One structured pass: rank margin violators, apply the worst ones in order,
// re-checking the margin as h moves. Returns the number of applied steps.
int pa_pass(Vector& h, int star, const std::vector<Matrix>& pool,
            const std::vector<BoundingBox>& boxes, const TrackParams& params) {
  const Vector x_star = flatten(pool[star]);
  const double s_star = h.dot(x_star);

  struct Violation {
    int index;
    double loss;
  };
  std::vector<Violation> violations;
  for (int c = 0; c < static_cast<int>(pool.size()); ++c) {
    if (c == star) continue;
    double overlap = iou(boxes[c], boxes[star]);
    if (overlap >= params.neg_iou) continue;
    double loss = (1.0 - overlap) - (s_star - h.dot(flatten(pool[c])));
    if (loss > 0.0) violations.push_back({c, loss});
  }
  std::sort(violations.begin(), violations.end(),
            [](const Violation& a, const Violation& b) { return a.loss > b.loss; });
  if (static_cast<int>(violations.size()) > params.pa_budget)
    violations.resize(params.pa_budget);

  int applied = 0;
  for (const auto& viol : violations) {
    Vector diff = x_star - flatten(pool[viol.index]);
    double norm2 = diff.squaredNorm();
    if (norm2 <= 0.0) continue;
    double overlap = iou(boxes[viol.index], boxes[star]);
    double loss = (1.0 - overlap) - h.dot(diff);  // margin re-checked after prior steps
    if (loss <= 0.0) continue;
    double tau = std::min(params.pa_c, loss / norm2);
    h += tau * diff;
    ++applied;
  }
  return applied;
}

}  // namespace

bool TrackParams::set(const std::string& name, double value) {
  if (ranking.set(name, value)) return true;
  if (name == "shrink") shrink = value;
  else if (name == "expand") expand = value;
  else if (name == "fuse_eps") fuse_eps = value;
  else if (name == "theta") theta = value;
  else if (name == "stride") stride = static_cast<int>(value);
  else if (name == "pa_c") pa_c = value;
  else if (name == "pa_budget") pa_budget = static_cast<int>(value);
  else if (name == "init_epochs") init_epochs = static_cast<int>(value);
  else if (name == "min_side") min_side = static_cast<int>(value);
  else if (name == "neg_iou") neg_iou = value;
  else if (name == "unweighted") unweighted = value != 0.0;
  else return false;
  return true;
}

void TrackParams::validate() const {
  ranking.validate();
  require(shrink > 0.0 && shrink < 1.0, "shrink must be in (0, 1)");
  require(expand > 1.0, "expand must exceed 1");
  require(stride >= 1, "stride must be at least 1 px");
  require(pa_c > 0.0 && pa_budget >= 1 && init_epochs >= 1, "learner parameters must be positive");
  require(min_side >= kGridCols, "min_side must allow an 8x8 partition");
  require(neg_iou > 0.0 && neg_iou <= 1.0, "neg_iou must be in (0, 1]");
}

ClassifierBank ClassifierBank::zeros() {
  ClassifierBank bank;
  bank.h_first = Vector::Zero(kFeatureDim * kPatchCount);
  bank.h_prev2 = bank.h_first;
  bank.h_prev1 = bank.h_first;
  return bank;
}

Preprocessed preprocess(const Frame& frame, const BoundingBox& box, int min_side) {
  require(min_side >= 1, "min_side must be positive");
  BoundingBox clamped = clamp_to_frame(box, frame.width, frame.height);
  int side = std::min(clamped.w, clamped.h);
  Preprocessed out;
  if (side >= min_side) {
    out.frame = frame;
    out.box = clamped;
    out.scale = 1.0;
    return out;
  }
  out.scale = static_cast<double>(min_side) / side;
  out.frame = resize_bilinear(frame, static_cast<int>(std::lround(frame.width * out.scale)),
                              static_cast<int>(std::lround(frame.height * out.scale)));
  out.box = scale_box(clamped, out.scale);
  return out;
}

std::vector<BoundingBox> candidates(const BoundingBox& prev_box, int frame_w, int frame_h,
                                    int stride) {
  require(stride >= 1, "stride must be at least 1 px");
  require(prev_box.w >= 1 && prev_box.h >= 1, "previous box must be non-degenerate");
  const int half = static_cast<int>(std::floor(
      std::sqrt(static_cast<double>(prev_box.w) * prev_box.h)));
  const int steps = half / stride;
  std::vector<BoundingBox> out;
  out.reserve(static_cast<std::size_t>(2 * steps + 1) * (2 * steps + 1));
  for (int ky = -steps; ky <= steps; ++ky)
    for (int kx = -steps; kx <= steps; ++kx) {
      BoundingBox cand{prev_box.x + kx * stride, prev_box.y + ky * stride, prev_box.w,
                       prev_box.h};
      if (cand.inside(frame_w, frame_h)) out.push_back(cand);
    }
  return out;
}

double score(const ClassifierBank& bank, const Matrix& Xw) {
  Vector x = flatten(Xw);
  require(x.size() == bank.h_prev1.size(), "descriptor size must match the classifiers");
  return bank.alpha1 * bank.h_prev1.dot(x) + bank.alpha2 * bank.h_prev2.dot(x) +
         bank.alpha3 * bank.h_first.dot(x);
}

Selection select(const std::vector<double>& scores, const std::vector<BoundingBox>& boxes,
                 const BoundingBox& prev_box) {
  require(!scores.empty() && scores.size() == boxes.size(),
          "select needs matching nonempty scores and boxes");
  int best = 0;
  auto disp2 = [&prev_box](const BoundingBox& b) {
    double dx = b.cx() - prev_box.cx();
    double dy = b.cy() - prev_box.cy();
    return dx * dx + dy * dy;
  };
  double best_disp = disp2(boxes[0]);
  double lo = scores[0], hi = scores[0];
  for (int i = 1; i < static_cast<int>(scores.size()); ++i) {
    lo = std::min(lo, scores[i]);
    hi = std::max(hi, scores[i]);
    double d = disp2(boxes[i]);
    if (scores[i] > scores[best] || (scores[i] == scores[best] && d < best_disp)) {
      best = i;
      best_disp = d;
    }
  }
  Selection sel;
  sel.index = best;
  sel.confidence = (hi > lo) ? (scores[best] - lo) / (hi - lo) : 1.0;
  return sel;
}

void update_classifier(ClassifierBank& bank, int star, const std::vector<Matrix>& pool,
                       const std::vector<BoundingBox>& boxes, double confidence,
                       const TrackParams& params) {
  require(star >= 0 && star < static_cast<int>(pool.size()), "star index out of range");
  require(pool.size() == boxes.size(), "pool and boxes must align");
  if (confidence <= params.theta) return;
  bank.h_prev2 = bank.h_prev1;
  pa_pass(bank.h_prev1, star, pool, boxes, params);
}

void train_initial(ClassifierBank& bank, int star, const std::vector<Matrix>& pool,
                   const std::vector<BoundingBox>& boxes, const TrackParams& params) {
  require(star >= 0 && star < static_cast<int>(pool.size()), "star index out of range");
  Vector h = Vector::Zero(kFeatureDim * kPatchCount);
  for (int epoch = 0; epoch < params.init_epochs; ++epoch) {
    if (pa_pass(h, star, pool, boxes, params) == 0) break;
  }
  bank.h_first = h;
  bank.h_prev2 = h;
  bank.h_prev1 = std::move(h);
}

PatchWeights compute_patch_weights(const Frame& frame, const BoundingBox& box,
                                   const TrackParams& params, const FrameMemory* memory) {
  PatchWeights pw;
  pw.grid = partition(frame, box);

  RankingInstance fg;
  fg.X = pw.grid.features;
  fg.y = foreground_queries(pw.grid, params.shrink);
  if (fg.y.sum() == 0.0) {
    // Degenerate geometry: no patch center inside the shrunk region. Anchor
    // the ranking on the patch containing the box center instead.
    double cx = pw.grid.box.cx(), cy = pw.grid.box.cy();
    for (int i = 0; i < kPatchCount; ++i) {
      const BoundingBox& r = pw.grid.rects[i];
      if (cx >= r.x && cx <= r.x + r.w && cy >= r.y && cy <= r.y + r.h) {
        fg.y[i] = 1.0;
        break;
      }
    }
    if (fg.y.sum() == 0.0) fg.y[0] = 1.0;
  }
  fg.S = build_prior_graph(kGridRows, kGridCols, pw.grid.features);
  if (memory != nullptr) {
    fg.memory.push_back(memory->first);
    fg.memory.push_back(memory->prev);
  }
  fg.params = params.ranking;
  pw.v = solve(fg, SolveMode::Full).v;

  BackgroundProblem bgp = background_problem(frame, pw.grid, params.expand);
  if (bgp.available) {
    RankingInstance bg;
    bg.X = bgp.features;
    bg.y = bgp.queries;
    bg.S.grid_rows = 0;  // extended grid with holes; dims are not a plain rectangle
    bg.S.grid_cols = 0;
    bg.S.weights = grid_gaussian_adjacency(bgp.coords, bgp.features);
    bg.params = params.ranking;
    pw.u = solve(bg, SolveMode::Full).v.head(kPatchCount);
  } else {
    pw.u = Vector::Zero(kPatchCount);
  }

  pw.fused = params.unweighted ? Vector::Ones(kPatchCount)
                               : fuse_weights(pw.v, pw.u, params.fuse_eps);
  return pw;
}

Trajectory track(const std::vector<Frame>& frames, const BoundingBox& init_box,
                 const TrackParams& params) {
  require(!frames.empty(), "at least one frame required");
  params.validate();

  Preprocessed pre = preprocess(frames[0], init_box, params.min_side);
  const double s = pre.scale;

  auto scaled_frame = [&](int t) {
    if (s == 1.0) return frames[t];
    return resize_bilinear(frames[t], static_cast<int>(std::lround(frames[t].width * s)),
                           static_cast<int>(std::lround(frames[t].height * s)));
  };

  Trajectory traj;
  traj.reserve(frames.size());

  // Frame 1: weights and classifiers from the given box.
  Frame f0 = pre.frame;
  BoundingBox box = pre.box;
  PatchWeights pw = compute_patch_weights(f0, box, params, nullptr);

  std::vector<BoundingBox> boxes = candidates(box, f0.width, f0.height, params.stride);
  std::vector<Matrix> pool;
  pool.reserve(boxes.size());
  int star = -1;
  for (int i = 0; i < static_cast<int>(boxes.size()); ++i) {
    PatchGrid g = partition(f0, boxes[i]);
    pool.push_back(weighted_descriptor(g.features, pw.fused));
    if (boxes[i].x == box.x && boxes[i].y == box.y) star = i;
  }
  require(star >= 0, "initial box must generate its own candidate");
  ClassifierBank bank = ClassifierBank::zeros();
  train_initial(bank, star, pool, boxes, params);

  FrameMemory memory;
  memory.first = {pw.grid.features, pw.v, params.ranking.delta_first};
  memory.prev = {pw.grid.features, pw.v, params.ranking.delta_prev};
  traj.push_back({unscale_box(box, s), 1.0, pw.fused, false});

  for (int t = 1; t < static_cast<int>(frames.size()); ++t) {
    Frame ft = scaled_frame(t);
    pw = compute_patch_weights(ft, box, params, &memory);

    boxes = candidates(box, ft.width, ft.height, params.stride);
    if (boxes.empty()) {
      traj.push_back({unscale_box(box, s), 0.0, pw.fused, true});
      continue;  // keep last known box, memory and classifiers untouched
    }
    pool.clear();
    pool.reserve(boxes.size());
    std::vector<double> scores(boxes.size());
    for (int i = 0; i < static_cast<int>(boxes.size()); ++i) {
      PatchGrid g = partition(ft, boxes[i]);
      pool.push_back(weighted_descriptor(g.features, pw.fused));
      scores[i] = score(bank, pool.back());
    }
    Selection sel = select(scores, boxes, box);
    update_classifier(bank, sel.index, pool, boxes, sel.confidence, params);

    memory.prev = {pw.grid.features, pw.v, params.ranking.delta_prev};
    box = boxes[sel.index];
    traj.push_back({unscale_box(box, s), sel.confidence, pw.fused, false});
  }
  return traj;
}

}  // namespace patchrank
