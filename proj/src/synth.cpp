#include "patchrank/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "patchrank/rng.hpp"

namespace patchrank {

namespace {

constexpr double kFeatureNoise = 0.5;   // per-coordinate cluster spread
constexpr double kMemoryJitter = 0.05;  // memory frames drift off the clean copy

// First k entries of a seeded partial shuffle of 0..n-1.
std::vector<int> pick_distinct(SplitMix64& rng, int n, int k) {
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < k; ++i) {
    int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

// Largest factor pair with rows <= cols, rows as close to sqrt(n) as divisibility allows.
std::pair<int, int> grid_shape(int n) {
  int rows = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n))));
  while (rows > 1 && n % rows != 0) --rows;
  return {rows, n / rows};
}

}  // namespace

GeneratedInstance gen_instance(const SyntheticSpec& spec) {
  require(spec.n >= 2 && spec.p >= 1, "need at least 2 patches and 1 feature dim");
  require(spec.clusters >= 2, "need at least 2 clusters (foreground + background)");
  require(spec.corruption >= 0.0 && spec.corruption <= 1.0, "corruption must be in [0, 1]");
  require(spec.graph_noise >= 0.0 && spec.graph_noise <= 1.0,
          "graph_noise must be in [0, 1]");
  require(spec.separation >= 0.0, "separation must be nonnegative");

  SplitMix64 rng(spec.seed);
  const int n = spec.n, p = spec.p;
  auto [rows, cols] = grid_shape(n);

  // Cluster means: foreground along a random direction, each background
  // cluster along its own; at separation 0 all means coincide at the origin.
  auto unit_direction = [&rng, p]() {
    Vector d = rng.normal_vector(p);
    double norm = d.norm();
    return norm > 0.0 ? Vector(d / norm) : Vector(Vector::Unit(p, 0));
  };
  std::vector<Vector> means;
  means.push_back(unit_direction() * (spec.separation / 2.0));
  for (int c = 1; c < spec.clusters; ++c) {
    if (spec.clusters == 2) {
      means.push_back(-means[0]);  // antipodal pair, distance = separation
    } else {
      means.push_back(unit_direction() * (spec.separation / 2.0));
    }
  }

  const int fg_count = std::max(1, static_cast<int>(std::lround(n / 4.0)));
  std::vector<int> fg_cells = pick_distinct(rng, n, fg_count);
  Vector labels = Vector::Zero(n);
  for (int c : fg_cells) labels[c] = 1.0;

  // Background cells cycle over the background clusters in cell order.
  std::vector<int> cluster_of(n, 0);
  int bg_seen = 0;
  for (int i = 0; i < n; ++i) {
    if (labels[i] == 1.0) continue;
    cluster_of[i] = 1 + bg_seen % (spec.clusters - 1);
    ++bg_seen;
  }

  Matrix clean(p, n);
  for (int j = 0; j < n; ++j)
    clean.col(j) = means[cluster_of[j]] + kFeatureNoise * rng.normal_vector(p);

  GeneratedInstance out;
  out.grid_rows = rows;
  out.grid_cols = cols;
  out.labels = labels;
  RankingInstance& inst = out.instance;
  inst.X = clean;
  inst.params = spec.params;

  // Memory: first and previous frame stand-ins, clean appearance with a
  // small jitter and the true labels as their learned weights.
  for (double delta : {spec.params.delta_first, spec.params.delta_prev}) {
    MemoryFrame m;
    m.X = clean + kMemoryJitter * rng.normal_matrix(p, n);
    m.v = labels;
    m.delta = delta;
    inst.memory.push_back(std::move(m));
  }

  inst.S = build_prior_graph(rows, cols, clean);

  if (spec.graph_noise > 0.0) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (inst.S.weights(i, j) > 0.0) edges.emplace_back(i, j);
    int noisy = static_cast<int>(std::lround(spec.graph_noise * edges.size()));
    for (int k : pick_distinct(rng, static_cast<int>(edges.size()), noisy)) {
      double w = rng.uniform();
      inst.S.weights(edges[k].first, edges[k].second) = w;
      inst.S.weights(edges[k].second, edges[k].first) = w;
    }
  }

  if (spec.corruption > 0.0) {
    int corrupted = static_cast<int>(std::lround(spec.corruption * n));
    double amp = spec.separation / 2.0 + 1.0;
    for (int j : pick_distinct(rng, n, corrupted))
      for (int r = 0; r < p; ++r) inst.X(r, j) = rng.uniform(-amp, amp);
  }

  int query_count = std::min(4, fg_count);
  inst.y = Vector::Zero(n);
  std::vector<int> picked = pick_distinct(rng, fg_count, query_count);
  for (int k : picked) inst.y[fg_cells[k]] = 1.0;

  inst.validate();
  return out;
}

GeneratedSequence gen_sequence(const SyntheticSpec& spec) {
  require(spec.frames >= 1, "need at least one frame");
  constexpr int kWidth = 200, kHeight = 120, kTarget = 40, kCell = 8;
  const int x0 = 20;
  const int y0 = (kHeight - kTarget) / 2;

  // The whole trajectory must stay on-frame.
  for (int t = 0; t < spec.frames; ++t) {
    int x = x0 + static_cast<int>(std::lround(t * spec.motion));
    require(x >= 0 && x + kTarget <= kWidth, "target leaves the frame; reduce motion or frames");
  }

  SplitMix64 rng(spec.seed);
  Frame background = make_frame(kWidth, kHeight);
  for (auto& byte : background.pixels)
    byte = static_cast<std::uint8_t>(rng.below(256));

  // Checker texture, fixed per sequence.
  const int cells = (kTarget + kCell - 1) / kCell;
  std::vector<std::uint8_t> palette(static_cast<std::size_t>(cells) * cells * 3);
  for (auto& byte : palette) byte = static_cast<std::uint8_t>(rng.below(256));

  GeneratedSequence seq;
  seq.frames.reserve(spec.frames);
  seq.gt.reserve(spec.frames);
  for (int t = 0; t < spec.frames; ++t) {
    int x = x0 + static_cast<int>(std::lround(t * spec.motion));
    Frame f = background;
    for (int dy = 0; dy < kTarget; ++dy)
      for (int dx = 0; dx < kTarget; ++dx) {
        std::size_t cell = static_cast<std::size_t>(dy / kCell) * cells + dx / kCell;
        for (int ch = 0; ch < 3; ++ch) f.at(x + dx, y0 + dy, ch) = palette[cell * 3 + ch];
      }
    seq.frames.push_back(std::move(f));
    seq.gt.push_back({x, y0, kTarget, kTarget});
  }
  return seq;
}

void write_sequence(const GeneratedSequence& seq, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  char name[32];
  for (std::size_t t = 0; t < seq.frames.size(); ++t) {
    std::snprintf(name, sizeof(name), "frame_%04zu.ppm", t + 1);
    write_ppm(seq.frames[t], (fs::path(dir) / name).string());
  }
  std::ofstream gt(fs::path(dir) / "gt.txt");
  require(gt.good(), "cannot write gt.txt");
  for (const auto& box : seq.gt)
    gt << box.x << "," << box.y << "," << box.w << "," << box.h << "\n";
  require(gt.good(), "gt.txt write failed");
}

}  // namespace patchrank
