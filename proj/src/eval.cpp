#include "patchrank/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace patchrank {

EvalResult eval_pr_sr(const std::vector<BoundingBox>& pred,
                      const std::vector<BoundingBox>& gt) {
  require(!pred.empty(), "need at least one frame");
  require(pred.size() == gt.size(), "prediction and ground truth must have equal length");

  const double frames = static_cast<double>(pred.size());
  EvalResult res;

  int close = 0;
  std::vector<double> ious(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    double dx = pred[i].cx() - gt[i].cx();
    double dy = pred[i].cy() - gt[i].cy();
    if (std::hypot(dx, dy) <= 20.0) ++close;
    ious[i] = iou(pred[i], gt[i]);
  }
  res.pr20 = close / frames;

  double area = 0.0;
  for (int t = 0; t <= 100; ++t) {
    double thr = t / 100.0;
    int pass = 0;
    for (double v : ious)
      if (v >= thr) ++pass;
    area += pass / frames;
  }
  res.sr_auc = area / 101.0;
  return res;
}

double mean_center_error(const std::vector<BoundingBox>& pred,
                         const std::vector<BoundingBox>& gt) {
  require(!pred.empty() && pred.size() == gt.size(), "trajectories must align");
  double total = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i)
    total += std::hypot(pred[i].cx() - gt[i].cx(), pred[i].cy() - gt[i].cy());
  return total / static_cast<double>(pred.size());
}

void save_trajectory(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), "cannot open " + path + " for writing");
  out.precision(6);
  for (const auto& entry : traj) {
    out << entry.box.x << "," << entry.box.y << "," << entry.box.w << "," << entry.box.h
        << "," << entry.confidence << "\n";
  }
  require(out.good(), "write failed for " + path);
}

std::vector<BoundingBox> load_boxes(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open " + path);
  std::vector<BoundingBox> boxes;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    BoundingBox box;
    if (!(ss >> box.x >> box.y >> box.w >> box.h))
      throw std::invalid_argument(path + ": malformed box on line " +
                                  std::to_string(line_no));
    boxes.push_back(box);
  }
  require(!boxes.empty(), path + " holds no boxes");
  return boxes;
}

double auc_score(const Vector& scores, const Vector& labels,
                 const std::vector<bool>& exclude) {
  require(scores.size() == labels.size(), "scores and labels must align");
  require(exclude.empty() || exclude.size() == static_cast<std::size_t>(scores.size()),
          "exclusion mask must match the score count");

  std::vector<int> idx;
  for (int i = 0; i < static_cast<int>(scores.size()); ++i) {
    if (!exclude.empty() && exclude[i]) continue;
    require(labels[i] == 0.0 || labels[i] == 1.0, "labels must be 0 or 1");
    idx.push_back(i);
  }
  std::sort(idx.begin(), idx.end(),
            [&scores](int a, int b) { return scores[a] < scores[b]; });

  // Midrank assignment over tied score groups.
  const int m = static_cast<int>(idx.size());
  std::vector<double> rank(m);
  for (int i = 0; i < m;) {
    int j = i;
    while (j < m && scores[idx[j]] == scores[idx[i]]) ++j;
    double mid = (i + 1 + j) / 2.0;  // average of ranks i+1 .. j
    for (int k = i; k < j; ++k) rank[k] = mid;
    i = j;
  }

  double pos = 0, rank_sum = 0;
  for (int i = 0; i < m; ++i) {
    if (labels[idx[i]] == 1.0) {
      pos += 1.0;
      rank_sum += rank[i];
    }
  }
  double neg = m - pos;
  require(pos > 0 && neg > 0, "AUC needs both classes present");
  return (rank_sum - pos * (pos + 1) / 2.0) / (pos * neg);
}

}  // namespace patchrank
