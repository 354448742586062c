#pragma once

#include <string>
#include <vector>

#include "patchrank/features.hpp"
#include "patchrank/tracker.hpp"
#include "patchrank/types.hpp"

namespace patchrank {

struct EvalResult {
  double pr20 = 0.0;    // fraction of frames with center error <= 20 px
  double sr_auc = 0.0;  // mean pass rate over 101 IoU thresholds 0.00 .. 1.00
};

EvalResult eval_pr_sr(const std::vector<BoundingBox>& pred,
                      const std::vector<BoundingBox>& gt);

double mean_center_error(const std::vector<BoundingBox>& pred,
                         const std::vector<BoundingBox>& gt);

/// One line per frame: "x,y,w,h" with confidence appended as a 5th column.
void save_trajectory(const Trajectory& traj, const std::string& path);

/// Reads 4-column (ground truth) or 5-column (tracker output) files.
std::vector<BoundingBox> load_boxes(const std::string& path);

/// Rank-based AUC of scores against binary labels, ties resolved by
/// midranks. Entries with mask[i] = true are excluded (e.g. query patches).
double auc_score(const Vector& scores, const Vector& labels,
                 const std::vector<bool>& exclude = {});

}  // namespace patchrank
