#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "patchrank/eval.hpp"
#include "patchrank/image.hpp"
#include "patchrank/model.hpp"
#include "patchrank/solver.hpp"
#include "patchrank/synth.hpp"
#include "patchrank/tracker.hpp"

namespace fs = std::filesystem;
using namespace patchrank;

namespace {

// "name=value" strings from repeated --param flags.
template <typename Target>
void apply_params(const std::vector<std::string>& overrides, Target& target) {
  for (const auto& text : overrides) {
    auto eq = text.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--param expects name=value, got '" + text + "'");
    std::string name = text.substr(0, eq);
    double value = std::stod(text.substr(eq + 1));
    if (!target.set(name, value))
      throw std::invalid_argument("unknown parameter '" + name + "'");
  }
}

BoundingBox parse_box(const std::string& text) {
  BoundingBox box;
  if (std::sscanf(text.c_str(), "%d,%d,%d,%d", &box.x, &box.y, &box.w, &box.h) != 4)
    throw std::invalid_argument("expected box as \"x,y,w,h\", got '" + text + "'");
  return box;
}

std::vector<Frame> load_frames(const std::string& dir) {
  std::vector<std::string> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".ppm")
      paths.push_back(entry.path().string());
  }
  if (paths.empty()) throw std::invalid_argument("no .ppm frames in " + dir);
  std::sort(paths.begin(), paths.end());
  std::vector<Frame> frames;
  frames.reserve(paths.size());
  for (const auto& p : paths) frames.push_back(read_ppm(p));
  return frames;
}

void write_weights_json(const RankingResult& res, const RankingInstance& inst,
                        const std::string& path) {
  nlohmann::json doc;
  doc["v"] = std::vector<double>(res.v.data(), res.v.data() + res.v.size());
  doc["w"] = std::vector<double>(res.w.data(), res.w.data() + res.w.size());
  doc["b"] = res.b;
  doc["iterations"] = res.iterations;
  doc["converged"] = res.converged;
  doc["objective"] = objective(res.state, inst);
  std::ofstream out(path);
  if (!out.good()) throw std::invalid_argument("cannot open " + path + " for writing");
  out << doc.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"patch foreground weighting, graph-ranking solver and tracking toolkit"};
  app.require_subcommand(1);

  // solve
  auto* cmd_solve = app.add_subcommand("solve", "run the ranking solver on an instance");
  std::string instance_path, mode_name = "full", trace_path, weights_path;
  std::vector<std::string> solve_params;
  cmd_solve->add_option("--instance", instance_path, "instance JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_solve->add_option("--mode", mode_name, "full | noT | noG");
  cmd_solve->add_option("--trace", trace_path, "per-iteration CSV output");
  cmd_solve->add_option("--weights", weights_path, "result JSON output");
  cmd_solve->add_option("--param", solve_params, "override, e.g. --param beta1=10");

  // track
  auto* cmd_track = app.add_subcommand("track", "track a target through a frame directory");
  std::string frames_dir, init_text, traj_path = "traj.txt", heatmap_dir;
  std::vector<std::string> track_params;
  cmd_track->add_option("--frames", frames_dir, "directory of .ppm frames")
      ->required()
      ->check(CLI::ExistingDirectory);
  cmd_track->add_option("--init", init_text, "first-frame box \"x,y,w,h\"")->required();
  cmd_track->add_option("--out", traj_path, "trajectory output file");
  cmd_track->add_option("--heatmaps", heatmap_dir, "write per-frame 8x8 weight maps (PGM)");
  cmd_track->add_option("--param", track_params, "override, e.g. --param shrink=0.5");

  // synth-instance
  auto* cmd_synth = app.add_subcommand("synth-instance", "generate a ranking instance");
  SyntheticSpec ispec;
  std::string instance_out;
  std::vector<std::string> synth_params;
  cmd_synth->add_option("--seed", ispec.seed, "generator seed");
  cmd_synth->add_option("--n", ispec.n, "patch count");
  cmd_synth->add_option("--p", ispec.p, "feature dimension");
  cmd_synth->add_option("--clusters", ispec.clusters, "cluster count (>= 2)");
  cmd_synth->add_option("--separation", ispec.separation, "cluster mean distance");
  cmd_synth->add_option("--corruption", ispec.corruption, "corrupted column fraction");
  cmd_synth->add_option("--graph-noise", ispec.graph_noise, "noisy prior-edge fraction");
  cmd_synth->add_option("--out", instance_out, "output JSON path")->required();
  cmd_synth->add_option("--param", synth_params, "solver parameter override");

  // synth-seq
  auto* cmd_seq = app.add_subcommand("synth-seq", "generate a tracking sequence");
  SyntheticSpec sspec;
  std::string seq_dir;
  cmd_seq->add_option("--seed", sspec.seed, "generator seed");
  cmd_seq->add_option("--frames", sspec.frames, "frame count");
  cmd_seq->add_option("--motion", sspec.motion, "horizontal speed, px/frame");
  cmd_seq->add_option("--out", seq_dir, "output directory")->required();

  // eval
  auto* cmd_eval = app.add_subcommand("eval", "score a trajectory against ground truth");
  std::string pred_path, gt_path;
  cmd_eval->add_option("--pred", pred_path, "tracker trajectory file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_eval->add_option("--gt", gt_path, "ground-truth box file")
      ->required()
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_solve->parsed()) {
      RankingInstance inst = load_instance(instance_path);
      apply_params(solve_params, inst.params);
      RankingResult res = solve(inst, parse_mode(mode_name));
      if (!trace_path.empty()) write_trace_csv(res.trace, trace_path);
      if (!weights_path.empty()) write_weights_json(res, inst, weights_path);
      const auto& last = res.trace.back();
      std::printf("iterations=%d converged=%d objective=%.10g residuals=%.3g,%.3g,%.3g,%.3g\n",
                  res.iterations, res.converged ? 1 : 0, last.objective, last.r1, last.r2,
                  last.r3, last.r4);
    } else if (cmd_track->parsed()) {
      TrackParams params;
      apply_params(track_params, params);
      std::vector<Frame> frames = load_frames(frames_dir);
      Trajectory traj = track(frames, parse_box(init_text), params);
      save_trajectory(traj, traj_path);
      if (!heatmap_dir.empty()) {
        fs::create_directories(heatmap_dir);
        char name[32];
        for (std::size_t t = 0; t < traj.size(); ++t) {
          std::snprintf(name, sizeof(name), "weights_%04zu.pgm", t + 1);
          const Vector& wm = traj[t].weight_map;
          write_pgm(std::vector<double>(wm.data(), wm.data() + wm.size()), kGridCols,
                    kGridRows, (fs::path(heatmap_dir) / name).string());
        }
      }
      int lost = 0;
      for (const auto& e : traj) lost += e.lost ? 1 : 0;
      std::printf("frames=%zu lost=%d out=%s\n", traj.size(), lost, traj_path.c_str());
    } else if (cmd_synth->parsed()) {
      apply_params(synth_params, ispec.params);
      GeneratedInstance gen = gen_instance(ispec);
      save_instance(gen.instance, instance_out);
      std::printf("wrote %s (n=%d p=%d grid=%dx%d queries=%d)\n", instance_out.c_str(),
                  gen.instance.n(), gen.instance.p(), gen.grid_rows, gen.grid_cols,
                  static_cast<int>(gen.instance.y.sum()));
    } else if (cmd_seq->parsed()) {
      GeneratedSequence seq = gen_sequence(sspec);
      write_sequence(seq, seq_dir);
      std::printf("wrote %zu frames to %s\n", seq.frames.size(), seq_dir.c_str());
    } else if (cmd_eval->parsed()) {
      auto pred = load_boxes(pred_path);
      auto gt = load_boxes(gt_path);
      EvalResult res = eval_pr_sr(pred, gt);
      std::printf("PR@20=%.4f SR_AUC=%.4f\n", res.pr20, res.sr_auc);
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
