/*
 * (C) Copyright 2026 dtexnet authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

// Command-line front end. All functionality goes through the dtexnet C API;
// this file only parses arguments and formats output.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dtexnet/dtexnet.h"

namespace {

int status_to_exit(dtx_status status) {
  switch (status) {
    case DTX_OK: return 0;
    case DTX_ERR_CONFIG: return 2;
    default: return 1;
  }
}

int fail(dtx_status status) {
  std::fprintf(stderr, "error: %s\n", dtx_last_error());
  return status_to_exit(status);
}

struct ParamFlags {
  std::string preset;
  std::string radii;
  uint32_t tau0 = 0, taui = 0, nf = 0;
  uint32_t walks = 0, max_len = 0, workers = 0;
  uint64_t seed = 0;
  bool has_tau0 = false, has_taui = false, has_nf = false;
  bool has_walks = false, has_max_len = false, has_seed = false;
  bool has_workers = false;
};

void add_param_flags(CLI::App* cmd, ParamFlags& flags) {
  cmd->add_option("--preset", flags.preset,
                  "parameter preset: dyntexpp, ucla or traffic");
  cmd->add_option("--radii", flags.radii,
                  "comma-separated squared radii, e.g. 1,2,3");
  cmd->add_option("--tau0", flags.tau0, "first threshold (1..255)")
      ->each([&](const std::string&) { flags.has_tau0 = true; });
  cmd->add_option("--taui", flags.taui, "threshold increment")
      ->each([&](const std::string&) { flags.has_taui = true; });
  cmd->add_option("--nf", flags.nf, "number of threshold increments")
      ->each([&](const std::string&) { flags.has_nf = true; });
  cmd->add_option("--walks", flags.walks, "random walks per vertex")
      ->each([&](const std::string&) { flags.has_walks = true; });
  cmd->add_option("--max-len", flags.max_len, "step cap per walk")
      ->each([&](const std::string&) { flags.has_max_len = true; });
  cmd->add_option("--seed", flags.seed, "master seed")
      ->each([&](const std::string&) { flags.has_seed = true; });
  cmd->add_option("--workers", flags.workers, "worker threads")
      ->each([&](const std::string&) { flags.has_workers = true; });
}

// Builds dtx_params from the preset (if any) overlaid with explicit flags.
bool resolve_params(const ParamFlags& flags, dtx_params* params,
                    dtx_status* status) {
  dtx_params_init(params);
  if (!flags.preset.empty()) {
    const dtx_status s = dtx_params_preset(flags.preset.c_str(), params);
    if (s != DTX_OK) {
      *status = s;
      return false;
    }
  }
  if (!flags.radii.empty()) {
    params->radius_count = 0;
    std::string tok;
    for (size_t i = 0; i <= flags.radii.size(); ++i) {
      if (i == flags.radii.size() || flags.radii[i] == ',') {
        if (tok.empty() || params->radius_count >= DTX_MAX_RADII) {
          std::fprintf(stderr, "error: bad --radii list\n");
          *status = DTX_ERR_CONFIG;
          return false;
        }
        params->radii[params->radius_count++] = uint32_t(std::stoul(tok));
        tok.clear();
      } else {
        tok += flags.radii[i];
      }
    }
  }
  if (flags.has_tau0) params->tau0 = flags.tau0;
  if (flags.has_taui) params->taui = flags.taui;
  if (flags.has_nf) params->nf = flags.nf;
  if (flags.has_walks) params->walks = flags.walks;
  if (flags.has_max_len) params->max_steps = flags.max_len;
  if (flags.has_seed) params->seed = flags.seed;
  if (flags.has_workers) params->workers = flags.workers;
  return true;
}

std::string layout_path_for(const std::string& csv_path) {
  const size_t dot = csv_path.find_last_of('.');
  const size_t slash = csv_path.find_last_of("/\\");
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return csv_path + ".layout.json";
  }
  return csv_path.substr(0, dot) + ".layout.json";
}

void print_report(const std::string& report_path) {
  std::ifstream in(report_path);
  if (!in) return;
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (...) {
    return;
  }
  std::printf("CCR: %.2f (± %.2f)\n", doc["ccr_mean"].get<double>(),
              doc["ccr_std"].get<double>());
  const auto classes = doc["classes"].get<std::vector<std::string>>();
  const auto pct = doc["confusion_pct"];
  std::printf("\nconfusion matrix (row-normalized %%):\n%12s", "");
  for (const auto& c : classes) std::printf(" %10.10s", c.c_str());
  std::printf("\n");
  for (size_t r = 0; r < classes.size(); ++r) {
    std::printf("%12.12s", classes[r].c_str());
    for (size_t c = 0; c < classes.size(); ++c) {
      std::printf(" %10.2f", pct[r][c].get<double>());
    }
    std::printf("\n");
  }
  for (const auto& w : doc["warnings"]) {
    std::fprintf(stderr, "warning: %s\n", w.get<std::string>().c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dtexnet: dynamic-texture descriptors from diffusion on "
               "directed pixel networks"};
  app.require_subcommand(1);

  // ---- extract ----
  auto* extract = app.add_subcommand(
      "extract", "extract descriptors for every video in a manifest");
  ParamFlags xflags;
  std::string x_manifest, x_out;
  add_param_flags(extract, xflags);
  extract->add_option("--manifest", x_manifest, "JSON manifest of videos")
      ->required();
  extract->add_option("--out", x_out, "output feature CSV path")->required();

  // ---- eval ----
  auto* eval = app.add_subcommand(
      "eval", "1-NN evaluation of a feature CSV (k-fold or holdout)");
  std::string e_features, e_protocol = "kfold", e_out, e_metric = "euclidean";
  std::string e_segments = "all", e_layout, e_confusion;
  uint32_t e_folds = 10, e_trials = 0;
  uint64_t e_seed = 1;
  eval->add_option("--features", e_features, "feature CSV path")->required();
  eval->add_option("--protocol", e_protocol, "kfold or holdout");
  eval->add_option("--folds", e_folds, "folds for kfold");
  eval->add_option("--trials", e_trials,
                   "trials (default: 10 for kfold, 20 for holdout)");
  eval->add_option("--seed", e_seed, "evaluation seed");
  eval->add_option("--metric", e_metric, "euclidean or manhattan");
  eval->add_option("--segments", e_segments,
                   "use all, spatial or temporal feature segments");
  eval->add_option("--layout", e_layout,
                   "layout JSON (required for --segments != all)");
  eval->add_option("--out", e_out, "report JSON path");
  eval->add_option("--confusion-csv", e_confusion, "confusion matrix CSV path");

  // ---- inspect ----
  auto* inspect = app.add_subcommand(
      "inspect", "activity heat-maps and joint distribution for one network");
  ParamFlags iflags;
  std::string i_video, i_out;
  uint32_t i_r2 = 1, i_tau = 0;
  add_param_flags(inspect, iflags);
  inspect->add_option("--video", i_video, "video path (raw_gray3d or frame dir)")
      ->required();
  inspect->add_option("--r2", i_r2, "squared radius of the network")->required();
  inspect->add_option("--tau", i_tau, "threshold of the network")->required();
  inspect->add_option("--out", i_out, "output directory")->required();

  // ---- synth ----
  auto* synth = app.add_subcommand(
      "synth", "generate the synthetic motion corpus and its manifest");
  std::string s_out;
  uint32_t s_per_class = 30, s_width = 220, s_height = 180, s_frames = 60;
  uint32_t s_patch = 0;
  uint64_t s_seed = 1;
  synth->add_option("--out", s_out, "output directory")->required();
  synth->add_option("--per-class", s_per_class, "videos per motion class");
  synth->add_option("--width", s_width, "frame width");
  synth->add_option("--height", s_height, "frame height");
  synth->add_option("--frames", s_frames, "frame count");
  synth->add_option("--patch-size", s_patch, "patch size (0 = automatic)");
  synth->add_option("--seed", s_seed, "corpus seed");

  CLI11_PARSE(app, argc, argv);

  if (extract->parsed()) {
    dtx_params params;
    dtx_status status = DTX_OK;
    if (!resolve_params(xflags, &params, &status)) return status_to_exit(status);
    dtx_extract_summary summary{};
    const std::string layout = layout_path_for(x_out);
    status = dtx_extract_manifest(x_manifest.c_str(), &params, x_out.c_str(),
                                  layout.c_str(), &summary);
    std::fprintf(stderr,
                 "extracted %" PRIu64 " video(s), %" PRIu64
                 " failed; mean walk length %.3f (max %u)\n",
                 summary.videos_ok, summary.videos_failed,
                 summary.mean_walk_length, summary.max_walk_length);
    if (status != DTX_OK) return fail(status);
    if (summary.videos_ok == 0) {
      std::fprintf(stderr, "warning: manifest contained no videos\n");
    }
    std::printf("features: %s\nlayout:   %s\n", x_out.c_str(), layout.c_str());
    return 0;
  }

  if (eval->parsed()) {
    if (e_trials == 0) e_trials = (e_protocol == "holdout") ? 20 : 10;
    dtx_eval_summary summary{};
    const dtx_status status = dtx_eval_csv(
        e_features.c_str(), e_protocol.c_str(), e_folds, e_trials, e_seed,
        e_metric.c_str(), e_segments.c_str(),
        e_layout.empty() ? nullptr : e_layout.c_str(),
        e_out.empty() ? nullptr : e_out.c_str(),
        e_confusion.empty() ? nullptr : e_confusion.c_str(), &summary);
    if (status != DTX_OK) return fail(status);
    if (!e_out.empty()) {
      print_report(e_out);
    } else {
      std::printf("CCR: %.2f (± %.2f)\n", summary.ccr_mean,
                  summary.ccr_std);
    }
    return 0;
  }

  if (inspect->parsed()) {
    dtx_params params;
    dtx_status status = DTX_OK;
    if (!resolve_params(iflags, &params, &status)) return status_to_exit(status);
    dtx_walk_stats stats{};
    status = dtx_inspect(i_video.c_str(), &params, i_r2, i_tau, i_out.c_str(),
                         &stats);
    if (status != DTX_OK) return fail(status);
    std::printf("walks: %" PRIu64 "  steps: %" PRIu64
                "  mean length: %.3f  max length: %u\n",
                stats.total_walks, stats.total_steps, stats.mean_length,
                stats.max_length);
    return 0;
  }

  if (synth->parsed()) {
    const dtx_status status = dtx_synth_corpus(
        s_out.c_str(), s_per_class, s_width, s_height, s_frames, s_patch,
        s_seed);
    if (status != DTX_OK) return fail(status);
    std::printf("corpus: %s (4 classes x %u videos)\nmanifest: %s/manifest.json\n",
                s_out.c_str(), s_per_class, s_out.c_str());
    return 0;
  }

  return 0;
}
