/*
 * (C) Copyright 2026 dtexnet authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/classify.hpp"
#include "core/descriptor.hpp"
#include "core/video.hpp"

namespace dtexnet {

struct ManifestEntry {
  std::string id;             // as written in the manifest (default: path)
  std::string path;           // resolved against the manifest directory
  std::string label;
};

/// Reads a JSON manifest: an array of {"path": ..., "label": ...} objects
/// (extra keys ignored, optional "id"). Relative paths resolve against the
/// manifest's directory.
std::vector<ManifestEntry> load_manifest(const std::string& path);

struct ExtractSummary {
  size_t videos_ok = 0;
  size_t videos_failed = 0;
  std::vector<std::string> errors;  // one line per failed row
  WalkStats stats;
};

/// Extracts a descriptor per manifest row and writes the feature CSV (and,
/// when layout_json_path is non-empty, the layout sidecar). Rows that fail to
/// load are skipped and reported in the summary. Output is byte-identical
/// for a fixed config at any worker count.
ExtractSummary extract_manifest_to_csv(const std::string& manifest_path,
                                       const ExtractionConfig& cfg,
                                       const std::string& csv_path,
                                       const std::string& layout_json_path);

void write_feature_csv(const std::string& path,
                       const std::vector<std::string>& ids,
                       const std::vector<std::string>& labels,
                       const std::vector<std::vector<double>>& rows);

LabeledDataset read_feature_csv(const std::string& path);

void write_layout_json(const FeatureLayout& layout, const ExtractionConfig& cfg,
                       const std::string& path);

FeatureLayout read_layout_json(const std::string& path);

/// Keeps only the columns of the requested histogram part.
LabeledDataset filter_segments(const LabeledDataset& data,
                               const FeatureLayout& layout, HistogramPart part);

struct EvalProtocol {
  std::string kind = "kfold";  // "kfold" | "holdout"
  unsigned folds = 10;
  unsigned trials = 10;
  uint64_t seed = 1;
  Distance metric = Distance::euclidean;
};

EvalReport run_eval(const LabeledDataset& data, const EvalProtocol& protocol);

void write_report_json(const EvalReport& report, const EvalProtocol& protocol,
                       const std::string& path);

void write_confusion_csv(const EvalReport& report, const std::string& path);

struct InspectResult {
  WalkStats stats;
  uint64_t max_visits = 0;
};

/// Renders per-frame activity heat-maps (PGM, min-max scaled over the whole
/// volume) plus the joint distribution as CSV into out_dir for one
/// (r2, tau) network.
InspectResult inspect_video(const Video& v, const ExtractionConfig& cfg,
                            int r2, int tau, const std::string& out_dir);

/// Shortest decimal form that round-trips a double (17 significant digits).
std::string format_double(double value);

}  // namespace dtexnet
