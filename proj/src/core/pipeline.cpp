/*
 * (C) Copyright 2026 dtexnet authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "core/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "core/errors.hpp"
#include "core/rng.hpp"
#include "core/video_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace dtexnet {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::vector<ManifestEntry> load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open manifest: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw io_error("malformed manifest " + path + ": " + e.what());
  }
  if (!doc.is_array()) throw io_error("manifest must be a JSON array: " + path);

  const fs::path base = fs::path(path).parent_path();
  std::vector<ManifestEntry> entries;
  entries.reserve(doc.size());
  for (const auto& item : doc) {
    if (!item.is_object() || !item.contains("path") || !item.contains("label")) {
      throw io_error("manifest entries need \"path\" and \"label\": " + path);
    }
    ManifestEntry e;
    const std::string rel = item.at("path").get<std::string>();
    e.label = item.at("label").get<std::string>();
    e.id = item.contains("id") ? item.at("id").get<std::string>() : rel;
    const fs::path p(rel);
    e.path = p.is_absolute() ? p.string() : (base / p).string();
    entries.push_back(std::move(e));
  }
  return entries;
}

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

}  // namespace

void write_feature_csv(const std::string& path,
                       const std::vector<std::string>& ids,
                       const std::vector<std::string>& labels,
                       const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw io_error("cannot write feature CSV: " + path);
  const size_t dim = rows.empty() ? 0 : rows[0].size();
  out << "id,label";
  for (size_t i = 0; i < dim; ++i) out << ",f" << i;
  out << "\n";
  for (size_t r = 0; r < rows.size(); ++r) {
    out << csv_quote(ids[r]) << "," << csv_quote(labels[r]);
    for (const double v : rows[r]) out << "," << format_double(v);
    out << "\n";
  }
  if (!out) throw io_error("write failed: " + path);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

double parse_double(const std::string& s, const std::string& path) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = begin + s.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw io_error("malformed numeric field in " + path + ": '" + s + "'");
  }
  return v;
}

}  // namespace

LabeledDataset read_feature_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open feature CSV: " + path);
  std::string line;
  if (!std::getline(in, line)) throw io_error("empty feature CSV: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "id" || header[1] != "label") {
    throw io_error("feature CSV must start with id,label columns: " + path);
  }
  const size_t dim = header.size() - 2;

  LabeledDataset data;
  size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw io_error("row " + std::to_string(row) + " of " + path + " has " +
                     std::to_string(fields.size()) + " fields, expected " +
                     std::to_string(header.size()));
    }
    std::vector<double> values(dim);
    for (size_t i = 0; i < dim; ++i) values[i] = parse_double(fields[i + 2], path);
    data.add(fields[0], fields[1], std::move(values));
  }
  return data;
}

void write_layout_json(const FeatureLayout& layout, const ExtractionConfig& cfg,
                       const std::string& path) {
  json doc;
  doc["dimension"] = layout.dimension;
  doc["radii"] = cfg.radii;
  doc["tau0"] = cfg.thresholds.tau0;
  doc["taui"] = cfg.thresholds.taui;
  doc["nf"] = cfg.thresholds.nf;
  doc["walks"] = cfg.walk.walks;
  doc["max_steps"] = cfg.walk.max_steps;
  doc["seed"] = cfg.walk.seed;
  json segments = json::array();
  for (const LayoutSegment& s : layout.segments) {
    segments.push_back({{"r2", s.r2},
                        {"tau", s.tau},
                        {"part", part_name(s.part)},
                        {"bins", s.bins},
                        {"offset", s.offset}});
  }
  doc["segments"] = segments;
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw io_error("cannot write layout JSON: " + path);
  out << doc.dump(2) << "\n";
}

FeatureLayout read_layout_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open layout JSON: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw io_error("malformed layout JSON " + path + ": " + e.what());
  }
  FeatureLayout layout;
  try {
    layout.dimension = doc.at("dimension").get<size_t>();
    for (const auto& s : doc.at("segments")) {
      LayoutSegment seg;
      seg.r2 = s.at("r2").get<int>();
      seg.tau = s.at("tau").get<int>();
      seg.part = s.at("part").get<std::string>() == "temporal"
                     ? HistogramPart::temporal
                     : HistogramPart::spatial;
      seg.bins = s.at("bins").get<size_t>();
      seg.offset = s.at("offset").get<size_t>();
      layout.segments.push_back(seg);
    }
  } catch (const json::exception& e) {
    throw io_error("malformed layout JSON " + path + ": " + e.what());
  }
  return layout;
}

LabeledDataset filter_segments(const LabeledDataset& data,
                               const FeatureLayout& layout,
                               HistogramPart part) {
  if (data.dimension() != layout.dimension) {
    throw config_error("layout dimension does not match the feature CSV");
  }
  std::vector<size_t> keep;
  for (const LayoutSegment& s : layout.segments) {
    if (s.part != part) continue;
    for (size_t b = 0; b < s.bins; ++b) keep.push_back(s.offset + b);
  }
  LabeledDataset out;
  for (size_t i = 0; i < data.size(); ++i) {
    std::vector<double> values(keep.size());
    for (size_t k = 0; k < keep.size(); ++k) {
      values[k] = data.features[i][keep[k]];
    }
    out.add(data.ids[i], data.class_names[data.labels[i]], std::move(values));
  }
  return out;
}

ExtractSummary extract_manifest_to_csv(const std::string& manifest_path,
                                       const ExtractionConfig& cfg,
                                       const std::string& csv_path,
                                       const std::string& layout_json_path) {
  cfg.validate();
  const std::vector<ManifestEntry> entries = load_manifest(manifest_path);
  const FeatureLayout layout = feature_layout(cfg.radii, cfg.thresholds);

  ExtractSummary summary;
  const size_t n = entries.size();
  std::vector<std::vector<double>> rows(n);
  std::vector<std::string> row_errors(n);
  std::vector<WalkStats> row_stats(n);

  // One worker per video; per-video extraction stays single-threaded so the
  // result cannot depend on how videos are interleaved.
  unsigned workers = std::max(1u, cfg.workers);
  workers = unsigned(std::min<size_t>(workers, std::max<size_t>(n, 1)));
  std::atomic<size_t> cursor{0};

  ExtractionConfig video_cfg = cfg;
  video_cfg.workers = 1;

  auto run = [&]() {
    for (;;) {
      const size_t i = cursor.fetch_add(1);
      if (i >= n) break;
      try {
        const Video video = load_video(entries[i].path);
        DescriptorResult r = extract_descriptor(video, video_cfg);
        rows[i] = std::move(r.values);
        row_stats[i] = r.stats;
      } catch (const std::exception& e) {
        row_errors[i] = entries[i].id + ": " + e.what();
      }
    }
  };
  if (workers == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(run);
    for (auto& th : pool) th.join();
  }

  std::vector<std::string> ids, labels;
  std::vector<std::vector<double>> ok_rows;
  for (size_t i = 0; i < n; ++i) {
    if (!row_errors[i].empty()) {
      summary.videos_failed++;
      summary.errors.push_back(row_errors[i]);
      continue;
    }
    summary.videos_ok++;
    summary.stats.merge(row_stats[i]);
    ids.push_back(entries[i].id);
    labels.push_back(entries[i].label);
    ok_rows.push_back(std::move(rows[i]));
  }

  write_feature_csv(csv_path, ids, labels, ok_rows);
  if (!layout_json_path.empty()) {
    write_layout_json(layout, cfg, layout_json_path);
  }
  return summary;
}

EvalReport run_eval(const LabeledDataset& data, const EvalProtocol& protocol) {
  if (protocol.kind == "kfold") {
    return kfold_cv(data, protocol.folds, protocol.trials, protocol.seed,
                    protocol.metric);
  }
  if (protocol.kind == "holdout") {
    return holdout_trials(data, protocol.trials, protocol.seed,
                          protocol.metric);
  }
  throw config_error("unknown protocol: " + protocol.kind);
}

void write_report_json(const EvalReport& report, const EvalProtocol& protocol,
                       const std::string& path) {
  json doc;
  doc["protocol"] = protocol.kind;
  if (protocol.kind == "kfold") doc["folds"] = protocol.folds;
  doc["trials"] = report.trials;
  doc["seed"] = protocol.seed;
  doc["metric"] =
      protocol.metric == Distance::euclidean ? "euclidean" : "manhattan";
  doc["ccr_mean"] = report.ccr_mean;
  doc["ccr_std"] = report.ccr_std;
  doc["trial_ccrs"] = report.trial_ccrs;
  doc["classes"] = report.class_names;
  const size_t k = report.class_names.size();
  json counts = json::array();
  json pct = json::array();
  for (size_t r = 0; r < k; ++r) {
    json crow = json::array();
    json prow = json::array();
    for (size_t c = 0; c < k; ++c) {
      crow.push_back(report.confusion_counts[r * k + c]);
      prow.push_back(report.confusion_pct[r * k + c]);
    }
    counts.push_back(crow);
    pct.push_back(prow);
  }
  doc["confusion_counts"] = counts;
  doc["confusion_pct"] = pct;
  doc["warnings"] = report.warnings;
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw io_error("cannot write report JSON: " + path);
  out << doc.dump(2) << "\n";
}

void write_confusion_csv(const EvalReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw io_error("cannot write confusion CSV: " + path);
  const size_t k = report.class_names.size();
  out << "actual";
  for (const std::string& name : report.class_names) {
    out << "," << csv_quote(name);
  }
  out << "\n";
  for (size_t r = 0; r < k; ++r) {
    out << csv_quote(report.class_names[r]);
    for (size_t c = 0; c < k; ++c) {
      out << "," << format_double(report.confusion_pct[r * k + c]);
    }
    out << "\n";
  }
}

InspectResult inspect_video(const Video& v, const ExtractionConfig& cfg,
                            int r2, int tau, const std::string& out_dir) {
  if (r2 < 1) throw config_error("squared radius must be >= 1");
  if (tau < 1) throw config_error("threshold must be >= 1");
  cfg.walk.validate();

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw io_error("cannot create output directory: " + out_dir);

  const OffsetTable table = neighborhood_offsets(r2);
  WalkConfig net = cfg.walk;
  net.seed = derive_seed(derive_seed(cfg.walk.seed, uint64_t(r2)), uint64_t(tau));
  InspectResult result;
  const ActivityField activity =
      estimate_activity(v, table, tau, net, &result.stats, cfg.workers);
  const DegreeField degrees = in_degree_field(v, table, tau);
  const JointDistribution joint =
      joint_distribution(activity, degrees, table, net.walks);

  uint64_t lo = UINT64_MAX, hi = 0;
  for (const uint64_t a : activity.visits) {
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  result.max_visits = hi;
  const double scale = hi > lo ? 255.0 / double(hi - lo) : 0.0;

  const size_t frame_px = size_t(v.width()) * v.height();
  std::vector<uint8_t> frame(frame_px);
  for (uint32_t t = 0; t < v.frames(); ++t) {
    for (size_t i = 0; i < frame_px; ++i) {
      const uint64_t a = activity.visits[size_t(t) * frame_px + i];
      frame[i] = uint8_t(std::lround(double(a - lo) * scale));
    }
    char name[32];
    std::snprintf(name, sizeof(name), "activity_%04u.pgm", t);
    save_pgm(frame.data(), v.width(), v.height(),
             (fs::path(out_dir) / name).string());
  }

  std::ofstream out(fs::path(out_dir) / "joint.csv", std::ios::trunc);
  if (!out) throw io_error("cannot write joint distribution CSV");
  for (size_t s = 0; s < joint.s_bins; ++s) {
    for (size_t t = 0; t < joint.t_bins; ++t) {
      if (t) out << ",";
      out << format_double(joint.at(s, t));
    }
    out << "\n";
  }
  return result;
}

}  // namespace dtexnet
