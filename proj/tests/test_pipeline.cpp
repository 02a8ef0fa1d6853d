/*
 * (C) Copyright 2026 dtexnet authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <fstream>

#include "doctest.h"
#include "json.hpp"

#include "core/errors.hpp"
#include "core/pipeline.hpp"
#include "core/synthetic.hpp"
#include "core/video_io.hpp"
#include "test_util.hpp"

using namespace dtexnet;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(bool(in));
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

ExtractionConfig tiny_config() {
  ExtractionConfig cfg;
  cfg.radii = {1, 2};
  cfg.thresholds = {16, 120, 1};
  cfg.walk = {10, 50, 42};
  return cfg;
}

fs::path make_tiny_corpus(const std::string& name, uint32_t per_class = 1) {
  const fs::path dir = testutil::scratch_dir(name);
  CorpusParams params;
  params.out_dir = dir.string();
  params.per_class = per_class;
  params.width = 24;
  params.height = 20;
  params.frames = 5;
  params.seed = 77;
  gen_corpus(params);
  return dir;
}

}  // namespace

TEST_CASE("manifest loading resolves relative paths and validates shape") {
  const fs::path dir = testutil::scratch_dir("manifest");
  {
    std::ofstream out(dir / "m.json");
    out << R"([{"path": "vids/a.dt3d", "label": "x"},
               {"path": "/abs/b.dt3d", "label": "y", "id": "custom"}])";
  }
  const auto entries = load_manifest((dir / "m.json").string());
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].path == (dir / "vids/a.dt3d").string());
  CHECK(entries[0].id == "vids/a.dt3d");
  CHECK(entries[1].path == "/abs/b.dt3d");
  CHECK(entries[1].id == "custom");

  {
    std::ofstream out(dir / "bad.json");
    out << R"([{"label": "missing path"}])";
  }
  CHECK_THROWS_AS(load_manifest((dir / "bad.json").string()), io_error);
  {
    std::ofstream out(dir / "notjson.json");
    out << "not json at all {";
  }
  CHECK_THROWS_AS(load_manifest((dir / "notjson.json").string()), io_error);
  CHECK_THROWS_AS(load_manifest((dir / "absent.json").string()), io_error);
}

TEST_CASE("feature CSV round trip preserves values exactly") {
  const fs::path dir = testutil::scratch_dir("csv");
  const std::string path = (dir / "f.csv").string();
  const std::vector<std::string> ids{"v0", "a,b \"quoted\""};
  const std::vector<std::string> labels{"l0", "l,1"};
  const std::vector<std::vector<double>> rows{
      {0.1234567890123456789, 1e-300, 0.0},
      {3.0, -2.5e17, 1.0 / 3.0},
  };
  write_feature_csv(path, ids, labels, rows);
  const LabeledDataset data = read_feature_csv(path);
  REQUIRE(data.size() == 2);
  CHECK(data.ids[1] == "a,b \"quoted\"");
  CHECK(data.class_names[data.labels[1]] == "l,1");
  for (size_t r = 0; r < 2; ++r) {
    for (size_t c = 0; c < 3; ++c) {
      CHECK(data.features[r][c] == rows[r][c]);  // bit-exact round trip
    }
  }
}

TEST_CASE("malformed feature CSVs are rejected") {
  const fs::path dir = testutil::scratch_dir("csv_bad");
  {
    std::ofstream out(dir / "head.csv");
    out << "wrong,header\n1,2\n";
  }
  CHECK_THROWS_AS(read_feature_csv((dir / "head.csv").string()), io_error);
  {
    std::ofstream out(dir / "width.csv");
    out << "id,label,f0\nv,l,1.0,2.0\n";
  }
  CHECK_THROWS_AS(read_feature_csv((dir / "width.csv").string()), io_error);
  {
    std::ofstream out(dir / "num.csv");
    out << "id,label,f0\nv,l,abc\n";
  }
  CHECK_THROWS_AS(read_feature_csv((dir / "num.csv").string()), io_error);
}

TEST_CASE("layout JSON round trip") {
  const fs::path dir = testutil::scratch_dir("layout");
  const ExtractionConfig cfg = tiny_config();
  const FeatureLayout layout = feature_layout(cfg.radii, cfg.thresholds);
  const std::string path = (dir / "layout.json").string();
  write_layout_json(layout, cfg, path);
  const FeatureLayout back = read_layout_json(path);
  CHECK(back.dimension == layout.dimension);
  REQUIRE(back.segments.size() == layout.segments.size());
  for (size_t i = 0; i < layout.segments.size(); ++i) {
    CHECK(back.segments[i].r2 == layout.segments[i].r2);
    CHECK(back.segments[i].tau == layout.segments[i].tau);
    CHECK(back.segments[i].part == layout.segments[i].part);
    CHECK(back.segments[i].bins == layout.segments[i].bins);
    CHECK(back.segments[i].offset == layout.segments[i].offset);
  }
}

TEST_CASE("segment filtering keeps the requested part") {
  const FeatureLayout ucla = feature_layout({1, 2, 3}, {8, 96, 2});
  LabeledDataset data;
  std::vector<double> row(ucla.dimension);
  for (size_t i = 0; i < row.size(); ++i) row[i] = double(i);
  data.add("v", "c", row);

  const LabeledDataset temporal =
      filter_segments(data, ucla, HistogramPart::temporal);
  CHECK(temporal.dimension() == 99);  // 3 taus x (3 + 11 + 19)
  const LabeledDataset spatial =
      filter_segments(data, ucla, HistogramPart::spatial);
  CHECK(spatial.dimension() == 69);  // 3 taus x (5 + 9 + 9)
  CHECK(temporal.dimension() + spatial.dimension() == ucla.dimension);

  // Values come from the right columns.
  size_t k = 0;
  for (const LayoutSegment& s : ucla.segments) {
    if (s.part != HistogramPart::temporal) continue;
    for (size_t b = 0; b < s.bins; ++b, ++k) {
      CHECK(temporal.features[0][k] == double(s.offset + b));
    }
  }
}

TEST_CASE("manifest extraction writes CSV and layout, any worker count") {
  const fs::path dir = make_tiny_corpus("extract_ok");
  const ExtractionConfig cfg = tiny_config();

  const std::string manifest = (dir / "manifest.json").string();
  const std::string csv1 = (dir / "f1.csv").string();
  const std::string csv3 = (dir / "f3.csv").string();

  ExtractionConfig cfg1 = cfg;
  cfg1.workers = 1;
  const ExtractSummary s1 =
      extract_manifest_to_csv(manifest, cfg1, csv1, (dir / "l.json").string());
  CHECK(s1.videos_ok == 4);
  CHECK(s1.videos_failed == 0);
  CHECK(s1.stats.total_walks > 0);

  ExtractionConfig cfg3 = cfg;
  cfg3.workers = 3;
  extract_manifest_to_csv(manifest, cfg3, csv3, "");
  CHECK(slurp(csv1) == slurp(csv3));

  const LabeledDataset data = read_feature_csv(csv1);
  CHECK(data.size() == 4);
  CHECK(data.dimension() == feature_dimension(cfg.radii, cfg.thresholds));
  CHECK(data.class_count() == 4);

  const FeatureLayout layout = read_layout_json((dir / "l.json").string());
  CHECK(layout.dimension == data.dimension());
}

TEST_CASE("failed rows are skipped and reported") {
  const fs::path dir = make_tiny_corpus("extract_fail");
  // Append a bogus entry to the manifest.
  nlohmann::json doc;
  {
    std::ifstream in(dir / "manifest.json");
    in >> doc;
  }
  doc.push_back({{"path", "videos/missing.dt3d"}, {"label", "none"}});
  {
    std::ofstream out(dir / "manifest.json");
    out << doc.dump(2);
  }
  const std::string csv = (dir / "f.csv").string();
  const ExtractSummary s =
      extract_manifest_to_csv((dir / "manifest.json").string(), tiny_config(),
                              csv, "");
  CHECK(s.videos_ok == 4);
  CHECK(s.videos_failed == 1);
  REQUIRE(s.errors.size() == 1);
  CHECK(s.errors[0].find("missing.dt3d") != std::string::npos);
  CHECK(read_feature_csv(csv).size() == 4);
}

TEST_CASE("empty manifests produce an empty CSV without error") {
  const fs::path dir = testutil::scratch_dir("extract_empty");
  {
    std::ofstream out(dir / "m.json");
    out << "[]";
  }
  const std::string csv = (dir / "f.csv").string();
  const ExtractSummary s =
      extract_manifest_to_csv((dir / "m.json").string(), tiny_config(), csv, "");
  CHECK(s.videos_ok == 0);
  CHECK(s.videos_failed == 0);
  CHECK(slurp(csv) == "id,label\n");
}

TEST_CASE("eval protocols run end to end and serialize reports") {
  const fs::path dir = testutil::scratch_dir("evalio");
  LabeledDataset data;
  SplitMix64 rng(4);
  for (int i = 0; i < 12; ++i) {
    data.add("a" + std::to_string(i), "A", {rng.next_unit(), 0.0});
    data.add("b" + std::to_string(i), "B", {8.0 + rng.next_unit(), 0.0});
  }
  EvalProtocol proto;
  proto.kind = "kfold";
  proto.folds = 4;
  proto.trials = 3;
  proto.seed = 2;
  const EvalReport report = run_eval(data, proto);
  CHECK(report.ccr_mean == 100.0);

  const std::string rpath = (dir / "report.json").string();
  write_report_json(report, proto, rpath);
  nlohmann::json doc;
  {
    std::ifstream in(rpath);
    in >> doc;
  }
  CHECK(doc["protocol"] == "kfold");
  CHECK(doc["folds"] == 4);
  CHECK(doc["trials"] == 3);
  CHECK(doc["ccr_mean"] == 100.0);
  CHECK(doc["trial_ccrs"].size() == 3);
  CHECK(doc["classes"].size() == 2);
  CHECK(doc["confusion_pct"].size() == 2);

  write_confusion_csv(report, (dir / "conf.csv").string());
  const std::string conf = slurp(dir / "conf.csv");
  CHECK(conf.find("actual,A,B") == 0);

  EvalProtocol bad;
  bad.kind = "bootstrap";
  CHECK_THROWS_AS(run_eval(data, bad), config_error);
}

TEST_CASE("inspect renders heat-maps and the joint CSV") {
  const fs::path dir = testutil::scratch_dir("inspect");
  ExtractionConfig cfg;
  cfg.radii = {1};
  cfg.thresholds = {255, 1, 0};
  cfg.walk = {50, 1000, 1};

  const Video chain(2, 1, 1, {200, 150});
  const InspectResult r =
      inspect_video(chain, cfg, 1, 255, (dir / "chain").string());
  CHECK(r.stats.total_walks == 100);
  const Video heat = load_video((dir / "chain").string(),
                                VideoFormat::frame_dir);
  CHECK(heat.width() == 2);
  CHECK(heat.frames() == 1);
  CHECK(heat.at(0, 0, 0) == 0);
  CHECK(heat.at(1, 0, 0) == 255);
  const std::string joint = slurp(dir / "chain" / "joint.csv");
  CHECK(joint.find("0.5") != std::string::npos);

  const Video constant = Video::filled(4, 3, 2, 9);
  inspect_video(constant, cfg, 1, 255, (dir / "const").string());
  const Video black = load_video((dir / "const").string());
  for (const uint8_t p : black.samples()) CHECK(p == 0);

  CHECK_THROWS_AS(inspect_video(chain, cfg, 0, 255, (dir / "x").string()),
                  config_error);
  CHECK_THROWS_AS(inspect_video(chain, cfg, 1, 0, (dir / "x").string()),
                  config_error);
}

TEST_CASE("format_double round-trips doubles") {
  for (const double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}
