/*
 * (C) Copyright 2026 dtexnet authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "dtexnet/dtexnet.h"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::current_path() / "test_scratch" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("version and presets") {
  CHECK(std::string(dtx_version()) == "0.1.0");

  dtx_params p;
  dtx_params_preset("dyntexpp", &p);
  CHECK(p.radius_count == 2);
  CHECK(p.tau0 == 2);
  CHECK(p.taui == 48);
  CHECK(p.nf == 4);

  dtx_params_preset("ucla", &p);
  CHECK(p.radius_count == 3);
  CHECK(p.tau0 == 8);
  CHECK(p.taui == 96);
  CHECK(p.nf == 2);
  CHECK(p.walks == 50);
  CHECK(p.max_steps == 1000);

  dtx_params_preset("traffic", &p);
  CHECK(p.radius_count == 5);
  CHECK(p.tau0 == 4);
  CHECK(p.taui == 110);
  CHECK(p.nf == 1);

  CHECK(dtx_params_preset("bogus", &p) == DTX_ERR_CONFIG);
  CHECK(std::string(dtx_last_error()).find("bogus") != std::string::npos);
}

TEST_CASE("feature dimensions through the C API") {
  dtx_params p;
  uint64_t dim = 0;
  dtx_params_preset("dyntexpp", &p);
  REQUIRE(dtx_feature_dimension(&p, &dim) == DTX_OK);
  CHECK(dim == 140);
  dtx_params_preset("ucla", &p);
  dtx_feature_dimension(&p, &dim);
  CHECK(dim == 168);
  dtx_params_preset("traffic", &p);
  dtx_feature_dimension(&p, &dim);
  CHECK(dim == 296);

  p.radius_count = 0;
  CHECK(dtx_feature_dimension(&p, &dim) == DTX_ERR_CONFIG);
}

TEST_CASE("video handles: create, save, load, rotate") {
  const fs::path dir = scratch("capi_video");
  std::vector<uint8_t> data{10, 20, 30, 40, 50, 60};
  dtx_video* v = nullptr;
  REQUIRE(dtx_video_create(3, 2, 1, data.data(), &v) == DTX_OK);
  CHECK(dtx_video_width(v) == 3);
  CHECK(dtx_video_height(v) == 2);
  CHECK(dtx_video_frames(v) == 1);
  CHECK(std::memcmp(dtx_video_data(v), data.data(), data.size()) == 0);

  const std::string path = (dir / "v.dt3d").string();
  REQUIRE(dtx_video_save(v, path.c_str()) == DTX_OK);
  dtx_video* u = nullptr;
  REQUIRE(dtx_video_load(path.c_str(), DTX_FORMAT_AUTO, &u) == DTX_OK);
  CHECK(dtx_video_width(u) == 3);
  CHECK(std::memcmp(dtx_video_data(u), data.data(), data.size()) == 0);

  dtx_video* r = nullptr;
  REQUIRE(dtx_video_rotate90(v, 2, &r) == DTX_OK);
  CHECK(dtx_video_width(r) == 3);
  const uint8_t* rd = dtx_video_data(r);
  CHECK(rd[0] == 60);
  CHECK(rd[5] == 10);

  dtx_video_free(v);
  dtx_video_free(u);
  dtx_video_free(r);

  dtx_video* missing = nullptr;
  CHECK(dtx_video_load((dir / "no.dt3d").string().c_str(), DTX_FORMAT_AUTO,
                       &missing) == DTX_ERR_INPUT);
  CHECK(dtx_video_create(3, 2, 1, nullptr, &missing) == DTX_ERR_CONFIG);
}

TEST_CASE("single-video extraction exposes values, layout and stats") {
  // Deterministic pseudo-random volume via the chain rule on bytes.
  std::vector<uint8_t> data(8 * 7 * 4);
  uint32_t state = 0x1234567;
  for (auto& b : data) {
    state = state * 1664525u + 1013904223u;
    b = uint8_t(state >> 24);
  }
  dtx_video* v = nullptr;
  REQUIRE(dtx_video_create(8, 7, 4, data.data(), &v) == DTX_OK);

  dtx_params p;
  dtx_params_init(&p);
  p.radii[0] = 1;
  p.radii[1] = 2;
  p.radius_count = 2;
  p.tau0 = 16;
  p.taui = 120;
  p.nf = 1;
  p.walks = 10;
  p.max_steps = 100;
  p.seed = 3;

  dtx_features* f = nullptr;
  REQUIRE(dtx_extract(v, &p, &f) == DTX_OK);
  CHECK(dtx_features_dimension(f) == 2 * (8 + 20));
  CHECK(dtx_features_segment_count(f) == 8);

  uint32_t r2 = 0, tau = 0;
  int32_t temporal = -1;
  uint64_t offset = 0, bins = 0;
  REQUIRE(dtx_features_segment(f, 0, &r2, &tau, &temporal, &offset, &bins) ==
          DTX_OK);
  CHECK(r2 == 1);
  CHECK(tau == 16);
  CHECK(temporal == 0);
  CHECK(offset == 0);
  CHECK(bins == 5);
  CHECK(dtx_features_segment(f, 99, &r2, &tau, &temporal, &offset, &bins) ==
        DTX_ERR_CONFIG);

  dtx_walk_stats stats{};
  REQUIRE(dtx_features_walk_stats(f, &stats) == DTX_OK);
  CHECK(stats.total_walks == uint64_t(8 * 7 * 4) * 10 * 4);
  CHECK(stats.total_steps > 0);
  CHECK(stats.mean_length > 0.0);

  const double* values = dtx_features_values(f);
  double sum = 0;
  for (uint64_t i = 0; i < dtx_features_dimension(f); ++i) sum += values[i];
  CHECK(sum > 0.0);

  // Per-network activity agrees with conservation.
  std::vector<uint64_t> visits(8 * 7 * 4);
  dtx_walk_stats net_stats{};
  REQUIRE(dtx_activity(v, 2, 136, &p, visits.data(), &net_stats) == DTX_OK);
  uint64_t total = 0;
  for (const uint64_t a : visits) total += a;
  CHECK(total == net_stats.total_steps);

  dtx_features_free(f);
  dtx_video_free(v);
}

TEST_CASE("manifest pipeline: synth, extract, eval") {
  const fs::path dir = scratch("capi_pipeline");
  REQUIRE(dtx_synth_corpus(dir.string().c_str(), 3, 24, 20, 5, 0, 9) == DTX_OK);
  REQUIRE(fs::exists(dir / "manifest.json"));

  dtx_params p;
  dtx_params_init(&p);
  p.radii[0] = 1;
  p.radius_count = 1;
  p.tau0 = 32;
  p.taui = 128;
  p.nf = 1;
  p.walks = 10;
  p.max_steps = 50;
  p.workers = 2;

  const std::string manifest = (dir / "manifest.json").string();
  const std::string csv = (dir / "features.csv").string();
  const std::string layout = (dir / "features.layout.json").string();
  dtx_extract_summary summary{};
  REQUIRE(dtx_extract_manifest(manifest.c_str(), &p, csv.c_str(),
                               layout.c_str(), &summary) == DTX_OK);
  CHECK(summary.videos_ok == 12);
  CHECK(summary.videos_failed == 0);
  CHECK(summary.mean_walk_length > 0.0);

  dtx_eval_summary eval{};
  REQUIRE(dtx_eval_csv(csv.c_str(), "kfold", 3, 2, 7, "euclidean", "temporal",
                       layout.c_str(), (dir / "report.json").string().c_str(),
                       (dir / "conf.csv").string().c_str(),
                       &eval) == DTX_OK);
  CHECK(eval.trials == 2);
  CHECK(eval.classes == 4);
  CHECK(eval.ccr_mean >= 0.0);
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "conf.csv"));

  // Config conflicts surface as DTX_ERR_CONFIG.
  CHECK(dtx_eval_csv(csv.c_str(), "kfold", 64, 2, 7, nullptr, nullptr, nullptr,
                     nullptr, nullptr, &eval) == DTX_ERR_CONFIG);
  CHECK(dtx_eval_csv(csv.c_str(), "bogus", 3, 2, 7, nullptr, nullptr, nullptr,
                     nullptr, nullptr, &eval) == DTX_ERR_CONFIG);
  CHECK(dtx_eval_csv("missing.csv", "kfold", 3, 2, 7, nullptr, nullptr,
                     nullptr, nullptr, nullptr, &eval) == DTX_ERR_INPUT);
  CHECK(dtx_eval_csv(csv.c_str(), "kfold", 3, 2, 7, nullptr, "temporal",
                     nullptr, nullptr, nullptr, &eval) == DTX_ERR_CONFIG);
}

TEST_CASE("inspect through the C API") {
  const fs::path dir = scratch("capi_inspect");
  std::vector<uint8_t> chain{200, 150};
  dtx_video* v = nullptr;
  REQUIRE(dtx_video_create(2, 1, 1, chain.data(), &v) == DTX_OK);
  const std::string path = (dir / "chain.dt3d").string();
  REQUIRE(dtx_video_save(v, path.c_str()) == DTX_OK);
  dtx_video_free(v);

  dtx_params p;
  dtx_params_init(&p);
  dtx_walk_stats stats{};
  REQUIRE(dtx_inspect(path.c_str(), &p, 1, 255,
                      (dir / "out").string().c_str(), &stats) == DTX_OK);
  CHECK(stats.total_walks == 100);
  CHECK(fs::exists(dir / "out" / "activity_0000.pgm"));
  CHECK(fs::exists(dir / "out" / "joint.csv"));
}
