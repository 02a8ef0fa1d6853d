/*
 * (C) Copyright 2026 dtexnet authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "dtexnet/dtexnet.h"

#include <cstring>
#include <string>

#include "core/classify.hpp"
#include "core/descriptor.hpp"
#include "core/diffusion.hpp"
#include "core/errors.hpp"
#include "core/pipeline.hpp"
#include "core/rng.hpp"
#include "core/synthetic.hpp"
#include "core/video.hpp"
#include "core/video_io.hpp"

namespace {

thread_local std::string g_last_error = "";

void set_error(const std::string& message) { g_last_error = message; }

// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
dtx_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const dtexnet::config_error& e) {
    set_error(e.what());
    return DTX_ERR_CONFIG;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return DTX_ERR_CONFIG;
  } catch (const dtexnet::io_error& e) {
    set_error(e.what());
    return DTX_ERR_INPUT;
  } catch (const std::exception& e) {
    set_error(e.what());
    return DTX_ERR_INTERNAL;
  }
}

dtexnet::ExtractionConfig to_config(const dtx_params& p) {
  if (p.radius_count < 1 || p.radius_count > DTX_MAX_RADII) {
    throw dtexnet::config_error("radius_count must be in [1, 16]");
  }
  dtexnet::ExtractionConfig cfg;
  cfg.radii.reserve(p.radius_count);
  for (uint32_t i = 0; i < p.radius_count; ++i) {
    cfg.radii.push_back(int(p.radii[i]));
  }
  cfg.thresholds.tau0 = int(p.tau0);
  cfg.thresholds.taui = int(p.taui);
  cfg.thresholds.nf = int(p.nf);
  cfg.walk.walks = p.walks;
  cfg.walk.max_steps = p.max_steps;
  cfg.walk.seed = p.seed;
  cfg.workers = p.workers ? p.workers : 1;
  cfg.self_check = p.self_check != 0;
  cfg.validate();
  return cfg;
}

void fill_stats(const dtexnet::WalkStats& st, dtx_walk_stats* out) {
  if (!out) return;
  out->total_walks = st.total_walks;
  out->total_steps = st.total_steps;
  out->max_length = st.max_length;
  out->mean_length = st.mean_length();
}

}  // namespace

struct dtx_video {
  dtexnet::Video value;
};

struct dtx_features {
  std::vector<double> values;
  dtexnet::FeatureLayout layout;
  dtexnet::WalkStats stats;
};

extern "C" {

const char* dtx_version(void) { return "0.1.0"; }

const char* dtx_last_error(void) { return g_last_error.c_str(); }

void dtx_params_init(dtx_params* params) {
  if (!params) return;
  std::memset(params, 0, sizeof(*params));
  params->radii[0] = 1;
  params->radii[1] = 2;
  params->radii[2] = 3;
  params->radius_count = 3;
  params->tau0 = 8;
  params->taui = 96;
  params->nf = 2;
  params->walks = 50;
  params->max_steps = 1000;
  params->seed = 1;
  params->workers = 1;
  params->self_check = 1;
}

dtx_status dtx_params_preset(const char* name, dtx_params* params) {
  return guarded([&]() -> dtx_status {
    if (!name || !params) {
      throw dtexnet::config_error("preset name and params must be non-null");
    }
    dtx_params_init(params);
    const std::string preset(name);
    if (preset == "dyntexpp") {
      params->radii[0] = 1;
      params->radii[1] = 2;
      params->radius_count = 2;
      params->tau0 = 2;
      params->taui = 48;
      params->nf = 4;
    } else if (preset == "ucla") {
      params->radii[0] = 1;
      params->radii[1] = 2;
      params->radii[2] = 3;
      params->radius_count = 3;
      params->tau0 = 8;
      params->taui = 96;
      params->nf = 2;
    } else if (preset == "traffic") {
      for (uint32_t i = 0; i < 5; ++i) params->radii[i] = i + 1;
      params->radius_count = 5;
      params->tau0 = 4;
      params->taui = 110;
      params->nf = 1;
    } else {
      throw dtexnet::config_error("unknown preset: " + preset);
    }
    return DTX_OK;
  });
}

dtx_status dtx_video_load(const char* path, dtx_video_format format,
                          dtx_video** out) {
  return guarded([&]() -> dtx_status {
    if (!path || !out) {
      throw dtexnet::config_error("path and out must be non-null");
    }
    dtexnet::VideoFormat f = dtexnet::VideoFormat::auto_detect;
    if (format == DTX_FORMAT_RAW_GRAY3D) f = dtexnet::VideoFormat::raw_gray3d;
    if (format == DTX_FORMAT_FRAME_DIR) f = dtexnet::VideoFormat::frame_dir;
    *out = new dtx_video{dtexnet::load_video(path, f)};
    return DTX_OK;
  });
}

dtx_status dtx_video_create(uint32_t width, uint32_t height, uint32_t frames,
                            const uint8_t* samples, dtx_video** out) {
  return guarded([&]() -> dtx_status {
    if (!samples || !out) {
      throw dtexnet::config_error("samples and out must be non-null");
    }
    std::vector<uint8_t> data(samples,
                              samples + size_t(width) * height * frames);
    *out = new dtx_video{dtexnet::Video(width, height, frames, std::move(data))};
    return DTX_OK;
  });
}

void dtx_video_free(dtx_video* video) { delete video; }

uint32_t dtx_video_width(const dtx_video* video) {
  return video ? video->value.width() : 0;
}
uint32_t dtx_video_height(const dtx_video* video) {
  return video ? video->value.height() : 0;
}
uint32_t dtx_video_frames(const dtx_video* video) {
  return video ? video->value.frames() : 0;
}
const uint8_t* dtx_video_data(const dtx_video* video) {
  return video ? video->value.data() : nullptr;
}

dtx_status dtx_video_rotate90(const dtx_video* video, int quarter_turns,
                              dtx_video** out) {
  return guarded([&]() -> dtx_status {
    if (!video || !out) {
      throw dtexnet::config_error("video and out must be non-null");
    }
    *out = new dtx_video{dtexnet::rotate90(video->value, quarter_turns)};
    return DTX_OK;
  });
}

dtx_status dtx_video_save(const dtx_video* video, const char* path) {
  return guarded([&]() -> dtx_status {
    if (!video || !path) {
      throw dtexnet::config_error("video and path must be non-null");
    }
    dtexnet::save_raw_gray3d(video->value, path);
    return DTX_OK;
  });
}

dtx_status dtx_feature_dimension(const dtx_params* params, uint64_t* dimension) {
  return guarded([&]() -> dtx_status {
    if (!params || !dimension) {
      throw dtexnet::config_error("params and dimension must be non-null");
    }
    const dtexnet::ExtractionConfig cfg = to_config(*params);
    *dimension = dtexnet::feature_dimension(cfg.radii, cfg.thresholds);
    return DTX_OK;
  });
}

dtx_status dtx_extract(const dtx_video* video, const dtx_params* params,
                       dtx_features** out) {
  return guarded([&]() -> dtx_status {
    if (!video || !params || !out) {
      throw dtexnet::config_error("video, params and out must be non-null");
    }
    const dtexnet::ExtractionConfig cfg = to_config(*params);
    dtexnet::DescriptorResult r = dtexnet::extract_descriptor(video->value, cfg);
    auto* f = new dtx_features;
    f->values = std::move(r.values);
    f->layout = dtexnet::feature_layout(cfg.radii, cfg.thresholds);
    f->stats = r.stats;
    *out = f;
    return DTX_OK;
  });
}

void dtx_features_free(dtx_features* features) { delete features; }

uint64_t dtx_features_dimension(const dtx_features* features) {
  return features ? features->values.size() : 0;
}
const double* dtx_features_values(const dtx_features* features) {
  return features ? features->values.data() : nullptr;
}
uint64_t dtx_features_segment_count(const dtx_features* features) {
  return features ? features->layout.segments.size() : 0;
}

dtx_status dtx_features_segment(const dtx_features* features, uint64_t index,
                                uint32_t* r2, uint32_t* tau, int32_t* temporal,
                                uint64_t* offset, uint64_t* bins) {
  return guarded([&]() -> dtx_status {
    if (!features) throw dtexnet::config_error("features must be non-null");
    if (index >= features->layout.segments.size()) {
      throw dtexnet::config_error("segment index out of range");
    }
    const dtexnet::LayoutSegment& s = features->layout.segments[size_t(index)];
    if (r2) *r2 = uint32_t(s.r2);
    if (tau) *tau = uint32_t(s.tau);
    if (temporal) *temporal = s.part == dtexnet::HistogramPart::temporal;
    if (offset) *offset = s.offset;
    if (bins) *bins = s.bins;
    return DTX_OK;
  });
}

dtx_status dtx_features_walk_stats(const dtx_features* features,
                                   dtx_walk_stats* stats) {
  return guarded([&]() -> dtx_status {
    if (!features || !stats) {
      throw dtexnet::config_error("features and stats must be non-null");
    }
    fill_stats(features->stats, stats);
    return DTX_OK;
  });
}

dtx_status dtx_activity(const dtx_video* video, uint32_t r2, uint32_t tau,
                        const dtx_params* params, uint64_t* visits,
                        dtx_walk_stats* stats) {
  return guarded([&]() -> dtx_status {
    if (!video || !params || !visits) {
      throw dtexnet::config_error("video, params and visits must be non-null");
    }
    if (r2 < 1) throw dtexnet::config_error("squared radius must be >= 1");
    const dtexnet::ExtractionConfig cfg = to_config(*params);
    const dtexnet::OffsetTable table = dtexnet::neighborhood_offsets(int(r2));
    dtexnet::WalkConfig net = cfg.walk;
    net.seed = dtexnet::derive_seed(dtexnet::derive_seed(cfg.walk.seed, r2), tau);
    dtexnet::WalkStats st;
    const dtexnet::ActivityField field = dtexnet::estimate_activity(
        video->value, table, int(tau), net, &st, cfg.workers);
    std::memcpy(visits, field.visits.data(),
                field.visits.size() * sizeof(uint64_t));
    fill_stats(st, stats);
    return DTX_OK;
  });
}

dtx_status dtx_extract_manifest(const char* manifest_path,
                                const dtx_params* params, const char* csv_path,
                                const char* layout_json_path,
                                dtx_extract_summary* summary) {
  return guarded([&]() -> dtx_status {
    if (!manifest_path || !params || !csv_path) {
      throw dtexnet::config_error(
          "manifest_path, params and csv_path must be non-null");
    }
    const dtexnet::ExtractionConfig cfg = to_config(*params);
    const dtexnet::ExtractSummary s = dtexnet::extract_manifest_to_csv(
        manifest_path, cfg, csv_path,
        layout_json_path ? layout_json_path : "");
    if (summary) {
      summary->videos_ok = s.videos_ok;
      summary->videos_failed = s.videos_failed;
      summary->total_walks = s.stats.total_walks;
      summary->total_steps = s.stats.total_steps;
      summary->max_walk_length = s.stats.max_length;
      summary->mean_walk_length = s.stats.mean_length();
    }
    if (s.videos_failed > 0) {
      std::string message = "failed to extract " +
                            std::to_string(s.videos_failed) + " video(s):";
      for (const std::string& e : s.errors) message += "\n  " + e;
      set_error(message);
      return DTX_ERR_INPUT;
    }
    return DTX_OK;
  });
}

dtx_status dtx_eval_csv(const char* features_csv, const char* protocol,
                        uint32_t folds, uint32_t trials, uint64_t seed,
                        const char* metric, const char* segments,
                        const char* layout_json_path,
                        const char* report_json_path,
                        const char* confusion_csv_path,
                        dtx_eval_summary* summary) {
  return guarded([&]() -> dtx_status {
    if (!features_csv || !protocol) {
      throw dtexnet::config_error("features_csv and protocol must be non-null");
    }
    dtexnet::EvalProtocol proto;
    proto.kind = protocol;
    proto.folds = folds;
    proto.trials = trials;
    proto.seed = seed;
    if (metric && std::string(metric) == "manhattan") {
      proto.metric = dtexnet::Distance::manhattan;
    } else if (metric && std::string(metric) != "euclidean" &&
               std::string(metric) != "") {
      throw dtexnet::config_error("unknown metric: " + std::string(metric));
    }

    dtexnet::LabeledDataset data = dtexnet::read_feature_csv(features_csv);
    if (segments && std::string(segments) != "all" &&
        std::string(segments) != "") {
      if (!layout_json_path) {
        throw dtexnet::config_error(
            "segment filtering requires a layout JSON path");
      }
      const dtexnet::FeatureLayout layout =
          dtexnet::read_layout_json(layout_json_path);
      const std::string which(segments);
      if (which == "spatial") {
        data = dtexnet::filter_segments(data, layout,
                                        dtexnet::HistogramPart::spatial);
      } else if (which == "temporal") {
        data = dtexnet::filter_segments(data, layout,
                                        dtexnet::HistogramPart::temporal);
      } else {
        throw dtexnet::config_error("unknown segments filter: " + which);
      }
    }

    const dtexnet::EvalReport report = dtexnet::run_eval(data, proto);
    if (report_json_path) {
      dtexnet::write_report_json(report, proto, report_json_path);
    }
    if (confusion_csv_path) {
      dtexnet::write_confusion_csv(report, confusion_csv_path);
    }
    if (summary) {
      summary->ccr_mean = report.ccr_mean;
      summary->ccr_std = report.ccr_std;
      summary->trials = uint32_t(report.trials);
      summary->classes = uint32_t(report.class_names.size());
    }
    return DTX_OK;
  });
}

dtx_status dtx_inspect(const char* video_path, const dtx_params* params,
                       uint32_t r2, uint32_t tau, const char* out_dir,
                       dtx_walk_stats* stats) {
  return guarded([&]() -> dtx_status {
    if (!video_path || !params || !out_dir) {
      throw dtexnet::config_error(
          "video_path, params and out_dir must be non-null");
    }
    const dtexnet::ExtractionConfig cfg = to_config(*params);
    const dtexnet::Video video = dtexnet::load_video(video_path);
    const dtexnet::InspectResult r =
        dtexnet::inspect_video(video, cfg, int(r2), int(tau), out_dir);
    fill_stats(r.stats, stats);
    return DTX_OK;
  });
}

dtx_status dtx_synth_corpus(const char* out_dir, uint32_t per_class,
                            uint32_t width, uint32_t height, uint32_t frames,
                            uint32_t patch_size, uint64_t seed) {
  return guarded([&]() -> dtx_status {
    if (!out_dir) throw dtexnet::config_error("out_dir must be non-null");
    dtexnet::CorpusParams p;
    p.out_dir = out_dir;
    p.per_class = per_class;
    p.width = width;
    p.height = height;
    p.frames = frames;
    p.patch_size = int(patch_size);
    p.seed = seed;
    dtexnet::gen_corpus(p);
    return DTX_OK;
  });
}

}  // extern "C"
