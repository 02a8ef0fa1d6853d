/*
 * (C) Copyright 2026 dtexnet authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

/* dtexnet C API.
 *
 * Dynamic-texture descriptors from diffusion on directed pixel networks:
 * a video volume becomes an implicit directed weighted graph, per-vertex
 * activity is estimated with capped random walks over a series of edge
 * thresholds, and activity histograms binned by spatial/temporal in-degree
 * are concatenated into a multi-scale feature vector.
 *
 * All functions returning dtx_status report DTX_OK on success; on failure
 * dtx_last_error() describes the most recent error of the calling thread.
 * Objects returned through out-parameters are owned by the caller and must
 * be released with the matching *_free function.
 */

#ifndef DTEXNET_DTEXNET_H_
#define DTEXNET_DTEXNET_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define DTX_API __declspec(dllexport)
#else
#  define DTX_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dtx_status {
  DTX_OK = 0,
  DTX_ERR_INPUT = 1,   /* missing/corrupt files or data */
  DTX_ERR_CONFIG = 2,  /* invalid parameters or parameter/data conflicts */
  DTX_ERR_INTERNAL = 3
} dtx_status;

typedef enum dtx_video_format {
  DTX_FORMAT_AUTO = 0,       /* directory -> frame_dir, file -> raw_gray3d */
  DTX_FORMAT_RAW_GRAY3D = 1, /* "DT3D" magic, LE u32 W/H/T, W*H*T bytes */
  DTX_FORMAT_FRAME_DIR = 2   /* directory of PNG/PGM frames */
} dtx_video_format;

/* Opaque handles. */
typedef struct dtx_video dtx_video;
typedef struct dtx_features dtx_features;

#define DTX_MAX_RADII 16

/* Extraction parameters: connection radii (squared), threshold schedule
 * tau0 + k*taui for k = 0..nf, walk budget and determinism controls. */
typedef struct dtx_params {
  uint32_t radii[DTX_MAX_RADII]; /* squared radii, strictly ascending */
  uint32_t radius_count;
  uint32_t tau0;      /* first threshold, 1..255 */
  uint32_t taui;      /* threshold increment, >= 1 */
  uint32_t nf;        /* number of increments */
  uint32_t walks;     /* random walks per vertex */
  uint32_t max_steps; /* step cap per walk */
  uint64_t seed;
  uint32_t workers;   /* worker threads; any value gives identical output */
  int32_t self_check; /* nonzero: verify conservation invariants per network */
} dtx_params;

typedef struct dtx_extract_summary {
  uint64_t videos_ok;
  uint64_t videos_failed;
  uint64_t total_walks;
  uint64_t total_steps;
  uint32_t max_walk_length;
  double mean_walk_length;
} dtx_extract_summary;

typedef struct dtx_eval_summary {
  double ccr_mean; /* percent */
  double ccr_std;  /* percent */
  uint32_t trials;
  uint32_t classes;
} dtx_eval_summary;

typedef struct dtx_walk_stats {
  uint64_t total_walks;
  uint64_t total_steps;
  uint32_t max_length;
  double mean_length;
} dtx_walk_stats;

DTX_API const char* dtx_version(void);

/* Message for the most recent failure on this thread; never NULL. */
DTX_API const char* dtx_last_error(void);

/* ---- parameters ---- */

/* Defaults: radii {1,2,3}, tau0=8, taui=96, nf=2, walks=50, max_steps=1000,
 * seed=1, workers=1, self_check=1. */
DTX_API void dtx_params_init(dtx_params* params);

/* Named parameter sets: "dyntexpp", "ucla", "traffic". */
DTX_API dtx_status dtx_params_preset(const char* name, dtx_params* params);

/* ---- video volumes ---- */

DTX_API dtx_status dtx_video_load(const char* path, dtx_video_format format,
                                  dtx_video** out);
DTX_API dtx_status dtx_video_create(uint32_t width, uint32_t height,
                                    uint32_t frames, const uint8_t* samples,
                                    dtx_video** out);
DTX_API void dtx_video_free(dtx_video* video);
DTX_API uint32_t dtx_video_width(const dtx_video* video);
DTX_API uint32_t dtx_video_height(const dtx_video* video);
DTX_API uint32_t dtx_video_frames(const dtx_video* video);
/* Sample storage: x fastest, then y, then t. */
DTX_API const uint8_t* dtx_video_data(const dtx_video* video);
DTX_API dtx_status dtx_video_rotate90(const dtx_video* video, int quarter_turns,
                                      dtx_video** out);
DTX_API dtx_status dtx_video_save(const dtx_video* video, const char* path);

/* ---- descriptors ---- */

DTX_API dtx_status dtx_feature_dimension(const dtx_params* params,
                                         uint64_t* dimension);

DTX_API dtx_status dtx_extract(const dtx_video* video, const dtx_params* params,
                               dtx_features** out);
DTX_API void dtx_features_free(dtx_features* features);
DTX_API uint64_t dtx_features_dimension(const dtx_features* features);
DTX_API const double* dtx_features_values(const dtx_features* features);
DTX_API uint64_t dtx_features_segment_count(const dtx_features* features);
/* Layout of segment i: squared radius, threshold, temporal flag (0 =
 * spatial), value offset and bin count. */
DTX_API dtx_status dtx_features_segment(const dtx_features* features,
                                        uint64_t index, uint32_t* r2,
                                        uint32_t* tau, int32_t* temporal,
                                        uint64_t* offset, uint64_t* bins);
DTX_API dtx_status dtx_features_walk_stats(const dtx_features* features,
                                           dtx_walk_stats* stats);

/* Per-vertex visit counts for a single (r2, tau) network. `visits` must hold
 * width*height*frames entries. */
DTX_API dtx_status dtx_activity(const dtx_video* video, uint32_t r2,
                                uint32_t tau, const dtx_params* params,
                                uint64_t* visits, dtx_walk_stats* stats);

/* ---- pipeline commands ---- */

/* Extracts every video of a JSON manifest ([{"path":..., "label":...}, ...])
 * into a feature CSV; layout_json may be NULL to skip the sidecar. Failed
 * rows are skipped and counted in the summary; they make the call return
 * DTX_ERR_INPUT after the CSV is written. */
DTX_API dtx_status dtx_extract_manifest(const char* manifest_path,
                                        const dtx_params* params,
                                        const char* csv_path,
                                        const char* layout_json_path,
                                        dtx_extract_summary* summary);

/* Evaluates a feature CSV with 1-nearest-neighbor classification.
 * protocol: "kfold" (uses folds) or "holdout" (half/half per class).
 * metric: "euclidean" (default when NULL) or "manhattan".
 * segments: NULL/"all", or "spatial"/"temporal" (requires layout_json_path).
 * report_json_path / confusion_csv_path may be NULL. */
DTX_API dtx_status dtx_eval_csv(const char* features_csv, const char* protocol,
                                uint32_t folds, uint32_t trials, uint64_t seed,
                                const char* metric, const char* segments,
                                const char* layout_json_path,
                                const char* report_json_path,
                                const char* confusion_csv_path,
                                dtx_eval_summary* summary);

/* Writes per-frame activity heat-maps (PGM) and the joint activity
 * distribution (CSV) for one (r2, tau) network. */
DTX_API dtx_status dtx_inspect(const char* video_path, const dtx_params* params,
                               uint32_t r2, uint32_t tau, const char* out_dir,
                               dtx_walk_stats* stats);

/* Generates the synthetic motion corpus (4 classes x per_class videos) plus
 * its manifest under out_dir. patch_size 0 picks one from the frame size. */
DTX_API dtx_status dtx_synth_corpus(const char* out_dir, uint32_t per_class,
                                    uint32_t width, uint32_t height,
                                    uint32_t frames, uint32_t patch_size,
                                    uint64_t seed);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* DTEXNET_DTEXNET_H_ */
