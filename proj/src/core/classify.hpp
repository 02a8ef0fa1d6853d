/*
 * (C) Copyright 2026 dtexnet authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace dtexnet {

enum class Distance { euclidean, manhattan };

struct LabeledDataset {
  std::vector<std::string> class_names;     // first-appearance order
  std::vector<std::string> ids;
  std::vector<uint32_t> labels;             // index into class_names
  std::vector<std::vector<double>> features;

  size_t size() const { return labels.size(); }
  size_t dimension() const { return features.empty() ? 0 : features[0].size(); }
  size_t class_count() const { return class_names.size(); }

  /// Appends one item, interning the label. Enforces a uniform dimension.
  void add(std::string id, const std::string& label,
           std::vector<double> feature);
};

struct EvalReport {
  double ccr_mean = 0.0;  // percent
  double ccr_std = 0.0;   // percent, population std over trials
  std::vector<double> trial_ccrs;
  size_t trials = 0;
  std::vector<std::string> class_names;
  std::vector<uint64_t> confusion_counts;  // row-major [actual][predicted]
  std::vector<double> confusion_pct;       // rows normalized to 100
  std::vector<std::string> warnings;

  double confusion_count(size_t actual, size_t predicted) const {
    return double(confusion_counts[actual * class_names.size() + predicted]);
  }
};

/// Label of the training item nearest to `query`; ties go to the lowest
/// item index. Distances are compared in squared form for euclidean.
uint32_t nn1_classify(const LabeledDataset& train,
                      const std::vector<double>& query,
                      Distance metric = Distance::euclidean);

/// One stratified deal of items into folds: per class, items are shuffled
/// and dealt round-robin starting at fold (class index mod folds). This is
/// exactly the assignment kfold_cv uses for trial seed `trial_seed`.
std::vector<uint32_t> stratified_fold_assignment(const LabeledDataset& data,
                                                 unsigned folds,
                                                 uint64_t trial_seed);

/// One holdout deal: per class, floor(n/2) shuffled items train, the rest
/// test. Returns (train indices, test indices), each ascending. This is
/// exactly the split holdout_trials uses for trial seed `trial_seed`.
std::pair<std::vector<size_t>, std::vector<size_t>> holdout_split(
    const LabeledDataset& data, uint64_t trial_seed);

/// Stratified k-fold cross-validation, repeated `trials` times with
/// per-trial reshuffles. Per-trial CCR pools the predictions of all folds.
EvalReport kfold_cv(const LabeledDataset& data, unsigned folds,
                    unsigned trials, uint64_t seed,
                    Distance metric = Distance::euclidean);

/// Repeated stratified holdout: per class, floor(n/2) items train and the
/// rest test, reshuffled every trial.
EvalReport holdout_trials(const LabeledDataset& data, unsigned trials,
                          uint64_t seed,
                          Distance metric = Distance::euclidean);

}  // namespace dtexnet
