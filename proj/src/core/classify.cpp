/*
 * (C) Copyright 2026 dtexnet authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "core/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace dtexnet {

void LabeledDataset::add(std::string id, const std::string& label,
                         std::vector<double> feature) {
  if (!features.empty() && feature.size() != features[0].size()) {
    throw config_error("feature dimension mismatch in dataset");
  }
  uint32_t cls = 0;
  for (; cls < class_names.size(); ++cls) {
    if (class_names[cls] == label) break;
  }
  if (cls == class_names.size()) class_names.push_back(label);
  ids.push_back(std::move(id));
  labels.push_back(cls);
  features.push_back(std::move(feature));
}

namespace {

double pair_distance(const std::vector<double>& a, const std::vector<double>& b,
                     Distance metric) {
  double acc = 0.0;
  if (metric == Distance::euclidean) {
    for (size_t i = 0; i < a.size(); ++i) {
      const double d = a[i] - b[i];
      acc += d * d;
    }
  } else {
    for (size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
  }
  return acc;
}

// Nearest training item among `train_idx` (ascending), lowest index on ties.
uint32_t predict(const LabeledDataset& data,
                 const std::vector<size_t>& train_idx,
                 const std::vector<double>& query, Distance metric) {
  double best = std::numeric_limits<double>::infinity();
  uint32_t label = 0;
  for (const size_t i : train_idx) {
    const double d = pair_distance(data.features[i], query, metric);
    if (d < best) {
      best = d;
      label = data.labels[i];
    }
  }
  return label;
}

void fisher_yates(std::vector<size_t>& v, SplitMix64& rng) {
  for (size_t i = v.size(); i > 1; --i) {
    const size_t j = rng.next_below(uint32_t(i));
    std::swap(v[i - 1], v[j]);
  }
}

std::vector<std::vector<size_t>> indices_by_class(const LabeledDataset& data) {
  std::vector<std::vector<size_t>> by_class(data.class_count());
  for (size_t i = 0; i < data.size(); ++i) {
    by_class[data.labels[i]].push_back(i);
  }
  return by_class;
}

struct TrialAccumulator {
  size_t classes;
  std::vector<uint64_t> confusion;
  std::vector<double> trial_ccrs;

  explicit TrialAccumulator(size_t class_count)
      : classes(class_count), confusion(class_count * class_count, 0) {}

  void record(uint32_t actual, uint32_t predicted) {
    confusion[size_t(actual) * classes + predicted]++;
  }

  EvalReport finish(const LabeledDataset& data) {
    EvalReport report;
    report.class_names = data.class_names;
    report.trials = trial_ccrs.size();
    report.trial_ccrs = trial_ccrs;
    double mean = 0.0;
    for (const double c : trial_ccrs) mean += c;
    mean /= double(trial_ccrs.size());
    double var = 0.0;
    for (const double c : trial_ccrs) var += (c - mean) * (c - mean);
    var /= double(trial_ccrs.size());
    report.ccr_mean = mean;
    report.ccr_std = std::sqrt(var);
    report.confusion_counts = confusion;
    report.confusion_pct.assign(confusion.size(), 0.0);
    for (size_t r = 0; r < classes; ++r) {
      uint64_t row = 0;
      for (size_t c = 0; c < classes; ++c) row += confusion[r * classes + c];
      if (row == 0) continue;
      for (size_t c = 0; c < classes; ++c) {
        report.confusion_pct[r * classes + c] =
            100.0 * double(confusion[r * classes + c]) / double(row);
      }
    }
    if (data.class_count() == 1) {
      report.warnings.push_back(
          "dataset has a single class; accuracy is trivially 100%");
    }
    return report;
  }
};

void validate_dataset(const LabeledDataset& data) {
  if (data.size() == 0) throw config_error("dataset is empty");
  if (data.dimension() == 0) throw config_error("dataset has no features");
}

}  // namespace

uint32_t nn1_classify(const LabeledDataset& train,
                      const std::vector<double>& query, Distance metric) {
  validate_dataset(train);
  if (query.size() != train.dimension()) {
    throw config_error("query dimension does not match the training set");
  }
  std::vector<size_t> all(train.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = i;
  return predict(train, all, query, metric);
}

std::vector<uint32_t> stratified_fold_assignment(const LabeledDataset& data,
                                                 unsigned folds,
                                                 uint64_t trial_seed) {
  const auto by_class = indices_by_class(data);
  std::vector<uint32_t> fold_of(data.size(), 0);
  std::vector<size_t> shuffled;
  // Shuffle within each class, then deal items round-robin, rotating the
  // first fold by class to balance fold sizes.
  for (size_t c = 0; c < by_class.size(); ++c) {
    shuffled = by_class[c];
    SplitMix64 rng(derive_seed(trial_seed, c));
    fisher_yates(shuffled, rng);
    for (size_t p = 0; p < shuffled.size(); ++p) {
      fold_of[shuffled[p]] = uint32_t((c + p) % folds);
    }
  }
  return fold_of;
}

std::pair<std::vector<size_t>, std::vector<size_t>> holdout_split(
    const LabeledDataset& data, uint64_t trial_seed) {
  const auto by_class = indices_by_class(data);
  std::vector<size_t> train_idx, test_idx, shuffled;
  for (size_t c = 0; c < by_class.size(); ++c) {
    shuffled = by_class[c];
    SplitMix64 rng(derive_seed(trial_seed, c));
    fisher_yates(shuffled, rng);
    const size_t take = shuffled.size() / 2;  // floor goes to training
    for (size_t p = 0; p < shuffled.size(); ++p) {
      (p < take ? train_idx : test_idx).push_back(shuffled[p]);
    }
  }
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());
  return {std::move(train_idx), std::move(test_idx)};
}

EvalReport kfold_cv(const LabeledDataset& data, unsigned folds,
                    unsigned trials, uint64_t seed, Distance metric) {
  validate_dataset(data);
  if (folds < 2) throw config_error("k-fold needs at least 2 folds");
  if (trials < 1) throw config_error("at least one trial is required");
  const auto by_class = indices_by_class(data);
  for (size_t c = 0; c < by_class.size(); ++c) {
    if (by_class[c].size() < folds) {
      throw config_error("class '" + data.class_names[c] +
                         "' has fewer items than folds");
    }
  }

  const size_t n = data.size();
  TrialAccumulator acc(data.class_count());
  std::vector<size_t> train_idx;

  for (unsigned trial = 0; trial < trials; ++trial) {
    const uint64_t trial_seed = derive_seed(seed, trial);
    const std::vector<uint32_t> fold_of =
        stratified_fold_assignment(data, folds, trial_seed);
    size_t correct = 0;
    for (unsigned f = 0; f < folds; ++f) {
      train_idx.clear();
      for (size_t i = 0; i < n; ++i) {
        if (fold_of[i] != f) train_idx.push_back(i);
      }
      for (size_t i = 0; i < n; ++i) {
        if (fold_of[i] != f) continue;
        const uint32_t p = predict(data, train_idx, data.features[i], metric);
        acc.record(data.labels[i], p);
        correct += (p == data.labels[i]);
      }
    }
    acc.trial_ccrs.push_back(100.0 * double(correct) / double(n));
  }
  return acc.finish(data);
}

EvalReport holdout_trials(const LabeledDataset& data, unsigned trials,
                          uint64_t seed, Distance metric) {
  validate_dataset(data);
  if (trials < 1) throw config_error("at least one trial is required");
  const auto by_class = indices_by_class(data);
  for (size_t c = 0; c < by_class.size(); ++c) {
    if (by_class[c].size() < 2) {
      throw config_error("class '" + data.class_names[c] +
                         "' needs at least 2 items for holdout");
    }
  }

  TrialAccumulator acc(data.class_count());

  for (unsigned trial = 0; trial < trials; ++trial) {
    const uint64_t trial_seed = derive_seed(seed, trial);
    const auto [train_idx, test_idx] = holdout_split(data, trial_seed);
    size_t correct = 0;
    for (const size_t i : test_idx) {
      const uint32_t p = predict(data, train_idx, data.features[i], metric);
      acc.record(data.labels[i], p);
      correct += (p == data.labels[i]);
    }
    acc.trial_ccrs.push_back(100.0 * double(correct) / double(test_idx.size()));
  }
  return acc.finish(data);
}

}  // namespace dtexnet
