#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "pf/rng.hpp"
#include "pf/vec.hpp"

namespace pf {

struct SyntheticSpec {
  int num_classes = 8;
  int modes_per_class = 2;
  int dim = 32;
  int samples_per_class = 50;
  double mode_separation = 4.0;
  double within_mode_std = 0.5;
  std::uint64_t seed = 1;

  void validate() const {
    if (num_classes < 1) throw std::invalid_argument("SyntheticSpec: num_classes must be >= 1");
    if (modes_per_class < 1)
      throw std::invalid_argument("SyntheticSpec: modes_per_class must be >= 1");
    if (dim < 1) throw std::invalid_argument("SyntheticSpec: dim must be >= 1");
    if (samples_per_class < 1)
      throw std::invalid_argument("SyntheticSpec: samples_per_class must be >= 1");
    if (!(mode_separation >= 0.0))
      throw std::invalid_argument("SyntheticSpec: mode_separation must be >= 0");
    if (!(within_mode_std >= 0.0))
      throw std::invalid_argument("SyntheticSpec: within_mode_std must be >= 0");
  }
};

struct LabeledDataset {
  std::vector<Vec> inputs;
  std::vector<int> labels;
  std::vector<int> true_labels;
  std::vector<bool> noise_mask;
  int num_classes = 0;
  int dim = 0;

  std::size_t size() const { return inputs.size(); }
};

// Isotropic Gaussian mixture with modes_per_class modes per class. Mode
// centers are placed by rejection sampling in a box wide enough that the
// pairwise mode_separation constraint is ordinarily satisfiable.
inline LabeledDataset gen_mixture(const SyntheticSpec& spec) {
  spec.validate();
  const int num_modes = spec.num_classes * spec.modes_per_class;
  const double box = spec.mode_separation *
                     (1.0 + std::pow(static_cast<double>(num_modes), 1.0 / spec.dim));
  auto rng = substream(spec.seed, "synth.centers");
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<Vec> centers;
  centers.reserve(static_cast<std::size_t>(num_modes));
  long attempts = 0;
  while (centers.size() < static_cast<std::size_t>(num_modes)) {
    if (++attempts > 100000)
      throw std::runtime_error("gen_mixture: could not place mode centers (infeasible spec)");
    Vec c(static_cast<std::size_t>(spec.dim));
    for (double& x : c) x = box * unit(rng);
    bool ok = true;
    for (const Vec& other : centers) {
      if (distance(c, other) < spec.mode_separation) {
        ok = false;
        break;
      }
    }
    if (ok) centers.push_back(std::move(c));
  }

  LabeledDataset out;
  out.num_classes = spec.num_classes;
  out.dim = spec.dim;
  auto sample_rng = substream(spec.seed, "synth.samples");
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int c = 0; c < spec.num_classes; ++c) {
    for (int s = 0; s < spec.samples_per_class; ++s) {
      // samples are divided evenly among the class modes, remainder first
      const int mode = s % spec.modes_per_class;
      const Vec& center = centers[static_cast<std::size_t>(c * spec.modes_per_class + mode)];
      Vec x = center;
      for (double& xi : x) xi += spec.within_mode_std * gauss(sample_rng);
      out.inputs.push_back(std::move(x));
      out.labels.push_back(c);
      out.true_labels.push_back(c);
      out.noise_mask.push_back(false);
    }
  }
  return out;
}

// Symmetric label corruption: exactly round(rate * n) indices drawn without
// replacement, each relabeled to a uniformly random different class.
inline LabeledDataset inject_label_noise(LabeledDataset dataset, double rate,
                                         std::uint64_t rng_seed) {
  if (rate < 0.0 || rate > 1.0)
    throw std::invalid_argument("inject_label_noise: rate must be in [0,1]");
  if (rate > 0.0 && dataset.num_classes < 2)
    throw std::invalid_argument("inject_label_noise: need >= 2 classes to corrupt labels");
  const std::size_t n = dataset.size();
  const std::size_t count = static_cast<std::size_t>(std::llround(rate * static_cast<double>(n)));
  if (count == 0) return dataset;

  auto rng = substream(rng_seed, "noise");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  // partial Fisher-Yates: the first `count` entries are the corrupted set
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t target = idx[i];
    std::uniform_int_distribution<int> other(0, dataset.num_classes - 2);
    int label = other(rng);
    if (label >= dataset.labels[target]) ++label;  // skip the current label
    dataset.labels[target] = label;
  }
  for (std::size_t i = 0; i < n; ++i)
    dataset.noise_mask[i] = dataset.labels[i] != dataset.true_labels[i];
  return dataset;
}

// Zero-shot split: classes partitioned by ascending id, every sample follows
// its class, test labels remapped to a dense range starting at 0.
inline std::pair<LabeledDataset, LabeledDataset> split_zero_shot(const LabeledDataset& dataset,
                                                                 double train_fraction_of_classes) {
  const int n_train_classes =
      static_cast<int>(train_fraction_of_classes * dataset.num_classes);
  if (n_train_classes < 1 || n_train_classes >= dataset.num_classes)
    throw std::invalid_argument("split_zero_shot: fraction leaves an empty split");
  LabeledDataset train, test;
  train.dim = test.dim = dataset.dim;
  train.num_classes = n_train_classes;
  test.num_classes = dataset.num_classes - n_train_classes;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const bool to_train = dataset.labels[i] < n_train_classes;
    LabeledDataset& dst = to_train ? train : test;
    const int shift = to_train ? 0 : n_train_classes;
    dst.inputs.push_back(dataset.inputs[i]);
    dst.labels.push_back(dataset.labels[i] - shift);
    dst.true_labels.push_back(dataset.true_labels[i] - shift);
    dst.noise_mask.push_back(dataset.noise_mask[i]);
  }
  if (train.size() == 0 || test.size() == 0)
    throw std::invalid_argument("split_zero_shot: fraction leaves an empty split");
  return {std::move(train), std::move(test)};
}

}  // namespace pf
