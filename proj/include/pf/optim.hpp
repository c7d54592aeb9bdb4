#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "pf/encoder.hpp"
#include "pf/field.hpp"
#include "pf/rng.hpp"
#include "pf/synth.hpp"

namespace pf {

enum class OptimMethod { SGD, Adam };

struct OptimizerConfig {
  OptimMethod method = OptimMethod::Adam;
  double learning_rate = 1e-2;
  double proxy_lr_multiplier = 100.0;
  int steps = 300;
  int batch_size = 32;
  int classes_per_batch = 4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // SGD only: halve the effective step until the batch energy does not
  // increase; guarantees a non-increasing energy trace on a fixed batch.
  bool backtracking = false;
  std::uint64_t seed = 1;

  void validate() const {
    if (!(learning_rate > 0.0)) throw std::invalid_argument("optimizer: learning_rate must be > 0");
    if (!(proxy_lr_multiplier > 0.0))
      throw std::invalid_argument("optimizer: proxy_lr_multiplier must be > 0");
    if (steps < 0) throw std::invalid_argument("optimizer: steps must be >= 0");
    if (batch_size < 1) throw std::invalid_argument("optimizer: batch_size must be >= 1");
    if (classes_per_batch < 1)
      throw std::invalid_argument("optimizer: classes_per_batch must be >= 1");
    if (backtracking && method != OptimMethod::SGD)
      throw std::invalid_argument("optimizer: backtracking is defined for SGD only");
  }
};

// Proxy table: class-major, num_classes * per_class rows of N(0, scale^2)
// coordinates, unit-normalized when the embeddings are.
inline std::vector<Vec> init_proxies(int num_classes, int per_class, int dim, double scale,
                                     std::uint64_t seed, bool normalize_rows) {
  if (per_class == 0) return {};
  if (num_classes < 1 || per_class < 0 || dim < 1)
    throw std::invalid_argument("init_proxies: counts must be >= 1");
  auto rng = substream(seed, "proxies");
  std::normal_distribution<double> gauss(0.0, scale);
  std::vector<Vec> table(static_cast<std::size_t>(num_classes) * per_class,
                         Vec(static_cast<std::size_t>(dim)));
  for (Vec& row : table) {
    for (double& x : row) x = gauss(rng);
    if (normalize_rows) normalize(row);
  }
  return table;
}

struct TrainState {
  Encoder encoder;
  int num_classes = 0;
  int proxies_per_class = 0;
  bool normalize_proxies = true;
  std::vector<Vec> proxies;  // class-major
  long step_count = 0;
  std::vector<double> energy_trace;  // batch energy before each step's update

  // Adam moments (allocated on first use, shaped like the parameters)
  std::vector<Vec> m_table, v_table;
  Vec m_weight, v_weight, m_bias, v_bias;
  std::vector<Vec> m_proxies, v_proxies;
};

struct TrainingReport {
  double final_energy = 0.0;
  long steps = 0;
  std::vector<double> energy_trace;  // possibly strided
  long long overflow_guard_hits = 0;
  double wall_time_seconds = 0.0;
};

namespace detail {

inline void ensure_adam_slots(TrainState& st) {
  auto zeros_like = [](const std::vector<Vec>& t) {
    return std::vector<Vec>(t.size(), t.empty() ? Vec{} : Vec(t.front().size(), 0.0));
  };
  if (st.encoder.kind == EncoderKind::FreeEmbeddings) {
    if (st.m_table.size() != st.encoder.table.size()) {
      st.m_table = zeros_like(st.encoder.table);
      st.v_table = zeros_like(st.encoder.table);
    }
  } else {
    if (st.m_weight.size() != st.encoder.weight.size()) {
      st.m_weight.assign(st.encoder.weight.size(), 0.0);
      st.v_weight.assign(st.encoder.weight.size(), 0.0);
      st.m_bias.assign(st.encoder.bias.size(), 0.0);
      st.v_bias.assign(st.encoder.bias.size(), 0.0);
    }
  }
  if (st.m_proxies.size() != st.proxies.size()) {
    st.m_proxies = zeros_like(st.proxies);
    st.v_proxies = zeros_like(st.proxies);
  }
}

// One Adam update of a flat parameter group against gradient g.
inline void adam_update(Vec& param, Vec& m, Vec& v, const Vec& g, double lr,
                        const OptimizerConfig& cfg, long t) {
  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
  for (std::size_t i = 0; i < param.size(); ++i) {
    m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
    v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
    param[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + cfg.epsilon);
  }
}

}  // namespace detail

// Assembles the field snapshot for a batch: embeddings occupy entity ids
// 0..B-1 in batch order, proxies follow class-major. Batch indices should be
// ascending so re-drawing the same subset yields an identical snapshot.
inline ChargeSnapshot batch_snapshot(const TrainState& st, const LabeledDataset& data,
                                     const std::vector<int>& batch) {
  std::vector<Vec> zs;
  std::vector<int> labels;
  zs.reserve(batch.size());
  labels.reserve(batch.size());
  for (int idx : batch) {
    zs.push_back(st.encoder.kind == EncoderKind::FreeEmbeddings
                     ? st.encoder.encode_sample(idx)
                     : st.encoder.encode(data.inputs[static_cast<std::size_t>(idx)]));
    labels.push_back(data.labels[static_cast<std::size_t>(idx)]);
  }
  return make_snapshot(zs, labels, st.num_classes, st.proxies, st.proxies_per_class);
}

// One optimization step: encode the batch, assemble the snapshot, compute
// forces, move encoder parameters and proxies (proxies with the learning
// rate multiplier), renormalize where configured, and append the batch
// energy to the trace.
inline void train_step(TrainState& st, const LabeledDataset& data, const std::vector<int>& batch,
                       const PotentialKernel& kernel, ForceMode mode, const OptimizerConfig& cfg,
                       EvalDiagnostics* diag = nullptr) {
  if (batch.empty()) throw std::invalid_argument("train_step: empty batch");
  const std::size_t b = batch.size();
  ChargeSnapshot snap = batch_snapshot(st, data, batch);
  const double energy_before = total_energy(snap, kernel, diag);
  std::vector<Vec> forces = batch_forces(snap, kernel, mode, diag);
  for (const Vec& f : forces) {
    if (!all_finite(f))
      throw std::runtime_error("train_step: non-finite force (overflow); step aborted");
  }

  const double proxy_lr = cfg.learning_rate * cfg.proxy_lr_multiplier;
  auto apply_sgd = [&](TrainState& target, double scale) {
    // embeddings move along their forces, back-propagated through the encoder
    if (target.encoder.kind == EncoderKind::FreeEmbeddings) {
      for (std::size_t i = 0; i < b; ++i) {
        Vec& row = target.encoder.table[static_cast<std::size_t>(batch[i])];
        add_scaled(row, scale * cfg.learning_rate, forces[i]);
        if (target.encoder.normalize_output) normalize(row);
      }
    } else {
      const int din = target.encoder.in_dim;
      const int dout = target.encoder.out_dim;
      for (std::size_t i = 0; i < b; ++i) {
        const Vec& x = data.inputs[static_cast<std::size_t>(batch[i])];
        for (int a = 0; a < din; ++a) {
          const double xa = x[static_cast<std::size_t>(a)];
          for (int j = 0; j < dout; ++j)
            target.encoder.weight[static_cast<std::size_t>(a) * dout + j] +=
                scale * cfg.learning_rate * xa * forces[i][static_cast<std::size_t>(j)];
        }
        for (int j = 0; j < dout; ++j)
          target.encoder.bias[static_cast<std::size_t>(j)] +=
              scale * cfg.learning_rate * forces[i][static_cast<std::size_t>(j)];
      }
    }
    for (std::size_t p = 0; p < target.proxies.size(); ++p) {
      add_scaled(target.proxies[p], scale * proxy_lr, forces[b + p]);
      if (target.normalize_proxies) normalize(target.proxies[p]);
    }
  };

  if (cfg.method == OptimMethod::SGD && cfg.backtracking) {
    double scale = 1.0;
    bool applied = false;
    for (int tries = 0; tries < 40; ++tries) {
      TrainState candidate = st;
      apply_sgd(candidate, scale);
      const double energy_after = total_energy(batch_snapshot(candidate, data, batch), kernel, diag);
      if (energy_after <= energy_before) {
        st = std::move(candidate);
        applied = true;
        break;
      }
      scale *= 0.5;
    }
    if (!applied) {
      // no admissible step; keep parameters, still count the step
    }
  } else if (cfg.method == OptimMethod::SGD) {
    apply_sgd(st, 1.0);
  } else {
    detail::ensure_adam_slots(st);
    const long t = st.step_count + 1;
    if (st.encoder.kind == EncoderKind::FreeEmbeddings) {
      for (std::size_t i = 0; i < b; ++i) {
        const std::size_t row = static_cast<std::size_t>(batch[i]);
        Vec grad = scaled(forces[i], -1.0);
        detail::adam_update(st.encoder.table[row], st.m_table[row], st.v_table[row], grad,
                            cfg.learning_rate, cfg, t);
        if (st.encoder.normalize_output) normalize(st.encoder.table[row]);
      }
    } else {
      const int din = st.encoder.in_dim;
      const int dout = st.encoder.out_dim;
      Vec gw(st.encoder.weight.size(), 0.0);
      Vec gb(st.encoder.bias.size(), 0.0);
      for (std::size_t i = 0; i < b; ++i) {
        const Vec& x = data.inputs[static_cast<std::size_t>(batch[i])];
        for (int a = 0; a < din; ++a) {
          const double xa = x[static_cast<std::size_t>(a)];
          for (int j = 0; j < dout; ++j)
            gw[static_cast<std::size_t>(a) * dout + j] -=
                xa * forces[i][static_cast<std::size_t>(j)];
        }
        for (int j = 0; j < dout; ++j)
          gb[static_cast<std::size_t>(j)] -= forces[i][static_cast<std::size_t>(j)];
      }
      detail::adam_update(st.encoder.weight, st.m_weight, st.v_weight, gw, cfg.learning_rate, cfg, t);
      detail::adam_update(st.encoder.bias, st.m_bias, st.v_bias, gb, cfg.learning_rate, cfg, t);
    }
    for (std::size_t p = 0; p < st.proxies.size(); ++p) {
      Vec grad = scaled(forces[b + p], -1.0);
      detail::adam_update(st.proxies[p], st.m_proxies[p], st.v_proxies[p], grad, proxy_lr, cfg, t);
      if (st.normalize_proxies) normalize(st.proxies[p]);
    }
  }

  ++st.step_count;
  st.energy_trace.push_back(energy_before);
}

// Class-balanced batch: pick up to classes_per_batch classes, then
// batch_size / C samples per class without replacement. Indices are returned
// ascending so the snapshot layout is canonical for a given subset.
inline std::vector<int> sample_batch(const LabeledDataset& data, const OptimizerConfig& cfg,
                                     std::mt19937_64& rng) {
  std::vector<std::vector<int>> by_class(static_cast<std::size_t>(data.num_classes));
  for (std::size_t i = 0; i < data.size(); ++i)
    by_class[static_cast<std::size_t>(data.labels[i])].push_back(static_cast<int>(i));
  std::vector<int> classes;
  for (int c = 0; c < data.num_classes; ++c)
    if (!by_class[static_cast<std::size_t>(c)].empty()) classes.push_back(c);
  if (classes.empty()) throw std::invalid_argument("sample_batch: empty dataset");
  std::shuffle(classes.begin(), classes.end(), rng);
  const int use = std::min<int>(cfg.classes_per_batch, static_cast<int>(classes.size()));
  classes.resize(static_cast<std::size_t>(use));
  const int per_class = std::max(1, cfg.batch_size / use);
  std::vector<int> batch;
  for (int c : classes) {
    std::vector<int>& pool = by_class[static_cast<std::size_t>(c)];
    const int take = std::min<int>(per_class, static_cast<int>(pool.size()));
    for (int i = 0; i < take; ++i) {
      std::uniform_int_distribution<int> pick(i, static_cast<int>(pool.size()) - 1);
      std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
      batch.push_back(pool[static_cast<std::size_t>(i)]);
    }
  }
  std::sort(batch.begin(), batch.end());
  return batch;
}

struct TrainOptions {
  OptimizerConfig optimizer;
  ForceMode mode = ForceMode::ForceSemantics;
  int trace_stride = 1;
  int eval_every = 0;
  std::function<void(long, const TrainState&)> on_eval;
};

// Energy-minimizing loop over sampled batches. Deterministic given the
// optimizer seed; batch subsets come from substream(seed, "batch", step).
inline TrainingReport train(TrainState& st, const LabeledDataset& data, const PotentialKernel& kernel,
                            const TrainOptions& opt, EvalDiagnostics* diag = nullptr) {
  opt.optimizer.validate();
  EvalDiagnostics local_diag;
  EvalDiagnostics* d = diag ? diag : &local_diag;
  const auto t0 = std::chrono::steady_clock::now();
  for (int step = 0; step < opt.optimizer.steps; ++step) {
    auto rng = substream(opt.optimizer.seed, "batch", static_cast<std::uint64_t>(step));
    const std::vector<int> batch = sample_batch(data, opt.optimizer, rng);
    try {
      train_step(st, data, batch, kernel, opt.mode, opt.optimizer, d);
    } catch (const std::exception& e) {
      throw std::runtime_error("train: step " + std::to_string(step) + ": " + e.what());
    }
    if (opt.eval_every > 0 && opt.on_eval && (step + 1) % opt.eval_every == 0)
      opt.on_eval(st.step_count, st);
  }
  TrainingReport report;
  report.steps = st.step_count;
  report.final_energy = st.energy_trace.empty() ? 0.0 : st.energy_trace.back();
  const int stride = std::max(1, opt.trace_stride);
  for (std::size_t i = 0; i < st.energy_trace.size(); i += static_cast<std::size_t>(stride))
    report.energy_trace.push_back(st.energy_trace[i]);
  report.overflow_guard_hits = d->guard_hits.load();
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace pf
