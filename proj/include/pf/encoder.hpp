#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "pf/rng.hpp"
#include "pf/vec.hpp"

namespace pf {

enum class EncoderKind { FreeEmbeddings, Linear };

// Stand-in for the projector network: either a table of freely optimized
// per-sample vectors, or a linear map with bias. With normalize_output the
// emitted embedding is unit-normalized (updates use the retraction scheme:
// Euclidean step, then renormalize).
struct Encoder {
  EncoderKind kind = EncoderKind::FreeEmbeddings;
  bool normalize_output = true;
  int in_dim = 0;
  int out_dim = 0;
  std::vector<Vec> table;  // FreeEmbeddings: one row per dataset sample
  Vec weight;              // Linear: in_dim x out_dim, row-major by input dim
  Vec bias;                // Linear: out_dim

  Vec encode_sample(int index) const {
    if (kind != EncoderKind::FreeEmbeddings)
      throw std::logic_error("Encoder: encode_sample requires FreeEmbeddings");
    Vec z = table[static_cast<std::size_t>(index)];
    if (normalize_output) normalize(z);
    return z;
  }

  Vec encode(const Vec& x) const {
    if (kind != EncoderKind::Linear) throw std::logic_error("Encoder: encode requires Linear");
    if (x.size() != static_cast<std::size_t>(in_dim))
      throw std::invalid_argument("Encoder: input dimension mismatch");
    Vec z(static_cast<std::size_t>(out_dim));
    for (int j = 0; j < out_dim; ++j) {
      double s = bias[static_cast<std::size_t>(j)];
      for (int i = 0; i < in_dim; ++i)
        s += x[static_cast<std::size_t>(i)] *
             weight[static_cast<std::size_t>(i) * out_dim + static_cast<std::size_t>(j)];
      z[static_cast<std::size_t>(j)] = s;
    }
    if (normalize_output) normalize(z);
    return z;
  }

  int embedding_dim() const {
    return kind == EncoderKind::Linear
               ? out_dim
               : (table.empty() ? 0 : static_cast<int>(table.front().size()));
  }
};

// Free table initialized from the given rows (typically the raw inputs).
inline Encoder make_free_encoder(std::vector<Vec> init_rows, bool normalize_output) {
  Encoder e;
  e.kind = EncoderKind::FreeEmbeddings;
  e.normalize_output = normalize_output;
  e.table = std::move(init_rows);
  e.out_dim = e.table.empty() ? 0 : static_cast<int>(e.table.front().size());
  e.in_dim = e.out_dim;
  return e;
}

// Linear map with N(0, 1/in_dim) weights and zero bias.
inline Encoder make_linear_encoder(int in_dim, int out_dim, bool normalize_output,
                                   std::uint64_t seed) {
  if (in_dim < 1 || out_dim < 1)
    throw std::invalid_argument("make_linear_encoder: dimensions must be >= 1");
  Encoder e;
  e.kind = EncoderKind::Linear;
  e.normalize_output = normalize_output;
  e.in_dim = in_dim;
  e.out_dim = out_dim;
  e.weight.resize(static_cast<std::size_t>(in_dim) * out_dim);
  e.bias.assign(static_cast<std::size_t>(out_dim), 0.0);
  auto rng = substream(seed, "encoder.weight");
  std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(static_cast<double>(in_dim)));
  for (double& w : e.weight) w = gauss(rng);
  return e;
}

}  // namespace pf
