#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "pf/vec.hpp"

namespace pf {

enum class EntityKind { Sample, Proxy };

struct ChargeEntity {
  Vec position;
  int class_id = 0;
  EntityKind kind = EntityKind::Sample;
  int entity_id = 0;
};

// The set of charged entities one field evaluation sees: batch samples plus
// all proxies. Entities are kept in ascending entity_id order; that order is
// the reduction order of every superposition sum, so results are
// reproducible bit-for-bit.
struct ChargeSnapshot {
  std::vector<ChargeEntity> entities;
  int num_classes = 0;
  int proxies_per_class = 0;

  std::size_t dim() const { return entities.empty() ? 0 : entities.front().position.size(); }

  void sort_and_validate() {
    std::sort(entities.begin(), entities.end(),
              [](const ChargeEntity& a, const ChargeEntity& b) { return a.entity_id < b.entity_id; });
    if (num_classes < 0) throw std::invalid_argument("ChargeSnapshot: negative class count");
    if (proxies_per_class < 0) throw std::invalid_argument("ChargeSnapshot: negative proxy count");
    const std::size_t d = dim();
    if (!entities.empty() && d == 0)
      throw std::invalid_argument("ChargeSnapshot: zero-dimensional positions");
    std::vector<int> proxy_count(static_cast<std::size_t>(std::max(num_classes, 0)), 0);
    for (std::size_t i = 0; i < entities.size(); ++i) {
      const ChargeEntity& e = entities[i];
      if (i > 0 && entities[i - 1].entity_id == e.entity_id)
        throw std::invalid_argument("ChargeSnapshot: duplicate entity_id " +
                                    std::to_string(e.entity_id));
      if (e.position.size() != d)
        throw std::invalid_argument("ChargeSnapshot: inconsistent dimensions");
      if (!all_finite(e.position))
        throw std::invalid_argument("ChargeSnapshot: non-finite position for entity " +
                                    std::to_string(e.entity_id));
      if (e.class_id < 0 || e.class_id >= num_classes)
        throw std::invalid_argument("ChargeSnapshot: class_id out of range for entity " +
                                    std::to_string(e.entity_id));
      if (e.kind == EntityKind::Proxy) ++proxy_count[static_cast<std::size_t>(e.class_id)];
    }
    for (std::size_t c = 0; c < proxy_count.size(); ++c) {
      if (proxy_count[c] != proxies_per_class)
        throw std::invalid_argument("ChargeSnapshot: class " + std::to_string(c) + " has " +
                                    std::to_string(proxy_count[c]) + " proxies, expected " +
                                    std::to_string(proxies_per_class));
    }
  }
};

// Builds a validated snapshot with samples first (entity ids 0..B-1) and
// proxies after (class-major), matching the id scheme the training loop uses.
inline ChargeSnapshot make_snapshot(const std::vector<Vec>& samples, const std::vector<int>& labels,
                                    int num_classes, const std::vector<Vec>& proxies,
                                    int proxies_per_class) {
  if (samples.size() != labels.size())
    throw std::invalid_argument("make_snapshot: samples/labels size mismatch");
  if (proxies_per_class > 0 &&
      proxies.size() != static_cast<std::size_t>(num_classes) * proxies_per_class)
    throw std::invalid_argument("make_snapshot: proxy table must be num_classes*proxies_per_class");
  ChargeSnapshot snap;
  snap.num_classes = num_classes;
  snap.proxies_per_class = proxies_per_class;
  snap.entities.reserve(samples.size() + proxies.size());
  int id = 0;
  for (std::size_t i = 0; i < samples.size(); ++i)
    snap.entities.push_back({samples[i], labels[i], EntityKind::Sample, id++});
  if (proxies_per_class > 0) {
    for (int c = 0; c < num_classes; ++c)
      for (int k = 0; k < proxies_per_class; ++k)
        snap.entities.push_back(
            {proxies[static_cast<std::size_t>(c) * proxies_per_class + k], c, EntityKind::Proxy, id++});
  }
  snap.sort_and_validate();
  return snap;
}

// Single-class snapshot over bare points; used by the field checks where the
// probe point is not itself a member of the snapshot.
inline ChargeSnapshot points_snapshot(const std::vector<Vec>& points, int class_id = 0,
                                      int num_classes = 1) {
  std::vector<int> labels(points.size(), class_id);
  return make_snapshot(points, labels, num_classes, {}, 0);
}

}  // namespace pf
