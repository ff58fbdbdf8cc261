#pragma once

#include "recseg/core.hpp"

namespace recseg {

/// Per-level durations and edge -> segment/level lookup shared by a
/// group-reassignment sweep.
struct LevelAggregates {
  std::vector<double> duration;          // per level, sums to |D|
  std::vector<std::int32_t> seg_of_edge;
  std::vector<std::int32_t> level_of_edge;
};

LevelAggregates make_level_aggregates(const TemporalGraph& g,
                                      const Segmentation& seg,
                                      const LevelMapping& levels);

/// Log-likelihood gain (up to a shared constant) of moving node u into each
/// candidate group, with all other assignments fixed.
std::vector<double> node_gains(std::int32_t u, const TemporalGraph& g,
                               const Partition& p, const LambdaTensor& lambda,
                               const LevelAggregates& agg);

/// One greedy sweep over nodes in index order, moving each to its best
/// group for the fixed rates, segmentation, and level mapping.
/// O(m + Rn + R^2 H + K).
Partition find_groups(const TemporalGraph& g, const Partition& p,
                      const LambdaTensor& lambda, const Segmentation& seg,
                      const LevelMapping& levels);

}  // namespace recseg
