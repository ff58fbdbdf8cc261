#pragma once

#include <string>
#include <utility>
#include <vector>

#include "recseg/core.hpp"
#include "recseg/estimation.hpp"

namespace recseg {

struct GenParams {
  std::int32_t n = 60;
  std::int32_t R = 3;
  std::int32_t K = 4;
  std::int32_t H = 3;
  double rate_lo = 0.05;
  double rate_hi = 0.7;
  double seg_duration = 100.0;
  std::uint64_t seed = 0;
};

struct GroundTruth {
  TemporalGraph graph;
  Model model;
  GenParams params;
};

/// Synthetic temporal network with planted groups, segmentation, level
/// mapping, and rates. Levels are the identity on the first H segments;
/// events are homogeneous Poisson per node pair per segment.
GroundTruth generate(const GenParams& params);

/// Fraction of node pairs co-grouped in both or separated in both.
double rand_index(const Partition& a, const Partition& b);

/// Rate between groups i and j as a step function: one (interval, rate)
/// entry per segment.
std::vector<std::pair<TimeInterval, double>> intensity_steps(const Model& m,
                                                             std::int32_t i,
                                                             std::int32_t j);

/// The same step function sampled on a uniform grid over the window.
std::vector<std::pair<double, double>> intensity_trace(const Model& m,
                                                       std::int32_t i,
                                                       std::int32_t j,
                                                       std::int32_t n_points);

struct RecoveryReport {
  double rand = 0.0;
  double fit_norm_ll = 0.0;
  double truth_norm_ll = 0.0;
  double max_rate_gap = 0.0;
  std::int32_t iterations = 0;
  Model model;
};

/// Fit the generated graph and compare against the planted structures.
RecoveryReport recover(const GroundTruth& gt, FitConfig cfg);

/// Best-of-restarts normalized log-likelihood for each level count.
std::vector<std::pair<std::int32_t, double>> sweep_h(
    const TemporalGraph& g, std::int32_t R, std::int32_t K,
    const std::vector<std::int32_t>& h_values, FitConfig cfg);

struct BenchRow {
  std::string engine;
  std::size_t m = 0;
  double seconds = 0.0;
};

/// Wall-clock fit time (median of 3) per instance size and engine.
std::vector<BenchRow> bench_scaling(const std::vector<GenParams>& sizes,
                                    FitConfig cfg,
                                    const std::vector<std::string>& engines);

}  // namespace recseg
