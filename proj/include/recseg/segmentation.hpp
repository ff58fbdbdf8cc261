#pragma once

#include "recseg/core.hpp"

namespace recseg {

/// Prefix log-likelihood scores over admissible breakpoints (runs of equal
/// timestamps). f(r, h) is the log-likelihood of the segment from the start
/// of the window through run r, priced with level-h rates.
struct PrefixScores {
  std::size_t nruns = 0;
  std::int32_t H = 0;
  std::vector<double> f;         // nruns x H, row-major
  std::vector<double> alpha;     // per level: sum over blocks of pairs * lambda
  std::vector<double> run_time;  // timestamp of each run

  double at(std::size_t run, std::int32_t h) const {
    return f[run * static_cast<std::size_t>(H) + static_cast<std::size_t>(h)];
  }
  /// Log-likelihood of the segment (t(run s), t(run e)] at level h.
  double segment_score(std::size_t s, std::size_t e, std::int32_t h) const {
    const double fe = at(e, h), fs = at(s, h);
    if (fe == neg_inf) return neg_inf;
    if (fs == neg_inf) return neg_inf;
    return fe - fs;
  }
};

PrefixScores precompute_prefix(const TemporalGraph& g, const Partition& p,
                               const LambdaTensor& lambda);

struct SegmentResult {
  Segmentation segmentation;
  LevelMapping levels;
  double loglik = 0.0;
};

/// Optimal (segmentation, level mapping) for fixed partition and rates,
/// via a dynamic program with SMAWK row selection. O(mKH + HR^2).
SegmentResult find_segments(const TemporalGraph& g, const Partition& p,
                            const LambdaTensor& lambda, std::int32_t K,
                            std::int32_t H);

/// Same optimum via the direct quadratic dynamic program; oracle for tests.
SegmentResult find_segments_naive(const TemporalGraph& g, const Partition& p,
                                  const LambdaTensor& lambda, std::int32_t K,
                                  std::int32_t H);

}  // namespace recseg
