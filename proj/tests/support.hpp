#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "recseg/core.hpp"

namespace recseg::test {

inline double urand(std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

inline std::int32_t irand(std::mt19937_64& rng, std::int32_t n) {
  return static_cast<std::int32_t>(rng() % static_cast<std::uint64_t>(n));
}

struct RandomInstance {
  TemporalGraph graph;
  Partition partition;
  Segmentation segmentation;
  LevelMapping levels;
  LambdaTensor lambda;
};

inline TemporalGraph random_graph(std::mt19937_64& rng, std::int32_t n,
                                  std::size_t m) {
  std::vector<Edge> edges;
  for (std::size_t e = 0; e < m; ++e) {
    std::int32_t u = irand(rng, n);
    std::int32_t v = irand(rng, n - 1);
    if (v >= u) ++v;
    edges.push_back(Edge{u, v, urand(rng)});
  }
  return TemporalGraph::from_edges(std::move(edges), n);
}

inline Partition random_partition(std::mt19937_64& rng, std::int32_t n,
                                  std::int32_t R) {
  std::vector<std::int32_t> assign(static_cast<std::size_t>(n));
  for (std::int32_t u = 0; u < n; ++u)
    assign[static_cast<std::size_t>(u)] = u < R ? u : irand(rng, R);
  return make_partition(std::move(assign), R);
}

inline Segmentation random_segmentation(std::mt19937_64& rng,
                                        const TemporalGraph& g, std::int32_t K) {
  // K-1 distinct interior break runs, plus the final run
  const std::size_t nruns = g.num_runs();
  std::vector<std::size_t> runs(nruns - 1);
  for (std::size_t i = 0; i + 1 < nruns; ++i) runs[i] = i;
  for (std::size_t i = runs.size(); i > 1; --i)
    std::swap(runs[i - 1], runs[static_cast<std::size_t>(rng() % i)]);
  runs.resize(static_cast<std::size_t>(K - 1));
  runs.push_back(nruns - 1);
  std::sort(runs.begin(), runs.end());
  std::vector<std::size_t> last_edges;
  for (std::size_t r : runs) last_edges.push_back(g.run_ends()[r]);
  return segmentation_from_breaks(g, last_edges);
}

inline LevelMapping random_levels(std::mt19937_64& rng, std::int32_t K,
                                  std::int32_t H) {
  LevelMapping lv;
  lv.H = H;
  for (std::int32_t k = 0; k < K; ++k)
    lv.level.push_back(k < H ? k : irand(rng, H));
  return lv;
}

inline LambdaTensor random_lambda(std::mt19937_64& rng, std::int32_t R,
                                  std::int32_t H, double lo = 0.2,
                                  double hi = 2.0) {
  LambdaTensor lambda(R, H);
  for (std::int32_t i = 0; i < R; ++i)
    for (std::int32_t j = i; j < R; ++j)
      for (std::int32_t h = 0; h < H; ++h)
        lambda.set(i, j, h, urand(rng, lo, hi));
  return lambda;
}

inline RandomInstance random_instance(std::mt19937_64& rng, std::int32_t n,
                                      std::size_t m, std::int32_t R,
                                      std::int32_t K, std::int32_t H) {
  RandomInstance inst{random_graph(rng, n, m), {}, {}, {}, {}};
  inst.partition = random_partition(rng, n, R);
  inst.segmentation = random_segmentation(rng, inst.graph, K);
  inst.levels = random_levels(rng, K, H);
  inst.lambda = random_lambda(rng, R, H);
  return inst;
}

/// Independent oracle: the per-pair, per-segment triple sum of the
/// Poisson segment log-likelihoods, straight from the definitions.
inline double brute_force_loglik(const TemporalGraph& g, const Partition& p,
                                 const Segmentation& seg,
                                 const LevelMapping& levels,
                                 const LambdaTensor& lambda) {
  double total = 0.0;
  for (std::int32_t u = 0; u < g.num_nodes(); ++u)
    for (std::int32_t v = u + 1; v < g.num_nodes(); ++v) {
      const std::int32_t i = p.assign[static_cast<std::size_t>(u)];
      const std::int32_t j = p.assign[static_cast<std::size_t>(v)];
      for (std::size_t k = 0; k < seg.intervals.size(); ++k) {
        const auto c = static_cast<std::int64_t>(
            count_edges(g, u, v, seg.intervals[k]));
        const double ll = poisson_loglik(c, lambda(i, j, levels.level[k]),
                                         seg.intervals[k].duration());
        if (ll == neg_inf) return neg_inf;
        total += ll;
      }
    }
  return total;
}

}  // namespace recseg::test
