#include "recseg/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

namespace recseg {

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Exact Poisson sampling: Knuth for small means, additivity for large ones.
std::int64_t sample_poisson(std::mt19937_64& rng, double mu) {
  if (mu <= 0.0) return 0;
  if (mu > 30.0) return sample_poisson(rng, mu / 2) + sample_poisson(rng, mu / 2);
  const double limit = std::exp(-mu);
  double prod = 1.0;
  std::int64_t k = -1;
  do {
    ++k;
    prod *= uniform01(rng);
  } while (prod > limit);
  return k;
}

std::vector<std::int32_t> random_groups(std::mt19937_64& rng, std::int32_t n,
                                        std::int32_t R) {
  std::vector<std::int32_t> assign(static_cast<std::size_t>(n));
  for (auto& a : assign)
    a = static_cast<std::int32_t>(rng() % static_cast<std::uint64_t>(R));
  return assign;
}

}  // namespace

GroundTruth generate(const GenParams& params) {
  if (params.H < 1 || params.H > params.K || params.R < 1 || params.n < 2)
    throw std::invalid_argument("bad generator parameters");
  if (params.rate_lo <= 0.0 || params.rate_hi < params.rate_lo)
    throw std::invalid_argument("rate range must be positive");
  if (params.seg_duration <= 0.0)
    throw std::invalid_argument("segment duration must be positive");

  // group assignment; retry on an empty group so the truth stays well-posed
  std::mt19937_64 rng(params.seed);
  std::vector<std::int32_t> assign;
  for (std::int32_t attempt = 0;; ++attempt) {
    if (attempt >= 10)
      throw std::runtime_error("could not draw a partition without empty groups");
    rng.seed(params.seed + static_cast<std::uint64_t>(attempt));
    assign = random_groups(rng, params.n, params.R);
    std::vector<bool> seen(static_cast<std::size_t>(params.R), false);
    for (std::int32_t a : assign) seen[static_cast<std::size_t>(a)] = true;
    if (std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) break;
  }
  Partition partition = make_partition(assign, params.R);

  LambdaTensor lambda(params.R, params.H);
  for (std::int32_t i = 0; i < params.R; ++i)
    for (std::int32_t j = i; j < params.R; ++j)
      for (std::int32_t h = 0; h < params.H; ++h)
        lambda.set(i, j, h,
                   params.rate_lo + (params.rate_hi - params.rate_lo) * uniform01(rng));

  // identity on the first H segments, the rest drawn uniformly
  LevelMapping levels;
  levels.H = params.H;
  levels.level.resize(static_cast<std::size_t>(params.K));
  for (std::int32_t k = 0; k < params.K; ++k)
    levels.level[static_cast<std::size_t>(k)] =
        k < params.H ? k
                     : static_cast<std::int32_t>(rng() % static_cast<std::uint64_t>(params.H));

  Segmentation seg;
  for (std::int32_t k = 0; k < params.K; ++k)
    seg.intervals.push_back(TimeInterval{params.seg_duration * k,
                                         params.seg_duration * (k + 1), k == 0});

  std::vector<Edge> edges;
  for (std::int32_t u = 0; u < params.n; ++u)
    for (std::int32_t v = u + 1; v < params.n; ++v) {
      const std::int32_t i = assign[static_cast<std::size_t>(u)];
      const std::int32_t j = assign[static_cast<std::size_t>(v)];
      for (std::int32_t k = 0; k < params.K; ++k) {
        const double rate = lambda(i, j, levels.level[static_cast<std::size_t>(k)]);
        const std::int64_t count =
            sample_poisson(rng, rate * seg.intervals[static_cast<std::size_t>(k)].duration());
        for (std::int64_t c = 0; c < count; ++c) {
          const double lo = seg.intervals[static_cast<std::size_t>(k)].lo;
          const double hi = seg.intervals[static_cast<std::size_t>(k)].hi;
          edges.push_back(Edge{u, v, lo + (hi - lo) * uniform01(rng)});
        }
      }
    }
  if (edges.empty()) throw std::runtime_error("generator produced no edges");

  const TimeInterval window{0.0, params.seg_duration * params.K, true};
  TemporalGraph graph = TemporalGraph::from_edges(std::move(edges), params.n, window);
  std::vector<std::string> labels(static_cast<std::size_t>(params.n));
  for (std::int32_t u = 0; u < params.n; ++u)
    labels[static_cast<std::size_t>(u)] = std::to_string(u);
  graph.set_labels(std::move(labels));

  // derive last-edge positions for the planted boundaries
  const auto edge_seg = segment_of_edges(graph, seg);
  seg.last_edge.assign(static_cast<std::size_t>(params.K), 0);
  for (std::size_t e = 0; e < graph.num_edges(); ++e)
    seg.last_edge[static_cast<std::size_t>(edge_seg[e])] = e;
  for (std::size_t k = 1; k < seg.last_edge.size(); ++k)
    if (seg.last_edge[k] < seg.last_edge[k - 1]) seg.last_edge[k] = seg.last_edge[k - 1];

  GroundTruth gt{std::move(graph), Model{}, params};
  gt.model.partition = std::move(partition);
  gt.model.segmentation = std::move(seg);
  gt.model.levels = std::move(levels);
  gt.model.lambda = std::move(lambda);
  gt.model.loglik = model_loglik(gt.graph, gt.model.partition, gt.model.segmentation,
                                 gt.model.levels, gt.model.lambda);
  gt.model.normalized_loglik = normalized_loglik(gt.graph, gt.model.loglik);
  gt.model.converged = true;
  return gt;
}

double rand_index(const Partition& a, const Partition& b) {
  const std::size_t n = a.assign.size();
  if (n != b.assign.size()) throw std::invalid_argument("partition size mismatch");
  if (n < 2) throw std::invalid_argument("rand index needs at least two nodes");

  auto choose2 = [](std::int64_t x) { return x * (x - 1) / 2; };
  std::vector<std::int64_t> contingency(
      static_cast<std::size_t>(a.R) * static_cast<std::size_t>(b.R), 0);
  for (std::size_t u = 0; u < n; ++u)
    ++contingency[static_cast<std::size_t>(a.assign[u]) * b.R +
                  static_cast<std::size_t>(b.assign[u])];

  std::int64_t same_both = 0;
  for (std::int64_t c : contingency) same_both += choose2(c);
  std::int64_t same_a = 0;
  for (std::int64_t s : a.sizes) same_a += choose2(s);
  std::int64_t same_b = 0;
  for (std::int64_t s : b.sizes) same_b += choose2(s);

  const std::int64_t total = choose2(static_cast<std::int64_t>(n));
  const std::int64_t agree = total + 2 * same_both - same_a - same_b;
  return static_cast<double>(agree) / static_cast<double>(total);
}

std::vector<std::pair<TimeInterval, double>> intensity_steps(const Model& m,
                                                             std::int32_t i,
                                                             std::int32_t j) {
  std::vector<std::pair<TimeInterval, double>> out;
  for (std::size_t k = 0; k < m.segmentation.intervals.size(); ++k)
    out.emplace_back(m.segmentation.intervals[k],
                     m.lambda(i, j, m.levels.level[k]));
  return out;
}

std::vector<std::pair<double, double>> intensity_trace(const Model& m,
                                                       std::int32_t i,
                                                       std::int32_t j,
                                                       std::int32_t n_points) {
  if (n_points < 2) throw std::invalid_argument("need at least two grid points");
  const auto steps = intensity_steps(m, i, j);
  const double lo = steps.front().first.lo;
  const double hi = steps.back().first.hi;
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(n_points));
  std::size_t k = 0;
  for (std::int32_t p = 0; p < n_points; ++p) {
    const double t = lo + (hi - lo) * p / (n_points - 1);
    while (k + 1 < steps.size() && t > steps[k].first.hi) ++k;
    out.emplace_back(t, steps[k].second);
  }
  return out;
}

namespace {

// true group -> fitted group, by largest node overlap
std::vector<std::int32_t> match_groups(const Partition& truth, const Partition& fitted) {
  std::vector<std::int64_t> contingency(
      static_cast<std::size_t>(truth.R) * static_cast<std::size_t>(fitted.R), 0);
  for (std::size_t u = 0; u < truth.assign.size(); ++u)
    ++contingency[static_cast<std::size_t>(truth.assign[u]) * fitted.R +
                  static_cast<std::size_t>(fitted.assign[u])];
  std::vector<std::int32_t> map(static_cast<std::size_t>(truth.R), 0);
  for (std::int32_t i = 0; i < truth.R; ++i) {
    std::int64_t best = -1;
    for (std::int32_t j = 0; j < fitted.R; ++j) {
      const std::int64_t c = contingency[static_cast<std::size_t>(i) * fitted.R +
                                         static_cast<std::size_t>(j)];
      if (c > best) {
        best = c;
        map[static_cast<std::size_t>(i)] = j;
      }
    }
  }
  return map;
}

double step_value(const std::vector<std::pair<TimeInterval, double>>& steps, double t) {
  std::size_t k = 0;
  while (k + 1 < steps.size() && t > steps[k].first.hi) ++k;
  return steps[k].second;
}

}  // namespace

RecoveryReport recover(const GroundTruth& gt, FitConfig cfg) {
  cfg.R = gt.params.R;
  cfg.K = gt.params.K;
  cfg.H = gt.params.H;
  auto [model, traces] = fit_restarts(gt.graph, cfg);

  RecoveryReport report;
  report.rand = rand_index(gt.model.partition, model.partition);
  report.fit_norm_ll = model.normalized_loglik;
  report.truth_norm_ll = gt.model.normalized_loglik;
  report.iterations = model.iterations;

  const auto map = match_groups(gt.model.partition, model.partition);
  const double lo = gt.graph.window().lo;
  const double hi = gt.graph.window().hi;
  constexpr std::int32_t grid = 2000;
  double gap = 0.0;
  for (std::int32_t i = 0; i < gt.params.R; ++i)
    for (std::int32_t j = i; j < gt.params.R; ++j) {
      const auto truth_steps = intensity_steps(gt.model, i, j);
      const auto fit_steps = intensity_steps(
          model, map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)]);
      for (std::int32_t p = 0; p < grid; ++p) {
        const double t = lo + (hi - lo) * p / (grid - 1);
        gap = std::max(gap, std::abs(step_value(truth_steps, t) -
                                     step_value(fit_steps, t)));
      }
    }
  report.max_rate_gap = gap;
  report.model = std::move(model);
  return report;
}

std::vector<std::pair<std::int32_t, double>> sweep_h(
    const TemporalGraph& g, std::int32_t R, std::int32_t K,
    const std::vector<std::int32_t>& h_values, FitConfig cfg) {
  cfg.R = R;
  cfg.K = K;
  std::vector<std::pair<std::int32_t, double>> out;
  for (std::int32_t h : h_values) {
    FitConfig local = cfg;
    local.H = h;
    auto [model, traces] = fit_restarts(g, local);
    out.emplace_back(h, model.normalized_loglik);
  }
  return out;
}

std::vector<BenchRow> bench_scaling(const std::vector<GenParams>& sizes,
                                    FitConfig cfg,
                                    const std::vector<std::string>& engines) {
  std::vector<BenchRow> rows;
  for (const GenParams& params : sizes) {
    const GroundTruth gt = generate(params);
    for (const std::string& engine : engines) {
      FitConfig local = cfg;
      local.R = params.R;
      local.K = params.K;
      local.H = params.H;
      local.naive_dp = engine == "naive";
      local.restarts = 1;
      std::vector<double> times;
      for (int run = 0; run < 3; ++run) {
        const auto start = std::chrono::steady_clock::now();
        (void)fit(gt.graph, local);
        times.push_back(
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count());
      }
      std::sort(times.begin(), times.end());
      rows.push_back(BenchRow{engine, gt.graph.num_edges(), times[1]});
    }
  }
  return rows;
}

}  // namespace recseg
