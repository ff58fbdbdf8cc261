#include "recseg/estimation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <thread>

#include "recseg/grouping.hpp"
#include "recseg/segmentation.hpp"

namespace recseg {

namespace {

// cap applied when a level has zero total duration but observed events;
// keeps the likelihood finite and the ascent direction intact
constexpr double kRateCap = 1e12;

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::int32_t env_thread_cap() {
  if (const char* s = std::getenv("RECSEG_THREADS")) {
    const long v = std::strtol(s, nullptr, 10);
    if (v >= 1) return static_cast<std::int32_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<std::int32_t>(hw) : 1;
}

void floor_lambda(LambdaTensor& lambda, double floor) {
  if (floor <= 0.0) return;
  for (double& v : lambda.data())
    if (v < floor) v = floor;
}

double global_rate(const TemporalGraph& g) {
  const double n = static_cast<double>(g.num_nodes());
  const double pairs = n * (n - 1) / 2.0;
  return static_cast<double>(g.num_edges()) / (pairs * g.window().duration());
}

}  // namespace

void FitConfig::validate() const {
  if (R < 1) throw std::invalid_argument("R must be >= 1");
  if (K < 1 || H < 1 || H > K) throw std::invalid_argument("need 1 <= H <= K");
  if (theta < 0.0 || eta < 0.0) throw std::invalid_argument("smoothing must be >= 0");
  if (tol <= 0.0) throw std::invalid_argument("tol must be > 0");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  if (lambda_init_lo <= 0.0 || lambda_init_hi < lambda_init_lo)
    throw std::invalid_argument("bad lambda init range");
}

LambdaTensor update_lambda(const TemporalGraph& g, const Partition& p,
                           const Segmentation& seg, const LevelMapping& levels,
                           double theta, double eta) {
  const std::int32_t R = p.R;
  const std::int32_t H = levels.H;
  std::vector<double> dur(static_cast<std::size_t>(H), 0.0);
  for (std::size_t k = 0; k < seg.intervals.size(); ++k)
    dur[static_cast<std::size_t>(levels.level[k])] += seg.intervals[k].duration();

  const std::size_t npairs = static_cast<std::size_t>(R) * (R + 1) / 2;
  std::vector<std::int64_t> cnt(npairs * static_cast<std::size_t>(H), 0);
  auto pair_rank = [R](std::int32_t i, std::int32_t j) {
    if (i > j) std::swap(i, j);
    return static_cast<std::size_t>(i) * R - static_cast<std::size_t>(i) * (i + 1) / 2 + j;
  };
  const auto edge_seg = segment_of_edges(g, seg);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const std::int32_t i = p.assign[static_cast<std::size_t>(g.edge(e).u)];
    const std::int32_t j = p.assign[static_cast<std::size_t>(g.edge(e).v)];
    const std::int32_t h = levels.level[static_cast<std::size_t>(edge_seg[e])];
    ++cnt[pair_rank(i, j) * H + static_cast<std::size_t>(h)];
  }

  LambdaTensor lambda(R, H);
  for (std::int32_t i = 0; i < R; ++i)
    for (std::int32_t j = i; j < R; ++j) {
      const double pairs = static_cast<double>(pair_count(p, i, j));
      for (std::int32_t h = 0; h < H; ++h) {
        const double numer =
            static_cast<double>(cnt[pair_rank(i, j) * H + static_cast<std::size_t>(h)]) +
            theta;
        const double denom = pairs * dur[static_cast<std::size_t>(h)] + eta;
        double rate;
        if (denom > 0.0) {
          rate = numer / denom;
        } else {
          rate = numer > 0.0 ? kRateCap : 0.0;
        }
        lambda.set(i, j, h, std::min(rate, kRateCap));
      }
    }
  return lambda;
}

std::pair<Model, FitTrace> fit(const TemporalGraph& g, const FitConfig& cfg) {
  cfg.validate();
  const auto t_start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(cfg.seed);

  // random groups
  std::vector<std::int32_t> assign(static_cast<std::size_t>(g.num_nodes()));
  for (auto& a : assign)
    a = static_cast<std::int32_t>(rng() % static_cast<std::uint64_t>(cfg.R));
  Partition p = make_partition(std::move(assign), cfg.R);

  // random rates scaled to the global event rate
  const double scale = global_rate(g);
  LambdaTensor lambda(cfg.R, cfg.H);
  for (std::int32_t i = 0; i < cfg.R; ++i)
    for (std::int32_t j = i; j < cfg.R; ++j)
      for (std::int32_t h = 0; h < cfg.H; ++h) {
        const double mult =
            cfg.lambda_init_lo + (cfg.lambda_init_hi - cfg.lambda_init_lo) * uniform01(rng);
        lambda.set(i, j, h, mult * scale);
      }
  floor_lambda(lambda, cfg.lambda_floor);

  auto segments = [&](const Partition& part, const LambdaTensor& rates) {
    return cfg.naive_dp ? find_segments_naive(g, part, rates, cfg.K, cfg.H)
                        : find_segments(g, part, rates, cfg.K, cfg.H);
  };

  FitTrace trace;
  SegmentResult sr = segments(p, lambda);
  sr.levels.H = cfg.H;
  trace.steps.push_back({StepKind::Segments, sr.loglik});

  lambda = update_lambda(g, p, sr.segmentation, sr.levels, cfg.theta, cfg.eta);
  floor_lambda(lambda, cfg.lambda_floor);
  double loglik = model_loglik(g, p, sr.segmentation, sr.levels, lambda);
  trace.steps.push_back({StepKind::Lambda, loglik});

  bool converged = false;
  std::int32_t iter = 0;
  while (iter < cfg.max_iters) {
    ++iter;
    const double prev = loglik;

    p = find_groups(g, p, lambda, sr.segmentation, sr.levels);
    trace.steps.push_back(
        {StepKind::Groups, model_loglik(g, p, sr.segmentation, sr.levels, lambda)});

    lambda = update_lambda(g, p, sr.segmentation, sr.levels, cfg.theta, cfg.eta);
    floor_lambda(lambda, cfg.lambda_floor);
    trace.steps.push_back(
        {StepKind::Lambda, model_loglik(g, p, sr.segmentation, sr.levels, lambda)});

    sr = segments(p, lambda);
    sr.levels.H = cfg.H;
    trace.steps.push_back({StepKind::Segments, sr.loglik});

    lambda = update_lambda(g, p, sr.segmentation, sr.levels, cfg.theta, cfg.eta);
    floor_lambda(lambda, cfg.lambda_floor);
    loglik = model_loglik(g, p, sr.segmentation, sr.levels, lambda);
    trace.steps.push_back({StepKind::Lambda, loglik});

    if (std::abs(loglik - prev) < cfg.tol * std::max(1.0, std::abs(loglik))) {
      converged = true;
      break;
    }
  }

  trace.iterations = iter;
  trace.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

  Model model;
  model.partition = std::move(p);
  model.segmentation = std::move(sr.segmentation);
  model.levels = std::move(sr.levels);
  model.lambda = std::move(lambda);
  model.loglik = loglik;
  model.normalized_loglik = normalized_loglik(g, loglik);
  model.iterations = iter;
  model.converged = converged;
  return {std::move(model), std::move(trace)};
}

std::pair<Model, std::vector<FitTrace>> fit_restarts(const TemporalGraph& g,
                                                     const FitConfig& cfg) {
  cfg.validate();
  const std::int32_t n = cfg.restarts;
  std::vector<Model> models(static_cast<std::size_t>(n));
  std::vector<FitTrace> traces(static_cast<std::size_t>(n));

  const std::int32_t workers = std::min(n, env_thread_cap());
  std::vector<std::thread> pool;
  std::atomic<std::int32_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::int32_t i = next.fetch_add(1);
      if (i >= n) return;
      FitConfig local = cfg;
      local.seed = cfg.seed + static_cast<std::uint64_t>(i);
      auto [model, trace] = fit(g, local);
      models[static_cast<std::size_t>(i)] = std::move(model);
      traces[static_cast<std::size_t>(i)] = std::move(trace);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    pool.reserve(static_cast<std::size_t>(workers));
    for (std::int32_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < models.size(); ++i)
    if (models[i].loglik > models[best].loglik) best = i;
  return {std::move(models[best]), std::move(traces)};
}

}  // namespace recseg
