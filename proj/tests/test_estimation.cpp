#include <doctest.h>

#include <cmath>
#include <random>

#include "recseg/estimation.hpp"
#include "recseg/model_io.hpp"
#include "support.hpp"

using namespace recseg;

TEST_CASE("update_lambda recovers the per-block rate") {
  // 6 edges between groups of sizes 2 and 3, one level of total duration 2
  std::vector<Edge> edges;
  for (int x = 0; x < 6; ++x)
    edges.push_back(Edge{static_cast<std::int32_t>(x % 2),
                         static_cast<std::int32_t>(2 + x % 3), 0.1 + 0.3 * x});
  const TemporalGraph g =
      TemporalGraph::from_edges(std::move(edges), 5, TimeInterval{0.0, 2.0, true});
  const Partition p = make_partition({0, 0, 1, 1, 1}, 2);
  const Segmentation seg = segmentation_from_breaks(g, {g.num_edges() - 1});
  const LevelMapping levels{{0}, 1};
  const LambdaTensor lambda = update_lambda(g, p, seg, levels, 0.0, 0.0);
  CHECK(lambda(0, 1, 0) == doctest::Approx(0.5));   // 6 / (6 * 2)
  CHECK(lambda(0, 0, 0) == doctest::Approx(0.0));   // zero edges, theta = 0
  const LambdaTensor smoothed = update_lambda(g, p, seg, levels, 1e-3, 1e-3);
  CHECK(smoothed(1, 1, 0) == doctest::Approx(1e-3 / (6.0 + 1e-3)));
}

TEST_CASE("update_lambda output maximizes the likelihood per entry") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = test::random_instance(rng, 6, 40, 2, 3, 2);
    const LambdaTensor mle = update_lambda(inst.graph, inst.partition,
                                           inst.segmentation, inst.levels, 0.0, 0.0);
    const double at_opt = model_loglik(inst.graph, inst.partition,
                                       inst.segmentation, inst.levels, mle);
    for (std::int32_t i = 0; i < 2; ++i)
      for (std::int32_t j = i; j < 2; ++j)
        for (std::int32_t h = 0; h < 2; ++h)
          for (double factor : {0.999, 1.001}) {
            LambdaTensor perturbed = mle;
            perturbed.set(i, j, h, mle(i, j, h) * factor);
            CHECK(model_loglik(inst.graph, inst.partition, inst.segmentation,
                               inst.levels, perturbed) <= at_opt + 1e-12);
          }
  }
}

TEST_CASE("trivial configuration converges to the baseline model") {
  std::mt19937_64 rng(5);
  const TemporalGraph g = test::random_graph(rng, 6, 50);
  FitConfig cfg;
  cfg.R = 1;
  cfg.K = 1;
  cfg.H = 1;
  cfg.theta = 0.0;
  cfg.eta = 0.0;
  cfg.restarts = 1;
  auto [model, trace] = fit(g, cfg);
  CHECK(model.converged);
  CHECK(model.iterations == 1);
  CHECK(model.loglik == doctest::Approx(baseline_loglik(g)).epsilon(1e-12));
  CHECK(model.normalized_loglik == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fit trace ascends with smoothing off") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const TemporalGraph g = test::random_graph(rng, 8, 60);
    FitConfig cfg;
    cfg.R = 2;
    cfg.K = 3;
    cfg.H = 2;
    cfg.theta = 0.0;
    cfg.eta = 0.0;
    cfg.restarts = 1;
    cfg.seed = static_cast<std::uint64_t>(trial);
    auto [model, trace] = fit(g, cfg);
    for (std::size_t s = 1; s < trace.steps.size(); ++s) {
      const double prev = trace.steps[s - 1].loglik;
      CHECK(trace.steps[s].loglik >= prev - 1e-9 * std::abs(prev));
    }
    CHECK(model.iterations <= cfg.max_iters);
  }
}

TEST_CASE("model loglik field matches recomputation") {
  std::mt19937_64 rng(11);
  const TemporalGraph g = test::random_graph(rng, 8, 80);
  FitConfig cfg;
  cfg.R = 2;
  cfg.K = 3;
  cfg.H = 2;
  cfg.restarts = 2;
  auto [model, traces] = fit_restarts(g, cfg);
  const double recomputed = model_loglik(g, model.partition, model.segmentation,
                                         model.levels, model.lambda);
  CHECK(model.loglik ==
        doctest::Approx(recomputed).epsilon(1e-9));
}

TEST_CASE("restarts: one restart equals a plain fit, more can only help") {
  std::mt19937_64 rng(13);
  const TemporalGraph g = test::random_graph(rng, 8, 70);
  FitConfig cfg;
  cfg.R = 2;
  cfg.K = 3;
  cfg.H = 2;
  cfg.seed = 9;
  cfg.restarts = 1;
  auto [single, t1] = fit_restarts(g, cfg);
  auto [direct, t2] = fit(g, cfg);
  CHECK(single.loglik == direct.loglik);
  CHECK(single.partition.assign == direct.partition.assign);

  cfg.restarts = 5;
  auto [multi, t5] = fit_restarts(g, cfg);
  CHECK(multi.loglik >= single.loglik);
}

TEST_CASE("same seed gives bit-identical serialized models") {
  std::mt19937_64 rng(17);
  const TemporalGraph g = test::random_graph(rng, 7, 60);
  FitConfig cfg;
  cfg.R = 2;
  cfg.K = 3;
  cfg.H = 2;
  cfg.restarts = 3;
  cfg.seed = 123;
  auto [m1, t1] = fit_restarts(g, cfg);
  auto [m2, t2] = fit_restarts(g, cfg);
  ModelFile f1{m1, g.labels(), g.num_edges(), cfg.seed, {}};
  ModelFile f2{m2, g.labels(), g.num_edges(), cfg.seed, {}};
  CHECK(to_json(f1).dump() == to_json(f2).dump());
}

TEST_CASE("H=K fits at least as well as fewer levels") {
  std::mt19937_64 rng(19);
  const TemporalGraph g = test::random_graph(rng, 10, 120);
  FitConfig cfg;
  cfg.R = 2;
  cfg.K = 4;
  cfg.restarts = 5;
  cfg.seed = 5;
  cfg.H = 4;
  auto [full, tf] = fit_restarts(g, cfg);
  cfg.H = 2;
  auto [constrained, tc] = fit_restarts(g, cfg);
  CHECK(full.loglik >= constrained.loglik - 1e-6 * std::abs(constrained.loglik));
}

TEST_CASE("invalid configurations are rejected") {
  FitConfig cfg;
  cfg.H = 3;
  cfg.K = 2;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = FitConfig{};
  cfg.tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
