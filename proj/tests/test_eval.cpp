#include <doctest.h>

#include <cmath>
#include <random>

#include "recseg/eval.hpp"
#include "support.hpp"

using namespace recseg;

TEST_CASE("generate with H=K uses the identity level mapping") {
  GenParams params;
  params.n = 12;
  params.R = 2;
  params.K = 3;
  params.H = 3;
  params.rate_lo = 0.5;
  params.rate_hi = 1.5;
  params.seg_duration = 2.0;
  params.seed = 1;
  const GroundTruth gt = generate(params);
  CHECK(gt.model.levels.level == std::vector<std::int32_t>{0, 1, 2});
}

TEST_CASE("generate is deterministic and well-formed") {
  GenParams params;
  params.n = 15;
  params.R = 3;
  params.K = 4;
  params.H = 2;
  params.seg_duration = 1.5;
  params.rate_lo = 0.3;
  params.rate_hi = 1.0;
  params.seed = 7;
  const GroundTruth a = generate(params);
  const GroundTruth b = generate(params);
  CHECK(a.graph.num_edges() == b.graph.num_edges());
  for (std::size_t e = 0; e < a.graph.num_edges(); ++e) {
    CHECK(a.graph.edge(e).u == b.graph.edge(e).u);
    CHECK(a.graph.edge(e).t == b.graph.edge(e).t);
  }
  CHECK(a.model.loglik == b.model.loglik);
  // every level appears
  std::vector<bool> seen(2, false);
  for (std::int32_t h : a.model.levels.level) seen[static_cast<std::size_t>(h)] = true;
  CHECK(seen[0]);
  CHECK(seen[1]);
  // no empty groups
  for (std::int64_t s : a.model.partition.sizes) CHECK(s > 0);
  // recorded loglik matches recomputation
  CHECK(a.model.loglik ==
        doctest::Approx(model_loglik(a.graph, a.model.partition,
                                     a.model.segmentation, a.model.levels,
                                     a.model.lambda))
            .epsilon(1e-9));
}

TEST_CASE("empirical block rates sit within three standard errors") {
  GenParams params;
  params.n = 60;
  params.R = 3;
  params.K = 4;
  params.H = 3;
  params.rate_lo = 0.1;
  params.rate_hi = 0.6;
  params.seg_duration = 8.0;
  params.seed = 21;
  const GroundTruth gt = generate(params);
  std::vector<double> dur(3, 0.0);
  for (std::size_t k = 0; k < 4; ++k)
    dur[static_cast<std::size_t>(gt.model.levels.level[k])] +=
        gt.model.segmentation.intervals[k].duration();
  const auto edge_seg = segment_of_edges(gt.graph, gt.model.segmentation);
  for (std::int32_t i = 0; i < 3; ++i)
    for (std::int32_t j = i; j < 3; ++j)
      for (std::int32_t h = 0; h < 3; ++h) {
        std::int64_t cnt = 0;
        for (std::size_t e = 0; e < gt.graph.num_edges(); ++e) {
          const Edge& edge = gt.graph.edge(e);
          const std::int32_t bi =
              gt.model.partition.assign[static_cast<std::size_t>(edge.u)];
          const std::int32_t bj =
              gt.model.partition.assign[static_cast<std::size_t>(edge.v)];
          const std::int32_t lv =
              gt.model.levels.level[static_cast<std::size_t>(edge_seg[e])];
          if (lv == h && std::min(bi, bj) == i && std::max(bi, bj) == j) ++cnt;
        }
        const double exposure =
            static_cast<double>(pair_count(gt.model.partition, i, j)) *
            dur[static_cast<std::size_t>(h)];
        const double lambda = gt.model.lambda(i, j, h);
        const double se = std::sqrt(lambda / exposure);
        CHECK(std::abs(static_cast<double>(cnt) / exposure - lambda) <= 3.0 * se);
      }
}

TEST_CASE("rand index basics") {
  const Partition a = make_partition({0, 0, 1, 1}, 2);
  CHECK(rand_index(a, a) == doctest::Approx(1.0));
  const Partition b = make_partition({0, 1, 0, 1}, 2);
  CHECK(rand_index(a, b) == doctest::Approx(1.0 / 3.0));
  const Partition s1 = make_partition({0, 1, 2}, 3);
  const Partition s2 = make_partition({2, 0, 1}, 3);
  CHECK(rand_index(s1, s2) == doctest::Approx(1.0));
  const Partition tiny = make_partition({0}, 1);
  CHECK_THROWS_AS(rand_index(tiny, tiny), std::invalid_argument);
}

TEST_CASE("rand index is symmetric and relabeling-invariant") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const Partition a = test::random_partition(rng, 10, 3);
    const Partition b = test::random_partition(rng, 10, 3);
    CHECK(rand_index(a, b) == doctest::Approx(rand_index(b, a)));
    Partition relabeled = b;
    for (auto& g : relabeled.assign) g = (g + 1) % 3;
    relabeled = make_partition(relabeled.assign, 3);
    CHECK(rand_index(a, relabeled) == doctest::Approx(rand_index(a, b)));
  }
}

TEST_CASE("intensity traces expose recurrence") {
  std::mt19937_64 rng(15);
  const auto inst = test::random_instance(rng, 6, 40, 2, 3, 2);
  Model m;
  m.partition = inst.partition;
  m.segmentation = inst.segmentation;
  m.levels = LevelMapping{{0, 1, 0}, 2};
  m.lambda = inst.lambda;
  const auto steps = intensity_steps(m, 0, 1);
  CHECK(steps.size() == 3);
  CHECK(steps[0].second == steps[2].second);  // level recurs
  CHECK(steps[0].second == inst.lambda(0, 1, 0));
  CHECK(steps[1].second == inst.lambda(0, 1, 1));

  const auto trace = intensity_trace(m, 0, 1, 101);
  CHECK(trace.front().first == inst.graph.window().lo);
  CHECK(trace.back().first == doctest::Approx(inst.graph.window().hi));
  for (const auto& [t, v] : trace)
    CHECK((v == steps[0].second || v == steps[1].second));
}

TEST_CASE("single segment gives a constant trace") {
  std::mt19937_64 rng(21);
  const auto inst = test::random_instance(rng, 5, 20, 2, 1, 1);
  Model m;
  m.partition = inst.partition;
  m.segmentation = inst.segmentation;
  m.levels = LevelMapping{{0}, 1};
  m.lambda = inst.lambda;
  const auto trace = intensity_trace(m, 1, 1, 17);
  for (const auto& [t, v] : trace) CHECK(v == inst.lambda(1, 1, 0));
}

TEST_CASE("step integral matches the level-aggregated accounting") {
  std::mt19937_64 rng(25);
  const auto inst = test::random_instance(rng, 6, 40, 2, 4, 2);
  Model m;
  m.partition = inst.partition;
  m.segmentation = inst.segmentation;
  m.levels = inst.levels;
  m.lambda = inst.lambda;
  std::vector<double> dur(2, 0.0);
  for (std::size_t k = 0; k < 4; ++k)
    dur[static_cast<std::size_t>(inst.levels.level[k])] +=
        inst.segmentation.intervals[k].duration();
  for (std::int32_t i = 0; i < 2; ++i)
    for (std::int32_t j = i; j < 2; ++j) {
      double integral = 0.0;
      for (const auto& [interval, rate] : intensity_steps(m, i, j))
        integral += interval.duration() * rate;
      double expected = 0.0;
      for (std::int32_t h = 0; h < 2; ++h)
        expected += dur[static_cast<std::size_t>(h)] * inst.lambda(i, j, h);
      CHECK(integral == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("recovery on a small well-separated instance") {
  GenParams params;
  params.n = 30;
  params.R = 2;
  params.K = 3;
  params.H = 2;
  params.rate_lo = 0.1;
  params.rate_hi = 1.2;
  params.seg_duration = 20.0;
  params.seed = 3;
  const GroundTruth gt = generate(params);
  FitConfig cfg;
  cfg.restarts = 3;
  cfg.seed = 1;
  const RecoveryReport report = recover(gt, cfg);
  CHECK(report.rand == doctest::Approx(1.0));
  CHECK(report.fit_norm_ll <= report.truth_norm_ll + 1e-6);
  CHECK(report.fit_norm_ll > 0.0);
  CHECK(report.fit_norm_ll < 1.0);
}

TEST_CASE("sweep over H: more levels never hurt the best fit") {
  GenParams params;
  params.n = 20;
  params.R = 2;
  params.K = 4;
  params.H = 2;
  params.rate_lo = 0.2;
  params.rate_hi = 1.0;
  params.seg_duration = 10.0;
  params.seed = 11;
  const GroundTruth gt = generate(params);
  FitConfig cfg;
  cfg.restarts = 5;
  cfg.seed = 2;
  const auto curve = sweep_h(gt.graph, 2, 4, {1, 4}, cfg);
  REQUIRE(curve.size() == 2);
  CHECK(curve[0].first == 1);
  CHECK(curve[1].first == 4);
  // normalized log-likelihood: smaller is better, H=K has more freedom
  CHECK(curve[1].second <= curve[0].second + 1e-6);
}

TEST_CASE("bench rows come back per engine with increasing m") {
  GenParams base;
  base.n = 10;
  base.R = 2;
  base.K = 2;
  base.H = 2;
  base.rate_lo = 0.5;
  base.rate_hi = 1.0;
  base.seed = 4;
  std::vector<GenParams> sizes;
  for (double d : {1.0, 2.0}) {
    GenParams params = base;
    params.seg_duration = d;
    sizes.push_back(params);
  }
  FitConfig cfg;
  cfg.max_iters = 1;
  cfg.tol = 1e-7;
  const auto rows = bench_scaling(sizes, cfg, {"smawk", "naive"});
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].engine == "smawk");
  CHECK(rows[1].engine == "naive");
  CHECK(rows[0].m == rows[1].m);
  CHECK(rows[2].m > rows[0].m);
  for (const BenchRow& r : rows) CHECK(r.seconds >= 0.0);
}
