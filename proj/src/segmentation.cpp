#include "recseg/segmentation.hpp"

#include <cmath>
#include <stdexcept>

#include "recseg/smawk.hpp"

namespace recseg {

PrefixScores precompute_prefix(const TemporalGraph& g, const Partition& p,
                               const LambdaTensor& lambda) {
  const std::int32_t R = p.R;
  const std::int32_t H = lambda.H();
  if (lambda.R() != R) throw std::invalid_argument("rate tensor shape mismatch");

  PrefixScores ps;
  ps.nruns = g.num_runs();
  ps.H = H;
  ps.f.assign(ps.nruns * static_cast<std::size_t>(H), 0.0);
  ps.alpha.assign(static_cast<std::size_t>(H), 0.0);
  ps.run_time.resize(ps.nruns);
  for (std::size_t r = 0; r < ps.nruns; ++r)
    ps.run_time[r] = g.edge(g.run_ends()[r]).t;

  // log rates per (block pair, level); log 0 = -inf propagates into f
  const std::size_t npairs = static_cast<std::size_t>(R) * (R + 1) / 2;
  std::vector<double> log_rate(npairs * static_cast<std::size_t>(H));
  auto pair_rank = [R](std::int32_t i, std::int32_t j) {
    if (i > j) std::swap(i, j);
    return static_cast<std::size_t>(i) * R - static_cast<std::size_t>(i) * (i + 1) / 2 + j;
  };
  for (std::int32_t i = 0; i < R; ++i)
    for (std::int32_t j = i; j < R; ++j)
      for (std::int32_t h = 0; h < H; ++h) {
        const double l = lambda(i, j, h);
        log_rate[pair_rank(i, j) * H + static_cast<std::size_t>(h)] =
            l > 0.0 ? std::log(l) : neg_inf;
        ps.alpha[static_cast<std::size_t>(h)] +=
            static_cast<double>(pair_count(p, i, j)) * l;
      }

  const double t_min = g.window().lo;
  for (std::int32_t h = 0; h < H; ++h) {
    double beta = 0.0;
    std::size_t run = 0;
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
      const std::int32_t i = p.assign[static_cast<std::size_t>(g.edge(e).u)];
      const std::int32_t j = p.assign[static_cast<std::size_t>(g.edge(e).v)];
      beta += log_rate[pair_rank(i, j) * H + static_cast<std::size_t>(h)];
      if (e == g.run_ends()[run]) {
        ps.f[run * static_cast<std::size_t>(H) + static_cast<std::size_t>(h)] =
            beta - ps.alpha[static_cast<std::size_t>(h)] * (g.edge(e).t - t_min);
        ++run;
      }
    }
  }
  return ps;
}

namespace {

struct DpTables {
  std::size_t nruns = 0;
  std::int32_t K = 0;
  std::vector<double> o;        // K x nruns
  std::vector<std::size_t> q;   // start run of the last segment
  std::vector<std::int32_t> r;  // level of the last segment
};

SegmentResult backtrack(const TemporalGraph& g, const DpTables& dp,
                        std::int32_t K, std::int32_t H) {
  std::vector<std::size_t> break_runs(static_cast<std::size_t>(K));
  std::vector<std::int32_t> levels(static_cast<std::size_t>(K));
  std::size_t e = dp.nruns - 1;
  for (std::int32_t k = K; k >= 2; --k) {
    break_runs[static_cast<std::size_t>(k - 1)] = e;
    levels[static_cast<std::size_t>(k - 1)] =
        dp.r[static_cast<std::size_t>(k - 1) * dp.nruns + e];
    e = dp.q[static_cast<std::size_t>(k - 1) * dp.nruns + e];
  }
  break_runs[0] = e;
  levels[0] = dp.r[e];

  std::vector<std::size_t> last_edges(static_cast<std::size_t>(K));
  for (std::int32_t k = 0; k < K; ++k)
    last_edges[static_cast<std::size_t>(k)] =
        g.run_ends()[break_runs[static_cast<std::size_t>(k)]];

  SegmentResult res;
  res.segmentation = segmentation_from_breaks(g, last_edges);
  res.levels = LevelMapping{std::move(levels), H};
  res.loglik = dp.o[static_cast<std::size_t>(K - 1) * dp.nruns + (dp.nruns - 1)];
  return res;
}

DpTables init_tables(const PrefixScores& ps, std::int32_t K) {
  DpTables dp;
  dp.nruns = ps.nruns;
  dp.K = K;
  dp.o.assign(static_cast<std::size_t>(K) * dp.nruns, neg_inf);
  dp.q.assign(static_cast<std::size_t>(K) * dp.nruns, 0);
  dp.r.assign(static_cast<std::size_t>(K) * dp.nruns, 0);
  for (std::size_t e = 0; e < dp.nruns; ++e) {
    double best = neg_inf;
    std::int32_t best_h = 0;
    for (std::int32_t h = 0; h < ps.H; ++h) {
      const double v = ps.at(e, h);
      if (v > best) {
        best = v;
        best_h = h;
      }
    }
    dp.o[e] = best;
    dp.r[e] = best_h;
  }
  return dp;
}

// x(s, e; h) = o[s, k-1] + f[e, h] - f[s, h]; -inf for s >= e or any
// infinite operand (keeps the staircase totally monotone).
double dp_score(const PrefixScores& ps, const double* o_prev, std::size_t s,
                std::size_t e, std::int32_t h) {
  if (s >= e) return neg_inf;
  if (o_prev[s] == neg_inf) return neg_inf;
  const double y = ps.segment_score(s, e, h);
  if (y == neg_inf) return neg_inf;
  return o_prev[s] + y;
}

void validate(const TemporalGraph& g, std::int32_t K, std::int32_t H) {
  if (K < 1 || H < 1 || H > K) throw std::invalid_argument("need 1 <= H <= K");
  if (static_cast<std::size_t>(K) > g.num_runs())
    throw std::invalid_argument("K too large for input");
}

}  // namespace

SegmentResult find_segments(const TemporalGraph& g, const Partition& p,
                            const LambdaTensor& lambda, std::int32_t K,
                            std::int32_t H) {
  validate(g, K, H);
  if (lambda.H() != H) throw std::invalid_argument("rate tensor level mismatch");
  const PrefixScores ps = precompute_prefix(g, p, lambda);
  DpTables dp = init_tables(ps, K);
  const std::size_t nruns = dp.nruns;

  std::vector<std::vector<std::size_t>> z(static_cast<std::size_t>(H));
  for (std::int32_t k = 2; k <= K; ++k) {
    const double* o_prev = dp.o.data() + static_cast<std::size_t>(k - 2) * nruns;
    for (std::int32_t h = 0; h < H; ++h) {
      z[static_cast<std::size_t>(h)] = column_argmax(
          [&ps, o_prev, h](std::size_t s, std::size_t e) {
            return dp_score(ps, o_prev, s, e, h);
          },
          nruns, nruns);
    }
    double* o_cur = dp.o.data() + static_cast<std::size_t>(k - 1) * nruns;
    std::size_t* q_cur = dp.q.data() + static_cast<std::size_t>(k - 1) * nruns;
    std::int32_t* r_cur = dp.r.data() + static_cast<std::size_t>(k - 1) * nruns;
    for (std::size_t e = 0; e < nruns; ++e) {
      double best = neg_inf;
      std::int32_t best_h = 0;
      std::size_t best_s = e > 0 ? e - 1 : 0;
      for (std::int32_t h = 0; h < H; ++h) {
        const std::size_t s = z[static_cast<std::size_t>(h)][e];
        const double v = dp_score(ps, o_prev, s, e, h);
        if (v > best) {
          best = v;
          best_h = h;
          best_s = s;
        }
      }
      o_cur[e] = best;
      r_cur[e] = best_h;
      q_cur[e] = best_s;
    }
  }
  return backtrack(g, dp, K, H);
}

SegmentResult find_segments_naive(const TemporalGraph& g, const Partition& p,
                                  const LambdaTensor& lambda, std::int32_t K,
                                  std::int32_t H) {
  validate(g, K, H);
  if (lambda.H() != H) throw std::invalid_argument("rate tensor level mismatch");
  const PrefixScores ps = precompute_prefix(g, p, lambda);
  DpTables dp = init_tables(ps, K);
  const std::size_t nruns = dp.nruns;

  for (std::int32_t k = 2; k <= K; ++k) {
    const double* o_prev = dp.o.data() + static_cast<std::size_t>(k - 2) * nruns;
    double* o_cur = dp.o.data() + static_cast<std::size_t>(k - 1) * nruns;
    std::size_t* q_cur = dp.q.data() + static_cast<std::size_t>(k - 1) * nruns;
    std::int32_t* r_cur = dp.r.data() + static_cast<std::size_t>(k - 1) * nruns;
    for (std::size_t e = 0; e < nruns; ++e) {
      double best = neg_inf;
      std::int32_t best_h = 0;
      std::size_t best_s = e > 0 ? e - 1 : 0;
      for (std::int32_t h = 0; h < H; ++h) {
        for (std::size_t s = 0; s < e; ++s) {
          if (o_prev[s] == neg_inf) continue;
          const double v = dp_score(ps, o_prev, s, e, h);
          if (v > best) {
            best = v;
            best_h = h;
            best_s = s;
          }
        }
      }
      o_cur[e] = best;
      r_cur[e] = best_h;
      q_cur[e] = best_s;
    }
  }
  return backtrack(g, dp, K, H);
}

}  // namespace recseg
