#include "recseg/grouping.hpp"

#include <cmath>
#include <stdexcept>

namespace recseg {

LevelAggregates make_level_aggregates(const TemporalGraph& g,
                                      const Segmentation& seg,
                                      const LevelMapping& levels) {
  LevelAggregates agg;
  agg.duration.assign(static_cast<std::size_t>(levels.H), 0.0);
  for (std::size_t k = 0; k < seg.intervals.size(); ++k)
    agg.duration[static_cast<std::size_t>(levels.level[k])] +=
        seg.intervals[k].duration();
  agg.seg_of_edge = segment_of_edges(g, seg);
  agg.level_of_edge.resize(g.num_edges());
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    agg.level_of_edge[e] =
        levels.level[static_cast<std::size_t>(agg.seg_of_edge[e])];
  return agg;
}

namespace {

struct SweepState {
  std::int32_t R;
  std::int32_t H;
  std::vector<double> w;         // R x R: sum_h lambda(x, y, h) * d[h]
  std::vector<double> log_rate;  // R x R x H
  std::vector<double> b_term;    // per candidate: sum_j |P_j| * w(a, j)

  double wv(std::int32_t x, std::int32_t y) const {
    return w[static_cast<std::size_t>(x) * R + static_cast<std::size_t>(y)];
  }
  double lr(std::int32_t x, std::int32_t y, std::int32_t h) const {
    return log_rate[(static_cast<std::size_t>(x) * R + static_cast<std::size_t>(y)) * H +
                    static_cast<std::size_t>(h)];
  }
};

SweepState make_state(const Partition& p, const LambdaTensor& lambda,
                      const LevelAggregates& agg) {
  SweepState st;
  st.R = p.R;
  st.H = lambda.H();
  const std::size_t r = static_cast<std::size_t>(st.R);
  const std::size_t h_count = static_cast<std::size_t>(st.H);
  st.w.assign(r * r, 0.0);
  st.log_rate.assign(r * r * h_count, 0.0);
  for (std::int32_t x = 0; x < st.R; ++x)
    for (std::int32_t y = 0; y < st.R; ++y)
      for (std::int32_t h = 0; h < st.H; ++h) {
        const double l = lambda(x, y, h);
        st.w[static_cast<std::size_t>(x) * r + y] +=
            l * agg.duration[static_cast<std::size_t>(h)];
        st.log_rate[(static_cast<std::size_t>(x) * r + y) * h_count + h] =
            l > 0.0 ? std::log(l) : neg_inf;
      }
  st.b_term.assign(r, 0.0);
  for (std::int32_t a = 0; a < st.R; ++a)
    for (std::int32_t j = 0; j < st.R; ++j)
      st.b_term[static_cast<std::size_t>(a)] +=
          static_cast<double>(p.sizes[static_cast<std::size_t>(j)]) * st.wv(a, j);
  return st;
}

// Gains for node u given the sweep state; c_scratch is an R x H buffer with
// touched entries listed in touched (cleared on exit).
void gains_for_node(std::int32_t u, const TemporalGraph& g, const Partition& p,
                    const SweepState& st, const LevelAggregates& agg,
                    std::vector<std::int64_t>& c_scratch,
                    std::vector<std::size_t>& touched,
                    std::vector<double>& gains) {
  const std::int32_t b = p.assign[static_cast<std::size_t>(u)];
  const std::size_t h_count = static_cast<std::size_t>(st.H);

  for (std::size_t pos : g.incident(u)) {
    const Edge& e = g.edge(pos);
    const std::int32_t other = e.u == u ? e.v : e.u;
    const std::int32_t j = p.assign[static_cast<std::size_t>(other)];
    const std::size_t idx =
        static_cast<std::size_t>(j) * h_count +
        static_cast<std::size_t>(agg.level_of_edge[pos]);
    if (c_scratch[idx] == 0) touched.push_back(idx);
    ++c_scratch[idx];
  }

  gains.assign(static_cast<std::size_t>(st.R), 0.0);
  for (std::int32_t a = 0; a < st.R; ++a)
    gains[static_cast<std::size_t>(a)] =
        st.wv(b, a) - st.b_term[static_cast<std::size_t>(a)];
  for (std::size_t idx : touched) {
    const std::int32_t j = static_cast<std::int32_t>(idx / h_count);
    const std::int32_t h = static_cast<std::int32_t>(idx % h_count);
    const double c = static_cast<double>(c_scratch[idx]);
    for (std::int32_t a = 0; a < st.R; ++a) {
      const double lr = st.lr(a, j, h);
      if (lr == neg_inf) {
        gains[static_cast<std::size_t>(a)] = neg_inf;
      } else if (gains[static_cast<std::size_t>(a)] != neg_inf) {
        gains[static_cast<std::size_t>(a)] += c * lr;
      }
    }
    c_scratch[idx] = 0;
  }
  touched.clear();
}

}  // namespace

std::vector<double> node_gains(std::int32_t u, const TemporalGraph& g,
                               const Partition& p, const LambdaTensor& lambda,
                               const LevelAggregates& agg) {
  SweepState st = make_state(p, lambda, agg);
  std::vector<std::int64_t> c_scratch(
      static_cast<std::size_t>(p.R) * static_cast<std::size_t>(lambda.H()), 0);
  std::vector<std::size_t> touched;
  std::vector<double> gains;
  gains_for_node(u, g, p, st, agg, c_scratch, touched, gains);
  return gains;
}

Partition find_groups(const TemporalGraph& g, const Partition& p_in,
                      const LambdaTensor& lambda, const Segmentation& seg,
                      const LevelMapping& levels) {
  Partition p = p_in;
  const LevelAggregates agg = make_level_aggregates(g, seg, levels);
  SweepState st = make_state(p, lambda, agg);

  std::vector<std::int64_t> c_scratch(
      static_cast<std::size_t>(p.R) * static_cast<std::size_t>(lambda.H()), 0);
  std::vector<std::size_t> touched;
  std::vector<double> gains;

  for (std::int32_t u = 0; u < g.num_nodes(); ++u) {
    const std::int32_t b = p.assign[static_cast<std::size_t>(u)];
    gains_for_node(u, g, p, st, agg, c_scratch, touched, gains);

    std::int32_t best = b;
    double best_val = neg_inf;
    for (std::int32_t a = 0; a < p.R; ++a) {
      if (gains[static_cast<std::size_t>(a)] > best_val) {
        best_val = gains[static_cast<std::size_t>(a)];
        best = a;
      }
    }
    if (best_val == neg_inf) continue;  // every candidate forbidden: stay

    if (best != b) {
      p.assign[static_cast<std::size_t>(u)] = best;
      --p.sizes[static_cast<std::size_t>(b)];
      ++p.sizes[static_cast<std::size_t>(best)];
      for (std::int32_t x = 0; x < p.R; ++x)
        st.b_term[static_cast<std::size_t>(x)] += st.wv(x, best) - st.wv(x, b);
    }
  }
  return p;
}

}  // namespace recseg
