#include "recseg/core.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace recseg {

TemporalGraph TemporalGraph::from_edges(std::vector<Edge> edges, std::int32_t n,
                                        std::optional<TimeInterval> window) {
  if (edges.empty()) throw std::invalid_argument("temporal graph needs at least one edge");
  if (n < 2) throw std::invalid_argument("temporal graph needs at least two nodes");
  for (const Edge& e : edges) {
    if (e.u == e.v) throw std::invalid_argument("self-loops are not allowed");
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
      throw std::invalid_argument("edge endpoint out of range");
  }

  // stable sort keeps input order as the final tie-breaker
  std::stable_sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    if (a.t != b.t) return a.t < b.t;
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
  });

  TemporalGraph g;
  g.n_ = n;
  g.edges_ = std::move(edges);

  const double t_min = g.edges_.front().t;
  const double t_max = g.edges_.back().t;
  if (window) {
    if (window->lo > t_min || window->hi < t_max)
      throw std::invalid_argument("window does not cover the edge timestamps");
    g.window_ = *window;
  } else {
    g.window_ = TimeInterval{t_min, t_max, true};
  }
  g.window_.closed_lo = true;

  g.adjacency_.resize(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < g.edges_.size(); ++i) {
    g.adjacency_[static_cast<std::size_t>(g.edges_[i].u)].push_back(i);
    g.adjacency_[static_cast<std::size_t>(g.edges_[i].v)].push_back(i);
  }

  for (std::size_t i = 0; i < g.edges_.size(); ++i) {
    if (i + 1 == g.edges_.size() || g.edges_[i + 1].t != g.edges_[i].t)
      g.run_ends_.push_back(i);
  }
  return g;
}

Partition make_partition(std::vector<std::int32_t> assign, std::int32_t R) {
  if (R < 1) throw std::invalid_argument("group count must be positive");
  Partition p;
  p.R = R;
  p.sizes.assign(static_cast<std::size_t>(R), 0);
  for (std::int32_t a : assign) {
    if (a < 0 || a >= R) throw std::invalid_argument("group index out of range");
    ++p.sizes[static_cast<std::size_t>(a)];
  }
  p.assign = std::move(assign);
  return p;
}

Segmentation segmentation_from_breaks(const TemporalGraph& g,
                                      const std::vector<std::size_t>& last_edges) {
  if (last_edges.empty()) throw std::invalid_argument("segmentation needs at least one segment");
  if (last_edges.back() + 1 != g.num_edges())
    throw std::invalid_argument("last segment must end at the final edge");
  Segmentation seg;
  seg.last_edge = last_edges;
  double lo = g.window().lo;
  for (std::size_t k = 0; k < last_edges.size(); ++k) {
    if (k > 0 && last_edges[k] <= last_edges[k - 1])
      throw std::invalid_argument("segment breakpoints must be increasing");
    const double hi = (k + 1 == last_edges.size()) ? g.window().hi
                                                   : g.edge(last_edges[k]).t;
    seg.intervals.push_back(TimeInterval{lo, hi, k == 0});
    lo = g.edge(last_edges[k]).t;
  }
  return seg;
}

std::vector<std::int32_t> segment_of_edges(const TemporalGraph& g,
                                           const Segmentation& seg) {
  std::vector<std::int32_t> out(g.num_edges());
  std::int32_t k = 0;
  const std::int32_t last = static_cast<std::int32_t>(seg.intervals.size()) - 1;
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    while (k < last && g.edge(i).t > seg.intervals[static_cast<std::size_t>(k)].hi) ++k;
    out[i] = k;
  }
  return out;
}

LambdaTensor::LambdaTensor(std::int32_t R, std::int32_t H, double fill)
    : R_(R), H_(H),
      data_(static_cast<std::size_t>(R) * (R + 1) / 2 * static_cast<std::size_t>(H), fill) {
  if (R < 1 || H < 1) throw std::invalid_argument("rate tensor needs R >= 1 and H >= 1");
}

namespace {

bool split_record(const std::string& line, EdgeFormat format, std::string& a,
                  std::string& b, std::string& c) {
  std::string buf = line;
  if (format != EdgeFormat::Whitespace) {
    std::replace(buf.begin(), buf.end(), ',', ' ');
  }
  std::istringstream ss(buf);
  std::string extra;
  if (!(ss >> a >> b >> c)) return false;
  if (ss >> extra) return false;
  return true;
}

}  // namespace

TemporalGraph ingest(std::istream& in, EdgeFormat format,
                     std::optional<TimeInterval> window) {
  std::vector<Edge> edges;
  std::vector<std::string> labels;
  std::unordered_map<std::string, std::int32_t> index;
  auto intern = [&](const std::string& s) {
    auto [it, inserted] = index.try_emplace(s, static_cast<std::int32_t>(labels.size()));
    if (inserted) labels.push_back(s);
    return it->second;
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::string a, b, c;
    if (!split_record(line, format, a, b, c))
      throw std::runtime_error("malformed record at line " + std::to_string(lineno));
    double t;
    auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), t);
    if (ec != std::errc{} || ptr != c.data() + c.size())
      throw std::runtime_error("unparseable timestamp at line " + std::to_string(lineno));
    if (a == b)
      throw std::runtime_error("self-loop at line " + std::to_string(lineno));
    edges.push_back(Edge{intern(a), intern(b), t});
  }
  if (edges.empty()) throw std::runtime_error("empty input: no edge records");

  TemporalGraph g = TemporalGraph::from_edges(
      std::move(edges), static_cast<std::int32_t>(labels.size()), window);
  g.set_labels(std::move(labels));
  return g;
}

std::size_t count_edges(const TemporalGraph& g, std::int32_t u, std::int32_t v,
                        const TimeInterval& t) {
  if (u > v) std::swap(u, v);
  std::size_t count = 0;
  const auto& inc = g.incident(u);
  for (std::size_t pos : inc) {
    const Edge& e = g.edge(pos);
    std::int32_t a = e.u, b = e.v;
    if (a > b) std::swap(a, b);
    if (a == u && b == v && t.contains(e.t)) ++count;
  }
  return count;
}

double poisson_loglik(std::int64_t c, double lambda, double delta) {
  double term = 0.0;
  if (c > 0) {
    if (lambda == 0.0) return neg_inf;
    term = static_cast<double>(c) * std::log(lambda);
  }
  return term - lambda * delta;
}

std::int64_t pair_count(const Partition& p, std::int32_t i, std::int32_t j) {
  const std::int64_t si = p.sizes[static_cast<std::size_t>(i)];
  const std::int64_t sj = p.sizes[static_cast<std::size_t>(j)];
  if (i == j) return si * (si - 1) / 2;
  return si * sj;
}

double model_loglik(const TemporalGraph& g, const Partition& p,
                    const Segmentation& seg, const LevelMapping& levels,
                    const LambdaTensor& lambda) {
  const std::int32_t R = p.R;
  const std::int32_t H = levels.H;
  if (static_cast<std::size_t>(p.assign.size()) != static_cast<std::size_t>(g.num_nodes()))
    throw std::invalid_argument("partition size does not match node count");
  if (levels.level.size() != seg.intervals.size())
    throw std::invalid_argument("level mapping length does not match segment count");
  if (lambda.R() != R || lambda.H() != H)
    throw std::invalid_argument("rate tensor shape mismatch");

  // level-aggregated counts and durations; identical to the per-segment
  // triple sum because rates are shared within a level
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

  double total = 0.0;
  for (std::int32_t i = 0; i < R; ++i)
    for (std::int32_t j = i; j < R; ++j) {
      const double pairs = static_cast<double>(pair_count(p, i, j));
      for (std::int32_t h = 0; h < H; ++h) {
        const double ll = poisson_loglik(
            cnt[pair_rank(i, j) * H + static_cast<std::size_t>(h)],
            lambda(i, j, h), pairs * dur[static_cast<std::size_t>(h)]);
        if (ll == neg_inf) return neg_inf;
        total += ll;
      }
    }
  return total;
}

double baseline_loglik(const TemporalGraph& g) {
  const double dur = g.window().duration();
  if (dur <= 0.0) throw std::invalid_argument("degenerate time window");
  const double n = static_cast<double>(g.num_nodes());
  const double pairs = n * (n - 1) / 2.0;
  const double m = static_cast<double>(g.num_edges());
  const double rate = m / (pairs * dur);
  return m * std::log(rate) - m;
}

double normalized_loglik(const TemporalGraph& g, double loglik) {
  return loglik / baseline_loglik(g);
}

}  // namespace recseg
