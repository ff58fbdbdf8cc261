#pragma once

#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace recseg {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

struct Edge {
  std::int32_t u = 0;
  std::int32_t v = 0;
  double t = 0.0;
};

/// Continuous time interval, either [lo, hi] or (lo, hi].
struct TimeInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool closed_lo = false;

  double duration() const { return hi - lo; }
  bool contains(double t) const {
    return (closed_lo ? t >= lo : t > lo) && t <= hi;
  }
};

enum class EdgeFormat { Auto, Csv, Whitespace };

/// Immutable multigraph of timestamped undirected edges.
/// Edges are sorted by (t, u, v, input order); node ids are dense 0..n-1.
class TemporalGraph {
 public:
  static TemporalGraph from_edges(std::vector<Edge> edges,
                                  std::int32_t n,
                                  std::optional<TimeInterval> window = {});

  std::int32_t num_nodes() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t i) const { return edges_[i]; }
  const TimeInterval& window() const { return window_; }

  /// Positions of incident edges for one node, ascending.
  const std::vector<std::size_t>& incident(std::int32_t u) const {
    return adjacency_[static_cast<std::size_t>(u)];
  }

  /// Index (into edges) of the last edge of each run of equal timestamps.
  /// These are the admissible segment breakpoints.
  const std::vector<std::size_t>& run_ends() const { return run_ends_; }
  std::size_t num_runs() const { return run_ends_.size(); }

  const std::vector<std::string>& labels() const { return labels_; }
  void set_labels(std::vector<std::string> labels) { labels_ = std::move(labels); }

 private:
  TemporalGraph() = default;

  std::int32_t n_ = 0;
  std::vector<Edge> edges_;
  TimeInterval window_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<std::size_t> run_ends_;
  std::vector<std::string> labels_;
};

struct Partition {
  std::vector<std::int32_t> assign;
  std::int32_t R = 0;
  std::vector<std::int64_t> sizes;
};

Partition make_partition(std::vector<std::int32_t> assign, std::int32_t R);

/// K contiguous intervals tiling the window; last_edge[k] is the index of
/// the final edge inside segment k.
struct Segmentation {
  std::vector<TimeInterval> intervals;
  std::vector<std::size_t> last_edge;

  std::int32_t K() const { return static_cast<std::int32_t>(intervals.size()); }
};

/// Build a segmentation from breakpoint edge indices (last edge of each
/// segment); boundary timestamps are the edge timestamps.
Segmentation segmentation_from_breaks(const TemporalGraph& g,
                                      const std::vector<std::size_t>& last_edges);

/// Segment index of every edge, one pass over the sorted edge list.
std::vector<std::int32_t> segment_of_edges(const TemporalGraph& g,
                                           const Segmentation& seg);

struct LevelMapping {
  std::vector<std::int32_t> level;  // length K, values in 0..H-1
  std::int32_t H = 0;
};

/// Symmetric-in-(i,j) rate tensor, R x R x H, packed over unordered pairs.
class LambdaTensor {
 public:
  LambdaTensor() = default;
  LambdaTensor(std::int32_t R, std::int32_t H, double fill = 0.0);

  std::int32_t R() const { return R_; }
  std::int32_t H() const { return H_; }

  double operator()(std::int32_t i, std::int32_t j, std::int32_t h) const {
    return data_[index(i, j, h)];
  }
  void set(std::int32_t i, std::int32_t j, std::int32_t h, double value) {
    data_[index(i, j, h)] = value;
  }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

 private:
  std::size_t index(std::int32_t i, std::int32_t j, std::int32_t h) const {
    if (i > j) std::swap(i, j);
    // pair rank of (i, j) with i <= j in the upper triangle
    const std::size_t p =
        static_cast<std::size_t>(i) * R_ - static_cast<std::size_t>(i) * (i + 1) / 2 + j;
    return p * H_ + static_cast<std::size_t>(h);
  }

  std::int32_t R_ = 0;
  std::int32_t H_ = 0;
  std::vector<double> data_;
};

struct Model {
  Partition partition;
  Segmentation segmentation;
  LevelMapping levels;
  LambdaTensor lambda;
  double loglik = 0.0;
  double normalized_loglik = 0.0;
  std::int32_t iterations = 0;
  bool converged = false;
};

/// Parse an edge-list stream: `u<sep>v<sep>t` records, `#` comments.
/// Labels are mapped to dense indices in first-appearance order.
TemporalGraph ingest(std::istream& in, EdgeFormat format = EdgeFormat::Auto,
                     std::optional<TimeInterval> window = {});

std::size_t count_edges(const TemporalGraph& g, std::int32_t u, std::int32_t v,
                        const TimeInterval& t);

/// c log(lambda) - lambda * delta with the 0 log 0 = 0 convention;
/// -inf iff c > 0 and lambda = 0.
double poisson_loglik(std::int64_t c, double lambda, double delta);

/// Unordered node pairs between groups i and j.
std::int64_t pair_count(const Partition& p, std::int32_t i, std::int32_t j);

double model_loglik(const TemporalGraph& g, const Partition& p,
                    const Segmentation& seg, const LevelMapping& levels,
                    const LambdaTensor& lambda);

/// Log-likelihood of the single-group single-segment model.
double baseline_loglik(const TemporalGraph& g);

/// loglik / baseline; in (0, 1) for models beating the baseline, smaller better.
double normalized_loglik(const TemporalGraph& g, double loglik);

}  // namespace recseg
