#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "recseg/core.hpp"
#include "recseg/estimation.hpp"
#include "recseg/eval.hpp"
#include "recseg/model_io.hpp"

namespace {

using namespace recseg;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

TemporalGraph ingest_path(const std::string& path, std::optional<TimeInterval> window = {}) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  return ingest(in, EdgeFormat::Auto, window);
}

nlohmann::json config_echo(const FitConfig& cfg) {
  return nlohmann::json{{"R", cfg.R},
                        {"K", cfg.K},
                        {"H", cfg.H},
                        {"theta", cfg.theta},
                        {"eta", cfg.eta},
                        {"max_iters", cfg.max_iters},
                        {"tol", cfg.tol},
                        {"restarts", cfg.restarts},
                        {"naive_dp", cfg.naive_dp}};
}

// partition over graph node indices from a model file's label -> group map
Partition partition_for_graph(const TemporalGraph& g, const ModelFile& mf) {
  std::unordered_map<std::string, std::int32_t> group_of;
  for (std::size_t u = 0; u < mf.labels.size(); ++u)
    group_of[mf.labels[u]] = mf.model.partition.assign[u];
  std::vector<std::int32_t> assign(static_cast<std::size_t>(g.num_nodes()));
  for (std::int32_t u = 0; u < g.num_nodes(); ++u) {
    auto it = group_of.find(g.labels()[static_cast<std::size_t>(u)]);
    if (it == group_of.end())
      throw std::runtime_error("node label missing from model: " +
                               g.labels()[static_cast<std::size_t>(u)]);
    assign[static_cast<std::size_t>(u)] = it->second;
  }
  return make_partition(std::move(assign), mf.model.partition.R);
}

int cmd_fit(const std::string& input, FitConfig cfg, const std::string& out_path) {
  const TemporalGraph g = ingest_path(input);
  auto [model, traces] = fit_restarts(g, cfg);
  double seconds = 0.0;
  for (const FitTrace& t : traces) seconds += t.seconds;

  ModelFile mf;
  mf.model = std::move(model);
  mf.labels = g.labels();
  mf.m = g.num_edges();
  mf.seed = cfg.seed;
  mf.config = config_echo(cfg);
  if (!out_path.empty()) save_model(mf, out_path);

  std::cout << "loglik=" << fmt_double(mf.model.loglik)
            << " norm_ll=" << fmt_double(mf.model.normalized_loglik)
            << " iterations=" << mf.model.iterations
            << " seconds=" << fmt_double(seconds) << "\n";
  return 0;
}

int cmd_generate(const GenParams& params, const std::string& edges_path,
                 const std::string& truth_path) {
  const GroundTruth gt = generate(params);

  std::ofstream out(edges_path);
  if (!out) throw std::runtime_error("cannot open output file: " + edges_path);
  for (const Edge& e : gt.graph.edges())
    out << gt.graph.labels()[static_cast<std::size_t>(e.u)] << " "
        << gt.graph.labels()[static_cast<std::size_t>(e.v)] << " "
        << fmt_double(e.t) << "\n";

  if (!truth_path.empty()) {
    ModelFile mf;
    mf.model = gt.model;
    mf.labels = gt.graph.labels();
    mf.m = gt.graph.num_edges();
    mf.seed = params.seed;
    mf.config = nlohmann::json{{"n", params.n},
                               {"R", params.R},
                               {"K", params.K},
                               {"H", params.H},
                               {"rate_lo", params.rate_lo},
                               {"rate_hi", params.rate_hi},
                               {"seg_duration", params.seg_duration}};
    save_model(mf, truth_path);
  }
  std::cout << "n=" << gt.graph.num_nodes() << " m=" << gt.graph.num_edges()
            << " loglik=" << fmt_double(gt.model.loglik) << "\n";
  return 0;
}

int cmd_evaluate(const std::string& model_path, const std::string& edges_path,
                 const std::string& truth_path) {
  const ModelFile mf = load_model(model_path);
  const TimeInterval window{mf.model.segmentation.intervals.front().lo,
                            mf.model.segmentation.intervals.back().hi, true};
  const TemporalGraph g = ingest_path(edges_path, window);
  if (static_cast<std::size_t>(g.num_nodes()) != mf.labels.size())
    throw std::runtime_error("node count mismatch between model and edge list");

  const Partition p = partition_for_graph(g, mf);
  const double ll = model_loglik(g, p, mf.model.segmentation, mf.model.levels,
                                 mf.model.lambda);
  std::cout << "loglik=" << fmt_double(ll)
            << " norm_ll=" << fmt_double(normalized_loglik(g, ll));

  if (!truth_path.empty()) {
    const ModelFile truth = load_model(truth_path);
    const Partition tp = partition_for_graph(g, truth);
    std::cout << " rand_index=" << fmt_double(rand_index(tp, p));

    double gap = 0.0;
    constexpr std::int32_t grid = 2000;
    const double lo = window.lo, hi = window.hi;
    for (std::int32_t i = 0; i < truth.model.partition.R; ++i)
      for (std::int32_t j = i; j < truth.model.partition.R; ++j) {
        const auto ts = intensity_steps(truth.model, i, j);
        const auto ms = intensity_steps(mf.model, i, j);
        std::size_t a = 0, b = 0;
        for (std::int32_t q = 0; q < grid; ++q) {
          const double t = lo + (hi - lo) * q / (grid - 1);
          while (a + 1 < ts.size() && t > ts[a].first.hi) ++a;
          while (b + 1 < ms.size() && t > ms[b].first.hi) ++b;
          gap = std::max(gap, std::abs(ts[a].second - ms[b].second));
        }
      }
    std::cout << " max_rate_gap=" << fmt_double(gap);
  }
  std::cout << "\n";
  return 0;
}

int cmd_sweep_h(const std::string& input, std::int32_t R, std::int32_t K,
                const std::vector<std::int32_t>& h_values, FitConfig cfg,
                const std::string& out_path) {
  const TemporalGraph g = ingest_path(input);
  const auto curve = sweep_h(g, R, K, h_values, cfg);
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw std::runtime_error("cannot open output file: " + out_path);
    out = &file;
  }
  *out << "h,norm_ll\n";
  for (const auto& [h, ll] : curve) *out << h << "," << fmt_double(ll) << "\n";
  return 0;
}

int cmd_bench(const std::vector<std::size_t>& target_m, GenParams base,
              FitConfig cfg, const std::vector<std::string>& engines,
              const std::string& out_path) {
  std::vector<GenParams> sizes;
  for (std::size_t m : target_m) {
    GenParams params = base;
    const double pairs = static_cast<double>(params.n) * (params.n - 1) / 2.0;
    const double mean_rate = (params.rate_lo + params.rate_hi) / 2.0;
    params.seg_duration =
        static_cast<double>(m) / (pairs * mean_rate * params.K);
    sizes.push_back(params);
  }
  const auto rows = bench_scaling(sizes, cfg, engines);
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw std::runtime_error("cannot open output file: " + out_path);
    out = &file;
  }
  *out << "engine,m,seconds\n";
  for (const BenchRow& r : rows)
    *out << r.engine << "," << r.m << "," << fmt_double(r.seconds) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recurrent-segmentation stochastic block models for temporal networks"};
  app.require_subcommand(1);

  FitConfig cfg;
  GenParams gen;

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "Fit a (K, H, R) model to an edge list");
  std::string fit_input, fit_out;
  fit_cmd->add_option("input", fit_input, "edge-list file")->required();
  fit_cmd->add_option("--groups", cfg.R, "number of node groups R")->required();
  fit_cmd->add_option("--segments", cfg.K, "number of time segments K")->required();
  fit_cmd->add_option("--levels", cfg.H, "number of rate levels H")->required();
  fit_cmd->add_option("--theta", cfg.theta, "smoothing numerator");
  fit_cmd->add_option("--eta", cfg.eta, "smoothing denominator");
  fit_cmd->add_option("--restarts", cfg.restarts, "random restarts");
  fit_cmd->add_option("--seed", cfg.seed, "RNG seed");
  fit_cmd->add_option("--max-iters", cfg.max_iters, "iteration cap");
  fit_cmd->add_option("--tol", cfg.tol, "relative convergence tolerance");
  fit_cmd->add_option("--out", fit_out, "model JSON output path");
  fit_cmd->add_flag("--naive-dp", cfg.naive_dp, "use the quadratic segmentation DP");

  // generate
  auto* gen_cmd = app.add_subcommand("generate", "Generate a synthetic temporal network");
  std::string gen_out, gen_truth;
  gen_cmd->add_option("--nodes", gen.n, "node count");
  gen_cmd->add_option("--groups", gen.R, "group count");
  gen_cmd->add_option("--segments", gen.K, "segment count");
  gen_cmd->add_option("--levels", gen.H, "level count");
  gen_cmd->add_option("--rate-lo", gen.rate_lo, "rate range lower end");
  gen_cmd->add_option("--rate-hi", gen.rate_hi, "rate range upper end");
  gen_cmd->add_option("--seg-duration", gen.seg_duration, "duration of each segment");
  gen_cmd->add_option("--seed", gen.seed, "RNG seed");
  gen_cmd->add_option("--out", gen_out, "edge-list output path")->required();
  gen_cmd->add_option("--truth", gen_truth, "ground-truth model output path");

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "Evaluate a model on an edge list");
  std::string eval_model, eval_edges, eval_truth;
  eval_cmd->add_option("model", eval_model, "model JSON file")->required();
  eval_cmd->add_option("edges", eval_edges, "edge-list file")->required();
  eval_cmd->add_option("--truth", eval_truth, "ground-truth model for comparison");

  // sweep-h
  auto* sweep_cmd = app.add_subcommand("sweep-h", "Normalized log-likelihood per level count");
  std::string sweep_input, sweep_out;
  std::int32_t sweep_R = 2, sweep_K = 10;
  std::vector<std::int32_t> sweep_hs;
  sweep_cmd->add_option("input", sweep_input, "edge-list file")->required();
  sweep_cmd->add_option("--groups", sweep_R, "number of node groups R")->required();
  sweep_cmd->add_option("--segments", sweep_K, "number of time segments K")->required();
  sweep_cmd->add_option("--levels-list", sweep_hs, "level counts to try")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--restarts", cfg.restarts, "random restarts");
  sweep_cmd->add_option("--seed", cfg.seed, "RNG seed");
  sweep_cmd->add_option("--out", sweep_out, "CSV output path");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Runtime vs edge count, per engine");
  std::string bench_out;
  std::vector<std::size_t> bench_m;
  std::vector<std::string> bench_engines{"smawk", "naive"};
  bench_cmd->add_option("--edges-list", bench_m, "target edge counts")
      ->required()
      ->delimiter(',');
  bench_cmd->add_option("--nodes", gen.n, "node count of the generated instances");
  bench_cmd->add_option("--groups", gen.R, "group count");
  bench_cmd->add_option("--segments", gen.K, "segment count");
  bench_cmd->add_option("--levels", gen.H, "level count");
  bench_cmd->add_option("--seed", gen.seed, "RNG seed");
  bench_cmd->add_option("--engines", bench_engines, "engines to time")->delimiter(',');
  bench_cmd->add_option("--max-iters", cfg.max_iters, "loop iterations per fit");
  bench_cmd->add_option("--out", bench_out, "CSV output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (fit_cmd->parsed()) return cmd_fit(fit_input, cfg, fit_out);
    if (gen_cmd->parsed()) return cmd_generate(gen, gen_out, gen_truth);
    if (eval_cmd->parsed()) return cmd_evaluate(eval_model, eval_edges, eval_truth);
    if (sweep_cmd->parsed())
      return cmd_sweep_h(sweep_input, sweep_R, sweep_K, sweep_hs, cfg, sweep_out);
    if (bench_cmd->parsed())
      return cmd_bench(bench_m, gen, cfg, bench_engines, bench_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
