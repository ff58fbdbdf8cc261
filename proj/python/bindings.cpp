#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "recseg/core.hpp"
#include "recseg/estimation.hpp"
#include "recseg/eval.hpp"
#include "recseg/model_io.hpp"

namespace py = pybind11;
using namespace recseg;

namespace {

TemporalGraph ingest_text(const std::string& text) {
  std::istringstream in(text);
  return ingest(in);
}

TemporalGraph ingest_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  return ingest(in);
}

py::list lambda_list(const Model& m) {
  py::list levels;
  for (std::int32_t h = 0; h < m.levels.H; ++h) {
    py::list rows;
    for (std::int32_t i = 0; i < m.partition.R; ++i) {
      py::list row;
      for (std::int32_t j = 0; j < m.partition.R; ++j)
        row.append(m.lambda(i, j, h));
      rows.append(row);
    }
    levels.append(rows);
  }
  return levels;
}

}  // namespace

PYBIND11_MODULE(_recseg, mod) {
  mod.doc() = "Recurrent-segmentation stochastic block models for temporal networks";

  py::class_<TemporalGraph>(mod, "TemporalGraph")
      .def_property_readonly("num_nodes", &TemporalGraph::num_nodes)
      .def_property_readonly("num_edges", &TemporalGraph::num_edges)
      .def_property_readonly("labels", &TemporalGraph::labels)
      .def_property_readonly("window",
                             [](const TemporalGraph& g) {
                               return py::make_tuple(g.window().lo, g.window().hi);
                             })
      .def("__len__", &TemporalGraph::num_edges);

  py::class_<Model>(mod, "Model")
      .def_property_readonly(
          "groups", [](const Model& m) { return m.partition.assign; })
      .def_property_readonly(
          "boundaries",
          [](const Model& m) {
            std::vector<double> b;
            for (const TimeInterval& t : m.segmentation.intervals)
              b.push_back(t.hi);
            return b;
          })
      .def_property_readonly("level_map",
                             [](const Model& m) { return m.levels.level; })
      .def_property_readonly("rates", &lambda_list)
      .def_readonly("loglik", &Model::loglik)
      .def_readonly("normalized_loglik", &Model::normalized_loglik)
      .def_readonly("iterations", &Model::iterations)
      .def_readonly("converged", &Model::converged);

  mod.def("ingest", &ingest_text, py::arg("text"),
          "Parse an edge-list string (u v t records, # comments).");
  mod.def("ingest_file", &ingest_file, py::arg("path"));

  mod.def(
      "fit",
      [](const TemporalGraph& g, std::int32_t R, std::int32_t K, std::int32_t H,
         double theta, double eta, std::int32_t restarts, std::uint64_t seed,
         std::int32_t max_iters, double tol) {
        FitConfig cfg;
        cfg.R = R;
        cfg.K = K;
        cfg.H = H;
        cfg.theta = theta;
        cfg.eta = eta;
        cfg.restarts = restarts;
        cfg.seed = seed;
        cfg.max_iters = max_iters;
        cfg.tol = tol;
        return fit_restarts(g, cfg).first;
      },
      py::arg("graph"), py::arg("groups"), py::arg("segments"),
      py::arg("levels"), py::arg("theta") = 1e-3, py::arg("eta") = 1e-3,
      py::arg("restarts") = 5, py::arg("seed") = 0, py::arg("max_iters") = 100,
      py::arg("tol") = 1e-7,
      py::call_guard<py::gil_scoped_release>());

  mod.def(
      "generate",
      [](std::int32_t n, std::int32_t R, std::int32_t K, std::int32_t H,
         double rate_lo, double rate_hi, double seg_duration,
         std::uint64_t seed) {
        GenParams params;
        params.n = n;
        params.R = R;
        params.K = K;
        params.H = H;
        params.rate_lo = rate_lo;
        params.rate_hi = rate_hi;
        params.seg_duration = seg_duration;
        params.seed = seed;
        const GroundTruth gt = generate(params);
        return py::make_tuple(gt.graph, gt.model);
      },
      py::arg("nodes"), py::arg("groups"), py::arg("segments"),
      py::arg("levels"), py::arg("rate_lo") = 0.05, py::arg("rate_hi") = 0.7,
      py::arg("seg_duration") = 100.0, py::arg("seed") = 0);

  mod.def(
      "rand_index",
      [](const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b) {
        const std::int32_t ra =
            *std::max_element(a.begin(), a.end()) + 1;
        const std::int32_t rb =
            *std::max_element(b.begin(), b.end()) + 1;
        return rand_index(make_partition(a, ra), make_partition(b, rb));
      },
      py::arg("a"), py::arg("b"));

  mod.def(
      "save_model",
      [](const Model& m, const std::vector<std::string>& labels,
         const std::string& path) {
        ModelFile mf;
        mf.model = m;
        mf.labels = labels;
        save_model(mf, path);
      },
      py::arg("model"), py::arg("labels"), py::arg("path"));

  mod.def(
      "load_model",
      [](const std::string& path) { return load_model(path).model; },
      py::arg("path"));
}
