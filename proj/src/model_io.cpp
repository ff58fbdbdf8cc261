#include "recseg/model_io.hpp"

#include <fstream>
#include <stdexcept>

namespace recseg {

using nlohmann::json;

json to_json(const ModelFile& mf) {
  const Model& m = mf.model;
  const std::int32_t R = m.partition.R;
  const std::int32_t K = m.segmentation.K();
  const std::int32_t H = m.levels.H;

  json groups = json::object();
  for (std::size_t u = 0; u < mf.labels.size(); ++u)
    groups[mf.labels[u]] = m.partition.assign[u] + 1;

  json boundaries = json::array();
  for (const TimeInterval& t : m.segmentation.intervals) boundaries.push_back(t.hi);

  json level_map = json::array();
  for (std::int32_t lv : m.levels.level) level_map.push_back(lv + 1);

  json lambda = json::array();
  for (std::int32_t h = 0; h < H; ++h) {
    json per_level = json::array();
    for (std::int32_t i = 0; i < R; ++i) {
      json row = json::array();
      for (std::int32_t j = 0; j < R; ++j) row.push_back(m.lambda(i, j, h));
      per_level.push_back(std::move(row));
    }
    lambda.push_back(std::move(per_level));
  }

  return json{{"schema_version", ModelFile::schema_version},
              {"n", mf.labels.size()},
              {"m", mf.m},
              {"R", R},
              {"K", K},
              {"H", H},
              {"labels", mf.labels},
              {"groups", std::move(groups)},
              {"window", json::array({m.segmentation.intervals.front().lo,
                                      m.segmentation.intervals.back().hi})},
              {"boundaries", std::move(boundaries)},
              {"level_map", std::move(level_map)},
              {"lambda", std::move(lambda)},
              {"loglik", m.loglik},
              {"normalized_loglik", m.normalized_loglik},
              {"iterations", m.iterations},
              {"converged", m.converged},
              {"seed", mf.seed},
              {"config", mf.config}};
}

ModelFile model_from_json(const json& j) {
  if (j.at("schema_version").get<int>() != ModelFile::schema_version)
    throw std::runtime_error("unsupported model file schema version");

  ModelFile mf;
  mf.labels = j.at("labels").get<std::vector<std::string>>();
  mf.m = j.at("m").get<std::size_t>();
  mf.seed = j.at("seed").get<std::uint64_t>();
  mf.config = j.value("config", json::object());

  const auto R = j.at("R").get<std::int32_t>();
  const auto K = j.at("K").get<std::int32_t>();
  const auto H = j.at("H").get<std::int32_t>();

  const json& groups = j.at("groups");
  std::vector<std::int32_t> assign(mf.labels.size());
  for (std::size_t u = 0; u < mf.labels.size(); ++u)
    assign[u] = groups.at(mf.labels[u]).get<std::int32_t>() - 1;
  mf.model.partition = make_partition(std::move(assign), R);

  const auto window = j.at("window").get<std::vector<double>>();
  const auto boundaries = j.at("boundaries").get<std::vector<double>>();
  if (static_cast<std::int32_t>(boundaries.size()) != K)
    throw std::runtime_error("boundary count does not match K");
  double lo = window.at(0);
  for (std::int32_t k = 0; k < K; ++k) {
    mf.model.segmentation.intervals.push_back(
        TimeInterval{lo, boundaries[static_cast<std::size_t>(k)], k == 0});
    lo = boundaries[static_cast<std::size_t>(k)];
  }

  mf.model.levels.H = H;
  for (std::int32_t lv : j.at("level_map").get<std::vector<std::int32_t>>())
    mf.model.levels.level.push_back(lv - 1);
  if (mf.model.levels.level.size() != static_cast<std::size_t>(K))
    throw std::runtime_error("level map length does not match K");

  mf.model.lambda = LambdaTensor(R, H);
  const json& lambda = j.at("lambda");
  for (std::int32_t h = 0; h < H; ++h)
    for (std::int32_t i = 0; i < R; ++i)
      for (std::int32_t g = i; g < R; ++g)
        mf.model.lambda.set(i, g, h,
                            lambda.at(static_cast<std::size_t>(h))
                                .at(static_cast<std::size_t>(i))
                                .at(static_cast<std::size_t>(g))
                                .get<double>());

  mf.model.loglik = j.at("loglik").get<double>();
  mf.model.normalized_loglik = j.at("normalized_loglik").get<double>();
  mf.model.iterations = j.at("iterations").get<std::int32_t>();
  mf.model.converged = j.at("converged").get<bool>();
  return mf;
}

void save_model(const ModelFile& mf, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << to_json(mf).dump(2) << "\n";
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  json j;
  in >> j;
  return model_from_json(j);
}

}  // namespace recseg
