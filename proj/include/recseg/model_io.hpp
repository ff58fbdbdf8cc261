#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "recseg/core.hpp"

namespace recseg {

/// On-disk model bundle. Group and level indices are 1-based in the file,
/// 0-based in memory; numeric fields round-trip bit-exactly (shortest
/// round-trip decimal serialization).
struct ModelFile {
  static constexpr int schema_version = 1;

  Model model;
  std::vector<std::string> labels;  // node labels in dense index order
  std::size_t m = 0;
  std::uint64_t seed = 0;
  nlohmann::json config;  // echo of the fitting configuration
};

nlohmann::json to_json(const ModelFile& mf);
ModelFile model_from_json(const nlohmann::json& j);

void save_model(const ModelFile& mf, const std::string& path);
ModelFile load_model(const std::string& path);

}  // namespace recseg
