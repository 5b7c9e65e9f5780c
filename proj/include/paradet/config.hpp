#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "paradet/classify.hpp"
#include "paradet/embeddings.hpp"
#include "paradet/features.hpp"
#include "paradet/gst.hpp"
#include "paradet/lexdb.hpp"

namespace paradet::cli {

// Flat JSON engine configuration. Empty paths mean "resource not supplied";
// the channels that need it then never fire.
struct EngineConfig {
  std::string lexdb_dir;
  std::string ic_file;
  std::string embedding_file;
  std::string embedding_format = "binary";
  std::size_t embedding_limit = 0;  // 0 = whole file
  std::string stopword_file;        // empty = built-in English list
  std::string stemmer = "porter";

  semsim::SemThresholds thresholds;
  semsim::Channels channels;
  classify::DiscardThresholds discard;
  gst::GstParams gst;

  classify::ClassifierSpec classifier;
  std::string dimensions = "semantic,syntactic,insdel";
  std::uint64_t seed = 0;
  std::size_t folds = 10;
};

// Unknown keys and out-of-range values throw ConfigError. Relative paths are
// resolved against `base_dir`.
EngineConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
EngineConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const EngineConfig& c);

// Range checks plus existence of every referenced path (MissingFile).
void validate(const EngineConfig& c);

// Loaded resources plus the feature configuration pointing into them.
class Engine {
 public:
  explicit Engine(const EngineConfig& config);
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  const EngineConfig& config() const { return config_; }
  const classify::FeatureConfig& features() const { return features_; }
  const std::vector<classify::Dimension>& dimensions() const { return dims_; }

 private:
  EngineConfig config_;
  std::unique_ptr<resources::LexicalStore> lexdb_;
  std::unique_ptr<resources::ICTable> ic_;
  std::unique_ptr<resources::EmbeddingStore> embeddings_;
  classify::FeatureConfig features_;
  std::vector<classify::Dimension> dims_;
};

}  // namespace paradet::cli
