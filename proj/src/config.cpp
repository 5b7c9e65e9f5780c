#include "paradet/config.hpp"

#include <fstream>
#include <set>

#include "paradet/error.hpp"

namespace paradet::cli {
namespace fs = std::filesystem;

namespace {

std::string resolve(const std::string& p, const fs::path& base) {
  if (p.empty() || base.empty() || fs::path(p).is_absolute()) return p;
  return (base / p).string();
}

void require_path(const std::string& p, const char* key) {
  if (!p.empty() && !fs::exists(p)) throw MissingFile(p + " (" + key + ")");
}

}  // namespace

EngineConfig config_from_json(const nlohmann::json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {
      "lexdb_dir",       "ic_file",         "embedding_file",    "embedding_format", "embedding_limit",
      "stopword_file",   "stemmer",         "embed_min",         "resnik_min",       "channel_exact",
      "channel_synonym", "channel_embedding", "channel_resnik",  "discard_semantic", "discard_syntactic",
      "discard_insdel",  "gst_min_match",   "gst_min_tile",      "gst_threshold",    "gst_max_chars",
      "classifier",      "knn_k",           "standardize",       "rule_threshold",   "dimensions",
      "seed",            "folds"};
  for (const auto& [key, _] : j.items())
    if (!known.contains(key)) throw ConfigError("unknown config key '" + key + "'");

  EngineConfig c;
  try {
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
    };
    get("lexdb_dir", c.lexdb_dir);
    get("ic_file", c.ic_file);
    get("embedding_file", c.embedding_file);
    get("embedding_format", c.embedding_format);
    get("embedding_limit", c.embedding_limit);
    get("stopword_file", c.stopword_file);
    get("stemmer", c.stemmer);
    get("embed_min", c.thresholds.embed_min);
    get("resnik_min", c.thresholds.resnik_min);
    get("channel_exact", c.channels.exact);
    get("channel_synonym", c.channels.synonym);
    get("channel_embedding", c.channels.embedding);
    get("channel_resnik", c.channels.resnik);
    get("discard_semantic", c.discard.semantic);
    get("discard_syntactic", c.discard.syntactic);
    get("discard_insdel", c.discard.insdel);
    get("gst_min_match", c.gst.min_match);
    get("gst_min_tile", c.gst.min_tile);
    get("gst_threshold", c.gst.threshold);
    get("gst_max_chars", c.gst.max_chars);
    get("classifier", c.classifier.type);
    get("knn_k", c.classifier.k);
    get("standardize", c.classifier.standardize);
    get("rule_threshold", c.classifier.threshold);
    get("dimensions", c.dimensions);
    get("seed", c.seed);
    get("folds", c.folds);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  c.lexdb_dir = resolve(c.lexdb_dir, base_dir);
  c.ic_file = resolve(c.ic_file, base_dir);
  c.embedding_file = resolve(c.embedding_file, base_dir);
  c.stopword_file = resolve(c.stopword_file, base_dir);
  return c;
}

EngineConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingFile(path.string());
  auto j = nlohmann::json::parse(in, nullptr, false, true);
  if (j.is_discarded()) throw ConfigError("config " + path.string() + " is not valid JSON");
  return config_from_json(j, path.parent_path());
}

nlohmann::json to_json(const EngineConfig& c) {
  return {{"lexdb_dir", c.lexdb_dir},
          {"ic_file", c.ic_file},
          {"embedding_file", c.embedding_file},
          {"embedding_format", c.embedding_format},
          {"embedding_limit", c.embedding_limit},
          {"stopword_file", c.stopword_file},
          {"stemmer", c.stemmer},
          {"embed_min", c.thresholds.embed_min},
          {"resnik_min", c.thresholds.resnik_min},
          {"channel_exact", c.channels.exact},
          {"channel_synonym", c.channels.synonym},
          {"channel_embedding", c.channels.embedding},
          {"channel_resnik", c.channels.resnik},
          {"discard_semantic", c.discard.semantic},
          {"discard_syntactic", c.discard.syntactic},
          {"discard_insdel", c.discard.insdel},
          {"gst_min_match", c.gst.min_match},
          {"gst_min_tile", c.gst.min_tile},
          {"gst_threshold", c.gst.threshold},
          {"gst_max_chars", c.gst.max_chars},
          {"classifier", c.classifier.type},
          {"knn_k", c.classifier.k},
          {"standardize", c.classifier.standardize},
          {"rule_threshold", c.classifier.threshold},
          {"dimensions", c.dimensions},
          {"seed", c.seed},
          {"folds", c.folds}};
}

void validate(const EngineConfig& c) {
  semsim::validate(c.thresholds);
  classify::validate(c.discard);
  gst::validate(c.gst);
  classify::make_classifier(c.classifier);
  if (classify::parse_dimensions(c.dimensions).empty()) throw ConfigError("no feature dimensions selected");
  if (c.folds < 2) throw ConfigError("folds must be >= 2");
  if (!resources::parse_embedding_format(c.embedding_format))
    throw ConfigError("embedding_format must be text or binary");
  if (c.stemmer != "porter" && c.stemmer != "none") throw ConfigError("stemmer must be porter or none");
  if (!c.ic_file.empty() && c.lexdb_dir.empty()) throw ConfigError("ic_file needs lexdb_dir");
  require_path(c.lexdb_dir, "lexdb_dir");
  require_path(c.ic_file, "ic_file");
  require_path(c.embedding_file, "embedding_file");
  require_path(c.stopword_file, "stopword_file");
}

Engine::Engine(const EngineConfig& config) : config_(config) {
  validate(config_);
  if (!config_.stopword_file.empty()) features_.prep.stopwords = textprep::StopwordList::load(config_.stopword_file);
  features_.prep.stemmer = config_.stemmer == "none" ? textprep::Stemmer::none : textprep::Stemmer::porter;
  if (!config_.lexdb_dir.empty())
    lexdb_ = std::make_unique<resources::LexicalStore>(resources::load_lexdb(config_.lexdb_dir));
  if (!config_.ic_file.empty()) ic_ = std::make_unique<resources::ICTable>(resources::ICTable::load(config_.ic_file));
  if (!config_.embedding_file.empty())
    embeddings_ = std::make_unique<resources::EmbeddingStore>(resources::load_embeddings(
        config_.embedding_file, *resources::parse_embedding_format(config_.embedding_format),
        config_.embedding_limit));
  features_.resources = {lexdb_.get(), ic_.get(), embeddings_.get()};
  features_.thresholds = config_.thresholds;
  features_.channels = config_.channels;
  features_.discard = config_.discard;
  dims_ = classify::parse_dimensions(config_.dimensions);
}

}  // namespace paradet::cli
