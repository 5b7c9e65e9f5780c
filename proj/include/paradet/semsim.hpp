#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "paradet/embeddings.hpp"
#include "paradet/lexdb.hpp"
#include "paradet/textprep.hpp"

namespace paradet::semsim {

struct SemThresholds {
  double embed_min = 0.6;   // cosine, [0, 1]
  double resnik_min = 3.0;  // raw IC
};

void validate(const SemThresholds& th);  // throws ConfigError

// Individually switchable matching channels, tried in this order.
struct Channels {
  bool exact = true;
  bool synonym = true;
  bool embedding = true;
  bool resnik = true;
};

enum class Channel { exact, synonym, embedding, resnik };

const char* to_string(Channel c);

struct WordMatch {
  std::size_t query_index = 0;   // Token::index of the suspect word
  std::size_t source_index = 0;  // Token::index of the consumed source word
  Channel channel = Channel::exact;
  double score = 0;
};

nlohmann::json to_json(const WordMatch& m);

// Any of these may be null; a channel whose resources are missing never fires.
struct Resources {
  const resources::LexicalStore* lexdb = nullptr;
  const resources::ICTable* ic = nullptr;
  const resources::EmbeddingStore* embeddings = nullptr;
};

// Source tokens of one sentence with per-token consumption flags.
class SourcePool {
 public:
  explicit SourcePool(std::span<const textprep::Token> tokens) : tokens_(tokens), consumed_(tokens.size(), false) {}

  std::size_t size() const { return tokens_.size(); }
  const textprep::Token& token(std::size_t i) const { return tokens_[i]; }
  bool consumed(std::size_t i) const { return consumed_[i]; }
  void consume(std::size_t i) { consumed_[i] = true; }

 private:
  std::span<const textprep::Token> tokens_;
  std::vector<bool> consumed_;
};

// Tries exact, synonym, embedding and Resnik matching in that order; the first
// channel that finds a source word wins and consumes it.
std::optional<WordMatch> match_word(const textprep::Token& query, SourcePool& source, const Resources& res,
                                    const SemThresholds& th, const Channels& channels = {});

// Matched suspect words / suspect content words. Throws EmptySentence when the
// suspect has no content tokens. When `trace` is given, matches are appended.
double semantic_similarity(const textprep::ProcessedSentence& sp, const textprep::ProcessedSentence& sr,
                           const Resources& res, const SemThresholds& th, const Channels& channels = {},
                           std::vector<WordMatch>* trace = nullptr);

}  // namespace paradet::semsim
