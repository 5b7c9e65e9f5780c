#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

namespace paradet::textprep {

struct Token {
  std::string surface;
  std::string normalized;  // lowercase, diacritics stripped
  std::string stem;
  std::size_t index = 0;  // position in the sentence before stopword removal
};

struct ProcessedSentence {
  std::size_t sentence_id = 0;
  std::vector<Token> all_tokens;
  std::vector<Token> content_tokens;
};

class StopwordList {
 public:
  StopwordList() = default;

  // One word per line; '#' starts a comment line; blank lines ignored.
  static StopwordList parse(std::string_view text);
  static StopwordList load(const std::filesystem::path& path);

  // The list shipped in data/stopwords_en.txt, compiled into the library.
  static const StopwordList& english_default();

  bool contains(std::string_view word) const { return words_.contains(std::string(word)); }
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

enum class Stemmer { porter, none };

struct PrepConfig {
  StopwordList stopwords = StopwordList::english_default();
  Stemmer stemmer = Stemmer::porter;
};

// Classic Porter (1980) stemmer. Expects a lowercase ASCII word; anything
// containing other characters is returned unchanged.
std::string porter_stem(std::string_view word);

// Lowercase + canonical decomposition with combining marks removed.
std::string normalize(std::string_view surface);

// Splits on runs of characters that are neither letters, digits nor marks.
std::vector<std::string> tokenize(std::string_view sentence);

std::vector<std::string> split_sentences(std::string_view text);

std::vector<ProcessedSentence> preprocess_passage(std::string_view text, const PrepConfig& config);

// Replace invalid UTF-8 sequences with U+FFFD.
std::string sanitize_utf8(std::string_view bytes);

nlohmann::json to_json(const ProcessedSentence& sentence);

}  // namespace paradet::textprep
