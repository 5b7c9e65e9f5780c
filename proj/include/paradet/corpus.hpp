#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "paradet/classify.hpp"

namespace paradet::corpus {

enum class Origin { crowd, clough_stevenson };

const char* to_string(Origin o);

struct LabelledPair {
  std::string pair_id;
  std::string suspect_text;
  std::string source_text;
  classify::Label label = classify::Label::not_paraphrased;
  Origin origin = Origin::crowd;
  std::string raw_category;

  bool operator==(const LabelledPair&) const = default;
};

nlohmann::json to_json(const LabelledPair& p);
LabelledPair pair_from_json(const nlohmann::json& j);  // throws ConfigError

void write_jsonl(std::ostream& out, const std::vector<LabelledPair>& pairs);
std::vector<LabelledPair> read_jsonl(std::istream& in);
std::vector<LabelledPair> load_jsonl(const std::filesystem::path& path);

// Crowd layout: <n>-original.txt, <n>-paraphrase.txt, <n>-metadata.txt, the
// metadata holding a "Paraphrase: Yes|No" line. Sorted by numeric id.
std::vector<LabelledPair> load_crowd(const std::filesystem::path& dir);

// Light and heavy revisions are paraphrased; cut (cut and paste), near copy
// and non are not. Throws UnknownCategory for anything else.
classify::Label label_for_category(std::string_view category);

// Answer files in `dir` scored against orig_task<x>.txt; the truth table has
// file, task and category columns, comma/tab/semicolon/whitespace delimited.
std::vector<LabelledPair> load_clough_stevenson(const std::filesystem::path& dir,
                                                const std::filesystem::path& truth_file);

// Whole file as UTF-8, invalid bytes replaced. Throws MissingFile.
std::string read_text(const std::filesystem::path& path);

struct ClassCounts {
  std::size_t total = 0, paraphrased = 0, not_paraphrased = 0;
};

ClassCounts count(const std::vector<LabelledPair>& pairs);

}  // namespace paradet::corpus
