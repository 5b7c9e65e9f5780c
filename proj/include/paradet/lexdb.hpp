#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace paradet::resources {

enum class Pos : char { noun = 'n', verb = 'v', adj = 'a', adv = 'r' };

std::optional<Pos> parse_pos(char c);  // 's' (satellite) folds into adj

struct SynsetId {
  std::uint32_t offset = 0;
  Pos pos = Pos::noun;

  auto operator<=>(const SynsetId&) const = default;
};

std::string to_string(SynsetId id);  // e.g. "02958343n"

struct SynsetIdHash {
  std::size_t operator()(SynsetId id) const noexcept {
    return std::hash<std::uint64_t>{}((std::uint64_t{id.offset} << 8) | static_cast<unsigned char>(id.pos));
  }
};

struct Synset {
  SynsetId id;
  std::vector<std::string> lemmas;  // lowercase, underscores for multiword lemmas
  std::vector<SynsetId> hypernyms;  // '@' and '@i' pointers
};

// Information content per synset. Values are -log p, finite and >= 0.
class ICTable {
 public:
  ICTable() = default;

  static ICTable from_values(const std::unordered_map<SynsetId, double, SynsetIdHash>& values);

  // Reads a WordNet::Similarity style count file: a "wnver::..." header, then
  // "<offset><pos> <count>[ ROOT]" lines. IC = -log(count / root_total[pos]);
  // synsets with zero count get no entry.
  static ICTable load(const std::filesystem::path& path);

  std::optional<double> ic(SynsetId id) const;
  std::size_t size() const { return values_.size(); }

 private:
  std::unordered_map<SynsetId, double, SynsetIdHash> values_;
};

class LexicalStore {
 public:
  class Builder {
   public:
    Builder& add_synset(Synset s);
    // Explicit sense order for a word. Words without an explicit entry get
    // their senses from synset lemmas, in insertion order.
    Builder& add_sense(std::string word, SynsetId id);
    LexicalStore build() &&;

   private:
    std::vector<Synset> synsets_;
    std::vector<std::pair<std::string, SynsetId>> senses_;
  };

  bool contains(std::string_view word) const;
  std::span<const SynsetId> senses(std::string_view word) const;

  const Synset& synset(SynsetId id) const;  // throws UnknownSynset
  bool has_synset(SynsetId id) const { return index_.contains(id); }
  std::size_t synset_count(Pos pos) const;
  std::size_t synset_count() const { return synsets_.size(); }

  // The synset itself plus every transitive hypernym, sorted. Empty for adj/adv.
  std::span<const SynsetId> ancestors(SynsetId id) const;
  // Longest hypernym path to a root; roots have depth 0.
  int depth(SynsetId id) const;

 private:
  std::vector<Synset> synsets_;
  std::unordered_map<SynsetId, std::uint32_t, SynsetIdHash> index_;
  std::unordered_map<std::string, std::vector<SynsetId>> words_;
  std::vector<std::vector<SynsetId>> ancestors_;
  std::vector<int> depth_;

  std::uint32_t slot(SynsetId id) const;
};

// Reads index.{noun,verb,adj,adv} and data.{noun,verb,adj,adv} from a
// WordNet 3.0 dict directory. Throws MissingFile or MalformedLine.
LexicalStore load_lexdb(const std::filesystem::path& dir);

// Union of lemmas of every synset containing word, minus the word itself.
std::set<std::string> synonyms(const LexicalStore& store, std::string_view word);

// Common subsumer with the highest IC; by depth when ic is null or no common
// subsumer has an IC value. Ties go to the smallest id. Noun and verb only;
// none for mixed parts of speech or disjoint taxonomies.
std::optional<SynsetId> lcs(const LexicalStore& store, SynsetId c1, SynsetId c2, const ICTable* ic = nullptr);

// Word-level Resnik similarity: max over noun/verb sense pairs of IC(lcs).
std::optional<double> resnik(const LexicalStore& store, const ICTable& ic, std::string_view w1, std::string_view w2);

}  // namespace paradet::resources
