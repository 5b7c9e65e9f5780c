#include "paradet/lexdb.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <unordered_set>

#include "paradet/error.hpp"

namespace paradet::resources {
namespace {

bool taxonomic(Pos p) { return p == Pos::noun || p == Pos::verb; }

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool parse_number(std::string_view s, std::uint32_t& out, int base = 10) {
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out, base);
  return ec == std::errc() && p == s.data() + s.size();
}

bool parse_number(std::string_view s, double& out) {
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

std::string clean_lemma(std::string_view raw) {
  std::string s(raw);
  if (const auto paren = s.find('('); paren != std::string::npos && s.back() == ')') s.resize(paren);
  for (auto& c : s)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return s;
}

class LineReader {
 public:
  explicit LineReader(const std::filesystem::path& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw MissingFile(path.string());
  }

  bool next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  [[noreturn]] void fail(const std::string& why) const { throw MalformedLine(path_.string(), line_no_, why); }
  std::size_t line_no() const { return line_no_; }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::size_t line_no_ = 0;
};

constexpr std::array<std::pair<const char*, Pos>, 4> kFiles{{
    {"noun", Pos::noun},
    {"verb", Pos::verb},
    {"adj", Pos::adj},
    {"adv", Pos::adv},
}};

struct PointerSite {
  SynsetId target;
  std::string file;
  std::size_t line_no;
};

void read_data_file(const std::filesystem::path& path, Pos pos, LexicalStore::Builder& builder,
                    std::unordered_set<SynsetId, SynsetIdHash>& seen, std::vector<PointerSite>& pointers) {
  LineReader reader(path);
  std::string line;
  while (reader.next(line)) {
    if (line.empty() || line.front() == ' ') continue;  // license header
    const auto bar = line.find(" | ");
    const auto fields = split_ws(std::string_view(line).substr(0, bar == std::string::npos ? line.size() : bar));
    if (fields.size() < 4) reader.fail("too few fields");

    Synset s;
    std::uint32_t offset = 0;
    if (!parse_number(fields[0], offset)) reader.fail("bad synset offset");
    if (fields[2].size() != 1 || parse_pos(fields[2][0]) != pos) reader.fail("unexpected ss_type");
    s.id = {offset, pos};

    std::uint32_t w_cnt = 0;
    if (!parse_number(fields[3], w_cnt, 16)) reader.fail("bad word count");
    std::size_t i = 4;
    if (fields.size() < i + 2 * w_cnt + 1) reader.fail("truncated word list");
    for (std::uint32_t w = 0; w < w_cnt; ++w, i += 2) s.lemmas.push_back(clean_lemma(fields[i]));

    std::uint32_t p_cnt = 0;
    if (!parse_number(fields[i++], p_cnt)) reader.fail("bad pointer count");
    if (fields.size() < i + 4 * p_cnt) reader.fail("truncated pointer list");
    for (std::uint32_t p = 0; p < p_cnt; ++p, i += 4) {
      const auto symbol = fields[i];
      if (symbol != "@" && symbol != "@i") continue;
      std::uint32_t target = 0;
      const auto target_pos = fields[i + 2].size() == 1 ? parse_pos(fields[i + 2][0]) : std::nullopt;
      if (!parse_number(fields[i + 1], target) || !target_pos) reader.fail("bad pointer");
      s.hypernyms.push_back({target, *target_pos});
      pointers.push_back({s.hypernyms.back(), path.string(), reader.line_no()});
    }
    seen.insert(s.id);
    builder.add_synset(std::move(s));
  }
}

void read_index_file(const std::filesystem::path& path, Pos pos, LexicalStore::Builder& builder,
                     const std::unordered_set<SynsetId, SynsetIdHash>& seen) {
  LineReader reader(path);
  std::string line;
  while (reader.next(line)) {
    if (line.empty() || line.front() == ' ') continue;
    const auto fields = split_ws(line);
    if (fields.size() < 6) reader.fail("too few fields");
    std::uint32_t synset_cnt = 0, p_cnt = 0;
    if (!parse_number(fields[2], synset_cnt) || !parse_number(fields[3], p_cnt)) reader.fail("bad counts");
    const std::size_t first_offset = 4 + p_cnt + 2;
    if (fields.size() != first_offset + synset_cnt) reader.fail("synset count mismatch");
    const std::string lemma = clean_lemma(fields[0]);
    for (std::size_t i = first_offset; i < fields.size(); ++i) {
      std::uint32_t offset = 0;
      if (!parse_number(fields[i], offset)) reader.fail("bad synset offset");
      if (!seen.contains({offset, pos})) reader.fail("sense points at a synset missing from the data file");
      builder.add_sense(lemma, {offset, pos});
    }
  }
}

}  // namespace

std::optional<Pos> parse_pos(char c) {
  switch (c) {
    case 'n':
      return Pos::noun;
    case 'v':
      return Pos::verb;
    case 'a':
    case 's':
      return Pos::adj;
    case 'r':
      return Pos::adv;
    default:
      return std::nullopt;
  }
}

std::string to_string(SynsetId id) {
  std::string digits = std::to_string(id.offset);
  if (digits.size() < 8) digits.insert(0, 8 - digits.size(), '0');
  return digits + static_cast<char>(id.pos);
}

// ---------------------------------------------------------------- ICTable

ICTable ICTable::from_values(const std::unordered_map<SynsetId, double, SynsetIdHash>& values) {
  ICTable t;
  for (const auto& [id, v] : values) {
    if (!std::isfinite(v) || v < 0) throw Error("IC value for " + to_string(id) + " is not a finite non-negative number");
    t.values_.emplace(id, v);
  }
  return t;
}

ICTable ICTable::load(const std::filesystem::path& path) {
  LineReader reader(path);
  std::string line;
  if (!reader.next(line) || !line.starts_with("wnver")) reader.fail("missing wnver header");

  std::unordered_map<SynsetId, double, SynsetIdHash> counts;
  std::unordered_map<char, double> root_total;
  while (reader.next(line)) {
    const auto fields = split_ws(line);
    if (fields.empty()) continue;
    if (fields.size() < 2 || fields.size() > 3 || fields[0].size() < 2) reader.fail("expected '<offset><pos> <count>'");
    const auto pos = parse_pos(fields[0].back());
    std::uint32_t offset = 0;
    if (!pos || !parse_number(fields[0].substr(0, fields[0].size() - 1), offset)) reader.fail("bad synset key");
    double count = 0;
    if (!parse_number(fields[1], count) || !std::isfinite(count) || count < 0) reader.fail("bad count");
    if (fields.size() == 3) {
      if (fields[2] != "ROOT") reader.fail("unexpected trailing field");
      root_total[static_cast<char>(*pos)] += count;
    }
    counts[{offset, *pos}] = count;
  }

  ICTable t;
  for (const auto& [id, count] : counts) {
    const double total = root_total[static_cast<char>(id.pos)];
    if (count <= 0 || total <= 0) continue;
    t.values_.emplace(id, std::max(0.0, -std::log(count / total)));
  }
  return t;
}

std::optional<double> ICTable::ic(SynsetId id) const {
  if (const auto it = values_.find(id); it != values_.end()) return it->second;
  return std::nullopt;
}

// ---------------------------------------------------------------- LexicalStore

LexicalStore::Builder& LexicalStore::Builder::add_synset(Synset s) {
  synsets_.push_back(std::move(s));
  return *this;
}

LexicalStore::Builder& LexicalStore::Builder::add_sense(std::string word, SynsetId id) {
  senses_.emplace_back(std::move(word), id);
  return *this;
}

LexicalStore LexicalStore::Builder::build() && {
  LexicalStore store;
  store.synsets_ = std::move(synsets_);
  store.index_.reserve(store.synsets_.size());
  for (std::uint32_t i = 0; i < store.synsets_.size(); ++i)
    if (!store.index_.emplace(store.synsets_[i].id, i).second)
      throw Error("duplicate synset " + to_string(store.synsets_[i].id));

  for (const auto& s : store.synsets_)
    for (const auto& h : s.hypernyms)
      if (!store.index_.contains(h))
        throw UnknownSynset("hypernym " + to_string(h) + " of " + to_string(s.id) + " is not in the store");

  if (senses_.empty()) {
    for (const auto& s : store.synsets_)
      for (const auto& lemma : s.lemmas) {
        auto& v = store.words_[lemma];
        if (std::find(v.begin(), v.end(), s.id) == v.end()) v.push_back(s.id);
      }
  } else {
    for (auto& [word, id] : senses_) {
      if (!store.index_.contains(id)) throw UnknownSynset("index entry '" + word + "' points at missing " + to_string(id));
      store.words_[std::move(word)].push_back(id);
    }
  }

  // Hypernym closure and depth over the noun and verb taxonomies.
  const std::size_t n = store.synsets_.size();
  store.ancestors_.assign(n, {});
  store.depth_.assign(n, 0);
  std::vector<char> state(n, 0);  // 0 new, 1 on stack, 2 done
  struct Frame {
    std::uint32_t node;
    std::size_t next_parent;
  };
  std::vector<Frame> stack;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (state[root] != 0 || !taxonomic(store.synsets_[root].id.pos)) continue;
    stack.push_back({root, 0});
    state[root] = 1;
    while (!stack.empty()) {
      auto& top = stack.back();
      const auto& hyps = store.synsets_[top.node].hypernyms;
      if (top.next_parent < hyps.size()) {
        const SynsetId parent_id = hyps[top.next_parent++];
        if (parent_id.pos != store.synsets_[top.node].id.pos) continue;
        const std::uint32_t parent = store.index_.at(parent_id);
        if (state[parent] == 1) throw Error("hypernym cycle through " + to_string(parent_id));
        if (state[parent] == 0) {
          state[parent] = 1;
          stack.push_back({parent, 0});
        }
        continue;
      }
      const std::uint32_t node = top.node;
      std::vector<SynsetId> anc{store.synsets_[node].id};
      int depth = 0;
      bool has_parent = false;
      for (const auto& h : hyps) {
        if (h.pos != store.synsets_[node].id.pos) continue;
        const std::uint32_t p = store.index_.at(h);
        anc.insert(anc.end(), store.ancestors_[p].begin(), store.ancestors_[p].end());
        depth = std::max(depth, store.depth_[p] + 1);
        has_parent = true;
      }
      std::sort(anc.begin(), anc.end());
      anc.erase(std::unique(anc.begin(), anc.end()), anc.end());
      store.ancestors_[node] = std::move(anc);
      store.depth_[node] = has_parent ? depth : 0;
      state[node] = 2;
      stack.pop_back();
    }
  }
  return store;
}

std::uint32_t LexicalStore::slot(SynsetId id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) throw UnknownSynset("unknown synset " + to_string(id));
  return it->second;
}

bool LexicalStore::contains(std::string_view word) const { return words_.contains(std::string(word)); }

std::span<const SynsetId> LexicalStore::senses(std::string_view word) const {
  if (const auto it = words_.find(std::string(word)); it != words_.end()) return it->second;
  return {};
}

const Synset& LexicalStore::synset(SynsetId id) const { return synsets_[slot(id)]; }

std::size_t LexicalStore::synset_count(Pos pos) const {
  return static_cast<std::size_t>(
      std::count_if(synsets_.begin(), synsets_.end(), [pos](const Synset& s) { return s.id.pos == pos; }));
}

std::span<const SynsetId> LexicalStore::ancestors(SynsetId id) const { return ancestors_[slot(id)]; }

int LexicalStore::depth(SynsetId id) const { return depth_[slot(id)]; }

// ---------------------------------------------------------------- queries

LexicalStore load_lexdb(const std::filesystem::path& dir) {
  for (const auto& [suffix, pos] : kFiles) {
    for (const char* kind : {"index.", "data."}) {
      const auto p = dir / (std::string(kind) + suffix);
      if (!std::filesystem::is_regular_file(p)) throw MissingFile(p.string());
    }
  }
  LexicalStore::Builder builder;
  std::unordered_set<SynsetId, SynsetIdHash> seen;
  std::vector<PointerSite> pointers;
  for (const auto& [suffix, pos] : kFiles)
    read_data_file(dir / (std::string("data.") + suffix), pos, builder, seen, pointers);
  for (const auto& p : pointers)
    if (!seen.contains(p.target)) throw MalformedLine(p.file, p.line_no, "hypernym " + to_string(p.target) + " does not resolve");
  for (const auto& [suffix, pos] : kFiles) read_index_file(dir / (std::string("index.") + suffix), pos, builder, seen);
  return std::move(builder).build();
}

std::set<std::string> synonyms(const LexicalStore& store, std::string_view word) {
  std::set<std::string> out;
  for (const auto& id : store.senses(word))
    for (const auto& lemma : store.synset(id).lemmas)
      if (lemma != word) out.insert(lemma);
  return out;
}

std::optional<SynsetId> lcs(const LexicalStore& store, SynsetId c1, SynsetId c2, const ICTable* ic) {
  const auto a1 = store.ancestors(c1);
  const auto a2 = store.ancestors(c2);
  if (c1.pos != c2.pos || !taxonomic(c1.pos)) return std::nullopt;

  std::vector<SynsetId> common;
  std::set_intersection(a1.begin(), a1.end(), a2.begin(), a2.end(), std::back_inserter(common));
  if (common.empty()) return std::nullopt;

  std::optional<SynsetId> best;
  double best_ic = -1;
  if (ic != nullptr) {
    for (const auto& c : common)
      if (const auto v = ic->ic(c); v && *v > best_ic) {
        best = c;
        best_ic = *v;
      }
    if (best) return best;
  }
  int best_depth = -1;
  for (const auto& c : common)
    if (const int d = store.depth(c); d > best_depth) {
      best = c;
      best_depth = d;
    }
  return best;
}

std::optional<double> resnik(const LexicalStore& store, const ICTable& ic, std::string_view w1, std::string_view w2) {
  auto closure = [&](std::string_view w, Pos pos) {
    std::vector<SynsetId> out;
    for (const auto& s : store.senses(w)) {
      if (s.pos != pos) continue;
      const auto anc = store.ancestors(s);
      out.insert(out.end(), anc.begin(), anc.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };

  std::optional<double> best;
  for (const Pos pos : {Pos::noun, Pos::verb}) {
    const auto a1 = closure(w1, pos);
    if (a1.empty()) continue;
    const auto a2 = closure(w2, pos);
    std::vector<SynsetId> common;
    std::set_intersection(a1.begin(), a1.end(), a2.begin(), a2.end(), std::back_inserter(common));
    for (const auto& c : common)
      if (const auto v = ic.ic(c); v && (!best || *v > *best)) best = v;
  }
  return best;
}

}  // namespace paradet::resources
