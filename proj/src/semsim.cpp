#include "paradet/semsim.hpp"

#include <cmath>
#include <set>

#include "paradet/error.hpp"

namespace paradet::semsim {
namespace {

using textprep::Token;

// Headword to query the lexical database with: the normalized form, or the
// stem when the normalized form is not a headword.
std::string_view lookup_form(const resources::LexicalStore& db, const Token& t) {
  if (db.contains(t.normalized) || t.stem.empty()) return t.normalized;
  return t.stem;
}

std::optional<std::size_t> exact_match(const Token& q, const SourcePool& src) {
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (src.consumed(i)) continue;
    const Token& s = src.token(i);
    if (s.stem == q.stem || s.normalized == q.normalized) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> synonym_match(const std::set<std::string>& syns, const SourcePool& src) {
  std::set<std::string> syn_stems;
  for (const auto& s : syns) syn_stems.insert(textprep::porter_stem(s));
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (src.consumed(i)) continue;
    const Token& s = src.token(i);
    if (syns.contains(s.normalized) || syn_stems.contains(s.stem)) return i;
  }
  return std::nullopt;
}

std::optional<std::pair<std::size_t, double>> embedding_match(const Token& q, const std::set<std::string>& syns,
                                                              const SourcePool& src,
                                                              const resources::EmbeddingStore& emb) {
  std::vector<std::span<const float>> probes;
  if (syns.empty()) {
    if (auto v = emb.find_folded(q.normalized)) probes.push_back(*v);
  } else {
    for (const auto& s : syns)
      if (auto v = emb.find_folded(s)) probes.push_back(*v);
  }
  if (probes.empty()) return std::nullopt;

  std::optional<std::pair<std::size_t, double>> best;
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (src.consumed(i)) continue;
    const auto sv = emb.find_folded(src.token(i).normalized);
    if (!sv) continue;
    for (const auto& p : probes) {
      const double c = resources::cosine(p, *sv);
      if (!best || c > best->second) best = std::pair{i, c};
    }
  }
  return best;
}

std::optional<std::pair<std::size_t, double>> resnik_match(const Token& q, const SourcePool& src,
                                                           const resources::LexicalStore& db,
                                                           const resources::ICTable& ic) {
  const auto qform = lookup_form(db, q);
  if (!db.contains(qform)) return std::nullopt;
  std::optional<std::pair<std::size_t, double>> best;
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (src.consumed(i)) continue;
    const auto r = resources::resnik(db, ic, qform, lookup_form(db, src.token(i)));
    if (r && (!best || *r > best->second)) best = std::pair{i, *r};
  }
  return best;
}

}  // namespace

void validate(const SemThresholds& th) {
  if (!std::isfinite(th.embed_min) || th.embed_min < 0 || th.embed_min > 1)
    throw ConfigError("embed_min must be in [0, 1]");
  if (!std::isfinite(th.resnik_min) || th.resnik_min < 0) throw ConfigError("resnik_min must be finite and >= 0");
}

const char* to_string(Channel c) {
  switch (c) {
    case Channel::exact:
      return "exact";
    case Channel::synonym:
      return "synonym";
    case Channel::embedding:
      return "embedding";
    case Channel::resnik:
      return "resnik";
  }
  return "?";
}

nlohmann::json to_json(const WordMatch& m) {
  return {{"query_index", m.query_index},
          {"source_index", m.source_index},
          {"channel", to_string(m.channel)},
          {"score", m.score}};
}

std::optional<WordMatch> match_word(const Token& query, SourcePool& source, const Resources& res,
                                    const SemThresholds& th, const Channels& channels) {
  auto take = [&](std::size_t i, Channel ch, double score) {
    source.consume(i);
    return WordMatch{query.index, source.token(i).index, ch, score};
  };

  if (channels.exact)
    if (auto i = exact_match(query, source)) return take(*i, Channel::exact, 1.0);

  std::set<std::string> syns;
  if (res.lexdb != nullptr) syns = resources::synonyms(*res.lexdb, lookup_form(*res.lexdb, query));

  if (channels.synonym && !syns.empty())
    if (auto i = synonym_match(syns, source)) return take(*i, Channel::synonym, 1.0);

  if (channels.embedding && res.embeddings != nullptr && !res.embeddings->empty())
    if (auto m = embedding_match(query, syns, source, *res.embeddings); m && m->second >= th.embed_min)
      return take(m->first, Channel::embedding, m->second);

  if (channels.resnik && res.lexdb != nullptr && res.ic != nullptr)
    if (auto m = resnik_match(query, source, *res.lexdb, *res.ic); m && m->second >= th.resnik_min)
      return take(m->first, Channel::resnik, m->second);

  return std::nullopt;
}

double semantic_similarity(const textprep::ProcessedSentence& sp, const textprep::ProcessedSentence& sr,
                           const Resources& res, const SemThresholds& th, const Channels& channels,
                           std::vector<WordMatch>* trace) {
  if (sp.content_tokens.empty()) throw EmptySentence();
  SourcePool pool(sr.content_tokens);
  std::size_t matched = 0;
  for (const auto& q : sp.content_tokens) {
    if (auto m = match_word(q, pool, res, th, channels)) {
      ++matched;
      if (trace != nullptr) trace->push_back(*m);
    }
  }
  return static_cast<double>(matched) / static_cast<double>(sp.content_tokens.size());
}

}  // namespace paradet::semsim
