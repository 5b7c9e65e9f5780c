#include "paradet/features.hpp"

#include <algorithm>
#include <cmath>

#include "paradet/editsim.hpp"
#include "paradet/error.hpp"
#include "paradet/synsim.hpp"

namespace paradet::classify {
namespace {

void check_unit(double v, const char* name) {
  if (!std::isfinite(v) || v < 0 || v > 1) throw ConfigError(std::string(name) + " must be in [0, 1]");
}

}  // namespace

void validate(const DiscardThresholds& d) {
  check_unit(d.semantic, "discard_semantic");
  check_unit(d.syntactic, "discard_syntactic");
  check_unit(d.insdel, "discard_insdel");
}

double aggregate_dimension(std::span<const double> best_scores, double discard) {
  double sum = 0;
  std::size_t n = 0;
  for (double s : best_scores) {
    if (s < discard) continue;
    sum += s;
    ++n;
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

nlohmann::json to_json(const SentenceTrace& t) {
  nlohmann::json matches = nlohmann::json::array();
  for (const auto& m : t.matches) matches.push_back(semsim::to_json(m));
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  return {{"suspect_sentence", t.suspect_sentence},
          {"semantic", opt(t.semantic)},
          {"syntactic", t.syntactic},
          {"insdel", opt(t.insdel)},
          {"matches", matches}};
}

SimilarityVector passage_features(std::span<const textprep::ProcessedSentence> suspect,
                                  std::span<const textprep::ProcessedSentence> source, const FeatureConfig& cfg,
                                  std::vector<SentenceTrace>* trace) {
  if (suspect.empty()) throw EmptyPassage("suspect");
  if (source.empty()) throw EmptyPassage("source");

  std::vector<std::vector<std::string>> source_stems;
  for (const auto& sr : source) source_stems.push_back(editsim::stems(sr.content_tokens));

  std::vector<double> sem, syn, ins;
  for (const auto& sp : suspect) {
    SentenceTrace st;
    st.suspect_sentence = sp.sentence_id;
    const bool has_content = !sp.content_tokens.empty();
    const auto sp_stems = editsim::stems(sp.content_tokens);
    double best_sem = -1, best_syn = 0, best_ins = -1;
    for (std::size_t j = 0; j < source.size(); ++j) {
      const auto& sr = source[j];
      best_syn = std::max(best_syn, synsim::syntactic_similarity(sp.all_tokens, sr.all_tokens));
      if (!has_content) continue;
      std::vector<semsim::WordMatch> matches;
      const double s = semsim::semantic_similarity(sp, sr, cfg.resources, cfg.thresholds, cfg.channels,
                                                   trace ? &matches : nullptr);
      if (s > best_sem) {
        best_sem = s;
        st.matches = std::move(matches);
      }
      best_ins = std::max(best_ins, editsim::insdel_similarity(sp_stems, source_stems[j]));
    }
    syn.push_back(best_syn);
    st.syntactic = best_syn;
    if (has_content) {
      sem.push_back(best_sem);
      ins.push_back(best_ins);
      st.semantic = best_sem;
      st.insdel = best_ins;
    }
    if (trace) trace->push_back(std::move(st));
  }
  return {aggregate_dimension(sem, cfg.discard.semantic), aggregate_dimension(syn, cfg.discard.syntactic),
          aggregate_dimension(ins, cfg.discard.insdel)};
}

SimilarityVector passage_features(std::string_view suspect_text, std::string_view source_text,
                                  const FeatureConfig& cfg, std::vector<SentenceTrace>* trace) {
  const auto sp = textprep::preprocess_passage(suspect_text, cfg.prep);
  const auto sr = textprep::preprocess_passage(source_text, cfg.prep);
  return passage_features(sp, sr, cfg, trace);
}

}  // namespace paradet::classify
