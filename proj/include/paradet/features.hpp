#pragma once

#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "paradet/classify.hpp"
#include "paradet/semsim.hpp"
#include "paradet/textprep.hpp"

namespace paradet::classify {

// Sentence scores below these are discarded before averaging.
struct DiscardThresholds {
  double semantic = 0.3;
  double syntactic = 0.3;
  double insdel = 0.3;
};

struct FeatureConfig {
  textprep::PrepConfig prep;
  semsim::Resources resources;
  semsim::SemThresholds thresholds;
  semsim::Channels channels;
  DiscardThresholds discard;
};

void validate(const DiscardThresholds& d);  // throws ConfigError

// Mean of the scores that reach `discard`; 0 when none do.
double aggregate_dimension(std::span<const double> best_scores, double discard);

// Best-match score of one suspect sentence against every source sentence.
struct SentenceTrace {
  std::size_t suspect_sentence = 0;
  std::optional<double> semantic;  // absent for sentences with no content tokens
  double syntactic = 0;
  std::optional<double> insdel;
  std::vector<semsim::WordMatch> matches;  // from the best semantic source sentence
};

nlohmann::json to_json(const SentenceTrace& t);

// For each suspect sentence and dimension, the max over source sentences;
// survivors of the discard thresholds are averaged. Throws EmptyPassage.
SimilarityVector passage_features(std::span<const textprep::ProcessedSentence> suspect,
                                  std::span<const textprep::ProcessedSentence> source, const FeatureConfig& cfg,
                                  std::vector<SentenceTrace>* trace = nullptr);

SimilarityVector passage_features(std::string_view suspect_text, std::string_view source_text,
                                  const FeatureConfig& cfg, std::vector<SentenceTrace>* trace = nullptr);

}  // namespace paradet::classify
