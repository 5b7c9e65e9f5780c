#include "paradet/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "paradet/error.hpp"

namespace paradet::classify {
namespace {

void check_features(const std::vector<std::vector<double>>& xs, std::span<const double> x) {
  if (!xs.empty() && xs.front().size() != x.size())
    throw DimMismatch("classifier fitted on " + std::to_string(xs.front().size()) + " features, got " +
                      std::to_string(x.size()));
}

std::size_t feature_count(std::span<const Sample> train) {
  const std::size_t d = train.front().x.size();
  for (const auto& s : train)
    if (s.x.size() != d) throw DimMismatch("training samples have differing feature counts");
  return d;
}

// Fisher-Yates with an explicit draw so results do not depend on the standard
// library's distribution implementations.
void shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng() % i]);
}

}  // namespace

const char* to_string(Label l) { return positive(l) ? "paraphrased" : "not_paraphrased"; }

std::optional<Label> parse_label(std::string_view s) {
  if (s == "paraphrased" || s == "1") return Label::paraphrased;
  if (s == "not_paraphrased" || s == "0") return Label::not_paraphrased;
  return std::nullopt;
}

const char* to_string(Dimension d) {
  switch (d) {
    case Dimension::semantic:
      return "semantic";
    case Dimension::syntactic:
      return "syntactic";
    case Dimension::insdel:
      return "insdel";
  }
  return "?";
}

std::vector<Dimension> parse_dimensions(std::string_view csv) {
  std::vector<Dimension> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const std::size_t comma = std::min(csv.find(',', start), csv.size());
    const auto name = csv.substr(start, comma - start);
    if (name == "semantic")
      out.push_back(Dimension::semantic);
    else if (name == "syntactic")
      out.push_back(Dimension::syntactic);
    else if (name == "insdel")
      out.push_back(Dimension::insdel);
    else
      throw ConfigError("unknown feature dimension '" + std::string(name) + "'");
    start = comma + 1;
  }
  return out;
}

std::vector<double> select(const SimilarityVector& v, std::span<const Dimension> dims) {
  std::vector<double> out;
  out.reserve(dims.size());
  for (auto d : dims) {
    switch (d) {
      case Dimension::semantic:
        out.push_back(v.semantic);
        break;
      case Dimension::syntactic:
        out.push_back(v.syntactic);
        break;
      case Dimension::insdel:
        out.push_back(v.insdel);
        break;
    }
  }
  return out;
}

// ---------------------------------------------------------------- KNN

std::vector<double> KnnClassifier::transform(std::span<const double> x) const {
  std::vector<double> out(x.begin(), x.end());
  if (standardize_)
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (out[i] - mean_[i]) / scale_[i];
  return out;
}

void KnnClassifier::fit(std::span<const Sample> train) {
  if (train.empty()) throw EmptyTrainingSet();
  if (k_ == 0 || k_ > train.size())
    throw InsufficientData("k = " + std::to_string(k_) + " needs at least that many training points, got " +
                           std::to_string(train.size()));
  const std::size_t d = feature_count(train);
  mean_.assign(d, 0.0);
  scale_.assign(d, 1.0);
  if (standardize_) {
    for (const auto& s : train)
      for (std::size_t i = 0; i < d; ++i) mean_[i] += s.x[i];
    for (auto& m : mean_) m /= static_cast<double>(train.size());
    std::vector<double> var(d, 0.0);
    for (const auto& s : train)
      for (std::size_t i = 0; i < d; ++i) var[i] += (s.x[i] - mean_[i]) * (s.x[i] - mean_[i]);
    for (std::size_t i = 0; i < d; ++i) {
      const double sd = std::sqrt(var[i] / static_cast<double>(train.size()));
      scale_[i] = sd > 0 ? sd : 1.0;
    }
  }
  x_.clear();
  y_.clear();
  for (const auto& s : train) {
    x_.push_back(transform(s.x));
    y_.push_back(s.y);
  }
}

Prediction KnnClassifier::predict(std::span<const double> x) const {
  if (x_.empty()) throw EmptyTrainingSet();
  check_features(x_, x);
  const auto q = transform(x);
  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(x_.size());
  for (std::size_t i = 0; i < x_.size(); ++i) {
    double sum = 0;
    for (std::size_t f = 0; f < q.size(); ++f) sum += (x_[i][f] - q[f]) * (x_[i][f] - q[f]);
    dist.emplace_back(sum, i);
  }
  const auto kth = dist.begin() + static_cast<std::ptrdiff_t>(k_);
  std::partial_sort(dist.begin(), kth, dist.end());
  std::size_t votes = 0;
  for (auto it = dist.begin(); it != kth; ++it) votes += positive(y_[it->second]) ? 1 : 0;

  Prediction p;
  p.score = static_cast<double>(votes) / static_cast<double>(k_);
  if (2 * votes == k_)
    p.label = y_[dist.front().second];  // even k tie: nearest neighbour decides
  else
    p.label = 2 * votes > k_ ? Label::paraphrased : Label::not_paraphrased;
  return p;
}

nlohmann::json KnnClassifier::to_json() const {
  nlohmann::json ys = nlohmann::json::array();
  for (auto y : y_) ys.push_back(positive(y) ? 1 : 0);
  return {{"type", "knn"}, {"k", k_},   {"standardize", standardize_}, {"mean", mean_},
          {"scale", scale_}, {"x", x_}, {"y", ys}};
}

KnnClassifier KnnClassifier::from_json(const nlohmann::json& j) {
  KnnClassifier m(j.at("k").get<std::size_t>(), j.at("standardize").get<bool>());
  m.mean_ = j.at("mean").get<std::vector<double>>();
  m.scale_ = j.at("scale").get<std::vector<double>>();
  m.x_ = j.at("x").get<std::vector<std::vector<double>>>();
  for (int y : j.at("y").get<std::vector<int>>()) m.y_.push_back(y != 0 ? Label::paraphrased : Label::not_paraphrased);
  if (m.x_.size() != m.y_.size() || m.k_ == 0 || m.k_ > m.x_.size()) throw ConfigError("inconsistent KNN model");
  return m;
}

// ---------------------------------------------------------------- Gaussian NB

void GaussianNb::fit(std::span<const Sample> train) {
  if (train.empty()) throw EmptyTrainingSet();
  const std::size_t d = feature_count(train);
  auto estimate = [&](Label label) {
    ClassStats st;
    st.mean.assign(d, 0.0);
    st.var.assign(d, 0.0);
    std::size_t n = 0;
    for (const auto& s : train) {
      if (s.y != label) continue;
      ++n;
      for (std::size_t i = 0; i < d; ++i) st.mean[i] += s.x[i];
    }
    if (n < 2)
      throw DegenerateClass(std::string("class ") + to_string(label) + " has " + std::to_string(n) +
                            " training points; need at least 2");
    for (auto& m : st.mean) m /= static_cast<double>(n);
    for (const auto& s : train) {
      if (s.y != label) continue;
      for (std::size_t i = 0; i < d; ++i) st.var[i] += (s.x[i] - st.mean[i]) * (s.x[i] - st.mean[i]);
    }
    for (auto& v : st.var) v = std::max(v / static_cast<double>(n), kVarianceFloor);
    st.prior = static_cast<double>(n) / static_cast<double>(train.size());
    return st;
  };
  pos_ = estimate(Label::paraphrased);
  neg_ = estimate(Label::not_paraphrased);
  fitted_ = true;
}

Prediction GaussianNb::predict(std::span<const double> x) const {
  if (!fitted_) throw EmptyTrainingSet();
  if (x.size() != pos_.mean.size()) throw DimMismatch("naive Bayes feature count mismatch");
  auto log_joint = [&](const ClassStats& st) {
    double lp = std::log(st.prior);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double diff = x[i] - st.mean[i];
      lp += -0.5 * std::log(2 * std::numbers::pi * st.var[i]) - diff * diff / (2 * st.var[i]);
    }
    return lp;
  };
  const double lp = log_joint(pos_);
  const double ln = log_joint(neg_);
  const double hi = std::max(lp, ln);
  const double posterior = std::exp(lp - hi) / (std::exp(lp - hi) + std::exp(ln - hi));
  return {posterior >= 0.5 ? Label::paraphrased : Label::not_paraphrased, posterior};
}

nlohmann::json GaussianNb::to_json() const {
  auto stats_json = [](const ClassStats& s) { return nlohmann::json{{"prior", s.prior}, {"mean", s.mean}, {"var", s.var}}; };
  return {{"type", "nb"}, {"paraphrased", stats_json(pos_)}, {"not_paraphrased", stats_json(neg_)}};
}

GaussianNb GaussianNb::from_json(const nlohmann::json& j) {
  auto stats_from = [](const nlohmann::json& s) {
    ClassStats st;
    st.prior = s.at("prior").get<double>();
    st.mean = s.at("mean").get<std::vector<double>>();
    st.var = s.at("var").get<std::vector<double>>();
    if (st.mean.size() != st.var.size() || st.prior <= 0 || st.prior >= 1) throw ConfigError("inconsistent NB model");
    return st;
  };
  GaussianNb m;
  m.pos_ = stats_from(j.at("paraphrased"));
  m.neg_ = stats_from(j.at("not_paraphrased"));
  if (m.pos_.mean.size() != m.neg_.mean.size()) throw ConfigError("inconsistent NB model");
  m.fitted_ = true;
  return m;
}

// ---------------------------------------------------------------- threshold

Prediction ThresholdRule::predict(std::span<const double> x) const {
  if (x.empty()) throw DimMismatch("threshold rule needs at least one feature");
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  return {mean >= threshold_ ? Label::paraphrased : Label::not_paraphrased, mean};
}

std::unique_ptr<Classifier> make_classifier(const ClassifierSpec& spec) {
  if (spec.type == "knn") {
    if (spec.k == 0) throw ConfigError("knn k must be positive");
    return std::make_unique<KnnClassifier>(spec.k, spec.standardize);
  }
  if (spec.type == "nb") return std::make_unique<GaussianNb>();
  if (spec.type == "threshold") {
    if (!(spec.threshold >= 0 && spec.threshold <= 1)) throw ConfigError("rule threshold must be in [0, 1]");
    return std::make_unique<ThresholdRule>(spec.threshold);
  }
  throw ConfigError("unknown classifier type '" + spec.type + "' (expected knn, nb or threshold)");
}

std::unique_ptr<Classifier> classifier_from_json(const nlohmann::json& j) {
  try {
    const auto type = j.at("type").get<std::string>();
    if (type == "knn") return std::make_unique<KnnClassifier>(KnnClassifier::from_json(j));
    if (type == "nb") return std::make_unique<GaussianNb>(GaussianNb::from_json(j));
    if (type == "threshold") return std::make_unique<ThresholdRule>(j.at("threshold").get<double>());
    throw ConfigError("unknown model type '" + type + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed model file: ") + e.what());
  }
}

// ---------------------------------------------------------------- metrics

void Confusion::add(Label truth, Label predicted) {
  if (positive(truth))
    ++(positive(predicted) ? tp : fn);
  else
    ++(positive(predicted) ? fp : tn);
}

Confusion& Confusion::operator+=(const Confusion& o) {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  tn += o.tn;
  return *this;
}

Metrics metrics(const Confusion& c) {
  Metrics m;
  if (c.tp + c.fp > 0) m.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  if (c.tp + c.fn > 0) m.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  if (m.precision + m.recall > 0) m.f1 = 2 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

double misclassification_rate(const Confusion& c) {
  return c.total() == 0 ? 0.0 : static_cast<double>(c.fp + c.fn) / static_cast<double>(c.total());
}

double auc_roc(std::span<const double> scores, std::span<const Label> labels) {
  if (scores.size() != labels.size()) throw DimMismatch("scores and labels differ in length");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Sum of average ranks (1-based) of the positives.
  double rank_sum = 0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t t = i; t < j; ++t)
      if (positive(labels[order[t]])) {
        rank_sum += avg_rank;
        ++n_pos;
      }
    i = j;
  }
  const std::size_t n_neg = scores.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) throw SingleClassInput();
  const double np = static_cast<double>(n_pos), nn = static_cast<double>(n_neg);
  return (rank_sum - np * (np + 1) / 2.0) / (np * nn);
}

// ---------------------------------------------------------------- CV

std::vector<std::size_t> stratified_folds(std::span<const Label> labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw InsufficientData("cross-validation needs k >= 2");
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < labels.size(); ++i) (positive(labels[i]) ? pos : neg).push_back(i);
  if (pos.size() < k || neg.size() < k)
    throw InsufficientData("stratified " + std::to_string(k) + "-fold CV needs >= " + std::to_string(k) +
                           " items per class, got " + std::to_string(pos.size()) + " paraphrased and " +
                           std::to_string(neg.size()) + " not");
  std::mt19937_64 rng(seed);
  shuffle(pos, rng);
  shuffle(neg, rng);
  std::vector<std::size_t> fold(labels.size());
  std::size_t next = 0;
  for (auto i : pos) fold[i] = next++ % k;
  for (auto i : neg) fold[i] = next++ % k;
  return fold;
}

EvalReport cross_validate(std::span<const Sample> data, const Classifier& prototype, std::size_t k,
                          std::uint64_t seed) {
  std::vector<Label> labels;
  labels.reserve(data.size());
  for (const auto& s : data) labels.push_back(s.y);

  EvalReport report;
  report.fold_of = stratified_folds(labels, k, seed);
  report.predictions.resize(data.size());

  for (std::size_t f = 0; f < k; ++f) {
    std::vector<Sample> train;
    std::vector<std::size_t> test;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (report.fold_of[i] == f)
        test.push_back(i);
      else
        train.push_back(data[i]);
    }
    auto model = prototype.fresh();
    model->fit(train);

    FoldReport fr;
    fr.fold = f;
    fr.size = test.size();
    std::vector<double> scores;
    std::vector<Label> truth;
    for (auto i : test) {
      const auto p = model->predict(data[i].x);
      report.predictions[i] = p;
      fr.confusion.add(data[i].y, p.label);
      scores.push_back(p.score);
      truth.push_back(data[i].y);
    }
    fr.metrics = metrics(fr.confusion);
    if (std::any_of(truth.begin(), truth.end(), positive) && !std::all_of(truth.begin(), truth.end(), positive))
      fr.auc = auc_roc(scores, truth);
    report.confusion += fr.confusion;
    report.per_fold.push_back(fr);
  }

  const auto m = metrics(report.confusion);
  report.precision = m.precision;
  report.recall = m.recall;
  report.f1 = m.f1;
  report.misclassification_rate = misclassification_rate(report.confusion);
  std::vector<double> scores;
  for (const auto& p : report.predictions) scores.push_back(p.score);
  report.auc = auc_roc(scores, labels);
  return report;
}

nlohmann::json to_json(const EvalReport& r) {
  auto confusion = [](const Confusion& c) {
    return nlohmann::json{{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn}};
  };
  nlohmann::json folds = nlohmann::json::array();
  for (const auto& f : r.per_fold) {
    folds.push_back({{"fold", f.fold},
                     {"size", f.size},
                     {"confusion", confusion(f.confusion)},
                     {"precision", f.metrics.precision},
                     {"recall", f.metrics.recall},
                     {"f1", f.metrics.f1},
                     {"auc", f.auc ? nlohmann::json(*f.auc) : nlohmann::json(nullptr)}});
  }
  return {{"confusion", confusion(r.confusion)},
          {"precision", r.precision},
          {"recall", r.recall},
          {"f1", r.f1},
          {"auc", r.auc},
          {"misclassification_rate", r.misclassification_rate},
          {"folds", folds}};
}

}  // namespace paradet::classify
