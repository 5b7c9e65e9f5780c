#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace paradet::classify {

enum class Label { not_paraphrased = 0, paraphrased = 1 };

inline bool positive(Label l) { return l == Label::paraphrased; }
const char* to_string(Label l);
std::optional<Label> parse_label(std::string_view s);

struct SimilarityVector {
  double semantic = 0;
  double syntactic = 0;
  double insdel = 0;

  bool operator==(const SimilarityVector&) const = default;
};

enum class Dimension { semantic, syntactic, insdel };

const char* to_string(Dimension d);
// Comma-separated dimension names, e.g. "semantic,insdel". Throws ConfigError.
std::vector<Dimension> parse_dimensions(std::string_view csv);
std::vector<double> select(const SimilarityVector& v, std::span<const Dimension> dims);

struct Sample {
  std::vector<double> x;
  Label y = Label::not_paraphrased;
};

struct Prediction {
  Label label = Label::not_paraphrased;
  double score = 0;  // P(paraphrased)-like, used for ranking
};

// Binary classifier over small dense feature vectors. Fit is not thread-safe;
// predict on a fitted instance is.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual void fit(std::span<const Sample> train) = 0;
  virtual Prediction predict(std::span<const double> x) const = 0;
  // Same hyperparameters, not fitted.
  virtual std::unique_ptr<Classifier> fresh() const = 0;
  virtual nlohmann::json to_json() const = 0;
};

class KnnClassifier final : public Classifier {
 public:
  explicit KnnClassifier(std::size_t k = 5, bool standardize = false) : k_(k), standardize_(standardize) {}

  void fit(std::span<const Sample> train) override;
  Prediction predict(std::span<const double> x) const override;
  std::unique_ptr<Classifier> fresh() const override { return std::make_unique<KnnClassifier>(k_, standardize_); }
  nlohmann::json to_json() const override;
  static KnnClassifier from_json(const nlohmann::json& j);

  std::size_t k() const { return k_; }

 private:
  std::size_t k_;
  bool standardize_;
  std::vector<double> mean_, scale_;
  std::vector<std::vector<double>> x_;
  std::vector<Label> y_;

  std::vector<double> transform(std::span<const double> x) const;
};

// Gaussian naive Bayes with maximum-likelihood variances floored at 1e-9.
class GaussianNb final : public Classifier {
 public:
  static constexpr double kVarianceFloor = 1e-9;

  void fit(std::span<const Sample> train) override;
  Prediction predict(std::span<const double> x) const override;
  std::unique_ptr<Classifier> fresh() const override { return std::make_unique<GaussianNb>(); }
  nlohmann::json to_json() const override;
  static GaussianNb from_json(const nlohmann::json& j);

  struct ClassStats {
    double prior = 0;
    std::vector<double> mean;
    std::vector<double> var;
  };
  const ClassStats& stats(Label l) const { return positive(l) ? pos_ : neg_; }

 private:
  ClassStats pos_, neg_;
  bool fitted_ = false;
};

// Paraphrased when the mean feature value reaches the threshold. Fit is a no-op.
class ThresholdRule final : public Classifier {
 public:
  explicit ThresholdRule(double threshold = 0.5) : threshold_(threshold) {}

  void fit(std::span<const Sample>) override {}
  Prediction predict(std::span<const double> x) const override;
  std::unique_ptr<Classifier> fresh() const override { return std::make_unique<ThresholdRule>(threshold_); }
  nlohmann::json to_json() const override { return {{"type", "threshold"}, {"threshold", threshold_}}; }

 private:
  double threshold_;
};

struct ClassifierSpec {
  std::string type = "knn";  // knn | nb | threshold
  std::size_t k = 5;
  bool standardize = false;
  double threshold = 0.5;
};

std::unique_ptr<Classifier> make_classifier(const ClassifierSpec& spec);  // throws ConfigError
std::unique_ptr<Classifier> classifier_from_json(const nlohmann::json& j);

struct Confusion {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  void add(Label truth, Label predicted);
  Confusion& operator+=(const Confusion& o);
  bool operator==(const Confusion&) const = default;
};

struct Metrics {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

Metrics metrics(const Confusion& c);
double misclassification_rate(const Confusion& c);

// Mann-Whitney form: P(score of random positive > random negative), ties 0.5.
// Throws SingleClassInput.
double auc_roc(std::span<const double> scores, std::span<const Label> labels);

struct FoldReport {
  std::size_t fold = 0;
  std::size_t size = 0;
  Confusion confusion;
  Metrics metrics;
  std::optional<double> auc;
};

struct EvalReport {
  Confusion confusion;
  double precision = 0, recall = 0, f1 = 0, auc = 0, misclassification_rate = 0;
  std::vector<FoldReport> per_fold;
  // Indexed like the input dataset.
  std::vector<std::size_t> fold_of;
  std::vector<Prediction> predictions;
};

nlohmann::json to_json(const EvalReport& r);

// Fold index per item; each class is shuffled with the seed and dealt round
// robin. Throws InsufficientData when a class has fewer than k items.
std::vector<std::size_t> stratified_folds(std::span<const Label> labels, std::size_t k, std::uint64_t seed);

// k-fold CV. Aggregate confusion is the sum over folds; AUC is on pooled
// scores. Deterministic for a fixed seed.
EvalReport cross_validate(std::span<const Sample> data, const Classifier& prototype, std::size_t k = 10,
                          std::uint64_t seed = 0);

}  // namespace paradet::classify
