#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "paradet/config.hpp"
#include "paradet/corpus.hpp"
#include "paradet/error.hpp"
#include "paradet/features.hpp"
#include "paradet/gst.hpp"

namespace paradet::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Thrown for resources named by the config that cannot be found or read.
struct ResourceError : Error {
  using Error::Error;
};

struct Options {
  std::string config_path;
  std::string corpus_kind = "crowd";
  std::string data;
  std::string truth;
  std::string out_dir;
  std::string model;
  std::string dims;
  std::string suspect, source;
  std::size_t jobs = 0;
  std::size_t sample = 0;
  std::optional<std::uint64_t> seed;
  bool baseline = false;
  bool traces = false;
};

std::string fmt(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, r.ptr};
}

EngineConfig resolve_config(const Options& o) {
  EngineConfig c = o.config_path.empty() ? EngineConfig{} : [&] {
    if (!fs::exists(o.config_path)) throw ConfigError("config file not found: " + o.config_path);
    return load_config(o.config_path);
  }();
  if (o.seed) c.seed = *o.seed;
  if (!o.dims.empty()) c.dimensions = o.dims;
  return c;
}

std::unique_ptr<Engine> make_engine(const EngineConfig& c) {
  try {
    return std::make_unique<Engine>(c);
  } catch (const MissingFile& e) {
    throw ResourceError(e.what());
  }
}

std::size_t worker_count(std::size_t requested, std::size_t items) {
  std::size_t n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(n, items));
}

// Runs fn(i) for i in [0, n) on `jobs` threads. Results go to caller-owned
// slots, so output never depends on scheduling. Rethrows the failure with
// the smallest index.
template <class Fn>
void parallel_for(std::size_t n, std::size_t jobs, Fn fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < worker_count(jobs, n); ++t) pool.emplace_back(work);
    work();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<corpus::LabelledPair> load_pairs(const Options& o, std::uint64_t seed) {
  std::vector<corpus::LabelledPair> pairs;
  if (o.corpus_kind == "crowd") {
    pairs = corpus::load_crowd(o.data);
  } else if (o.corpus_kind == "cs") {
    if (o.truth.empty()) throw ConfigError("--corpus cs needs --truth FILE");
    pairs = corpus::load_clough_stevenson(o.data, o.truth);
  } else {
    pairs = corpus::load_jsonl(o.data);
  }
  if (o.sample && o.sample < pairs.size()) {
    // Partial Fisher-Yates, then restore corpus order.
    std::vector<std::size_t> idx(pairs.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < o.sample; ++i) std::swap(idx[i], idx[i + rng() % (idx.size() - i)]);
    idx.resize(o.sample);
    std::sort(idx.begin(), idx.end());
    std::vector<corpus::LabelledPair> picked;
    for (auto i : idx) picked.push_back(std::move(pairs[i]));
    pairs = std::move(picked);
  }
  if (pairs.empty()) throw ConfigError("corpus is empty");
  return pairs;
}

struct PairFeatures {
  classify::SimilarityVector v;
  std::vector<classify::SentenceTrace> trace;
  bool empty = false;  // a passage had no sentences; features left at 0
};

std::vector<PairFeatures> extract(const Engine& engine, const std::vector<corpus::LabelledPair>& pairs,
                                  std::size_t jobs, bool traces) {
  std::vector<PairFeatures> out(pairs.size());
  parallel_for(pairs.size(), jobs, [&](std::size_t i) {
    try {
      out[i].v = classify::passage_features(pairs[i].suspect_text, pairs[i].source_text, engine.features(),
                                            traces ? &out[i].trace : nullptr);
    } catch (const EmptyPassage&) {
      out[i].empty = true;
    }
  });
  return out;
}

std::vector<double> gst_scores(const Engine& engine, const std::vector<corpus::LabelledPair>& pairs,
                               std::size_t jobs) {
  std::vector<double> out(pairs.size(), 0.0);
  parallel_for(pairs.size(), jobs, [&](std::size_t i) {
    try {
      out[i] = gst::gst_containment(pairs[i].suspect_text, pairs[i].source_text, engine.config().gst);
    } catch (const EmptySuspect&) {
      out[i] = 0.0;
    }
  });
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else if (c != '\r') {
      out.back() += c;
    }
  }
  return out;
}

void print_table(std::ostream& out, const std::string& title, const classify::EvalReport& r) {
  const auto& c = r.confusion;
  out << title << '\n'
      << std::left << std::setw(12) << "" << std::right << std::setw(12) << "pred +" << std::setw(12) << "pred -"
      << '\n'
      << std::left << std::setw(12) << "actual +" << std::right << std::setw(12) << c.tp << std::setw(12) << c.fn
      << '\n'
      << std::left << std::setw(12) << "actual -" << std::right << std::setw(12) << c.fp << std::setw(12) << c.tn
      << '\n'
      << std::fixed << std::setprecision(3) << "precision " << r.precision << "  recall " << r.recall << "  f1 "
      << r.f1 << "  auc " << r.auc << "  error " << r.misclassification_rate << '\n';
  out.unsetf(std::ios::floatfield);
  out << std::setprecision(6);
}

json summary(const classify::EvalReport& r) {
  return {{"precision", r.precision},
          {"recall", r.recall},
          {"f1", r.f1},
          {"auc", r.auc},
          {"misclassification_rate", r.misclassification_rate}};
}

std::vector<classify::Sample> samples(const std::vector<classify::SimilarityVector>& vs,
                                      const std::vector<classify::Label>& labels,
                                      std::span<const classify::Dimension> dims) {
  std::vector<classify::Sample> out;
  for (std::size_t i = 0; i < vs.size(); ++i) out.push_back({classify::select(vs[i], dims), labels[i]});
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << content;
}

fs::path prepare_out(const Options& o) {
  if (o.out_dir.empty()) throw ConfigError("--out DIR is required");
  fs::create_directories(o.out_dir);
  return o.out_dir;
}

json dims_json(std::span<const classify::Dimension> dims) {
  json a = json::array();
  for (auto d : dims) a.push_back(classify::to_string(d));
  return a;
}

json classifier_json(const classify::ClassifierSpec& s) {
  return {{"type", s.type}, {"k", s.k}, {"standardize", s.standardize}, {"threshold", s.threshold}};
}

json corpus_json(const Options& o, const std::vector<corpus::LabelledPair>& pairs) {
  const auto n = corpus::count(pairs);
  return {{"kind", o.corpus_kind},
          {"pairs", n.total},
          {"paraphrased", n.paraphrased},
          {"not_paraphrased", n.not_paraphrased}};
}

// Report = aggregate EvalReport fields plus run metadata.
json report_json(const char* command, const Options& o, const EngineConfig& cfg,
                 const std::vector<corpus::LabelledPair>& pairs, const classify::EvalReport& r) {
  json j = classify::to_json(r);
  j["command"] = command;
  j["corpus"] = corpus_json(o, pairs);
  j["seed"] = cfg.seed;
  j["k_folds"] = cfg.folds;
  return j;
}

classify::EvalReport run_baseline(const Engine& engine, const std::vector<corpus::LabelledPair>& pairs,
                                  const std::vector<classify::Label>& labels, std::size_t jobs,
                                  std::vector<double>& scores) {
  scores = gst_scores(engine, pairs, jobs);
  std::vector<classify::Sample> data;
  for (std::size_t i = 0; i < pairs.size(); ++i) data.push_back({{scores[i]}, labels[i]});
  const auto& cfg = engine.config();
  return classify::cross_validate(data, classify::ThresholdRule(cfg.gst.threshold), cfg.folds, cfg.seed);
}

int cmd_evaluate(const Options& o, std::ostream& out, std::ostream& err) {
  const auto cfg = resolve_config(o);
  const auto engine = make_engine(cfg);
  const auto prototype = classify::make_classifier(cfg.classifier);
  const auto pairs = load_pairs(o, cfg.seed);
  const auto dir = prepare_out(o);

  const auto feats = extract(*engine, pairs, o.jobs, o.traces);
  std::vector<classify::SimilarityVector> vs;
  std::vector<classify::Label> labels;
  json empty_pairs = json::array();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    vs.push_back(feats[i].v);
    labels.push_back(pairs[i].label);
    if (feats[i].empty) empty_pairs.push_back(pairs[i].pair_id);
  }
  if (!empty_pairs.empty())
    err << "warning: " << empty_pairs.size() << " pair(s) had a passage with no sentences; scored 0\n";

  const auto& dims = engine->dimensions();
  const auto report = classify::cross_validate(samples(vs, labels, dims), *prototype, cfg.folds, cfg.seed);

  json j = report_json("evaluate", o, cfg, pairs, report);
  j["classifier"] = classifier_json(cfg.classifier);
  j["dimensions"] = dims_json(dims);
  j["empty_pairs"] = empty_pairs;
  if (dims.size() > 1) {
    json single = json::object();
    for (auto d : dims) {
      const classify::Dimension one[] = {d};
      single[classify::to_string(d)] =
          summary(classify::cross_validate(samples(vs, labels, one), *prototype, cfg.folds, cfg.seed));
    }
    j["single_dimension"] = single;
  }

  std::vector<double> gst;
  std::optional<classify::EvalReport> base;
  if (o.baseline) {
    base = run_baseline(*engine, pairs, labels, o.jobs, gst);
    j["baseline"] = classify::to_json(*base);
  }

  std::ostringstream csv;
  csv << "pair_id,label,semantic,syntactic,insdel" << (o.baseline ? ",gst" : "") << ",fold,predicted,score\n";
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    csv << csv_field(pairs[i].pair_id) << ',' << (classify::positive(labels[i]) ? 1 : 0) << ',' << fmt(vs[i].semantic)
        << ',' << fmt(vs[i].syntactic) << ',' << fmt(vs[i].insdel);
    if (o.baseline) csv << ',' << fmt(gst[i]);
    csv << ',' << report.fold_of[i] << ',' << (classify::positive(report.predictions[i].label) ? 1 : 0) << ','
        << fmt(report.predictions[i].score) << '\n';
  }
  write_file(dir / "report.json", j.dump(2) + "\n");
  write_file(dir / "features.csv", csv.str());
  if (o.traces) {
    std::ostringstream tr;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      json s = json::array();
      for (const auto& t : feats[i].trace) s.push_back(classify::to_json(t));
      tr << json{{"pair_id", pairs[i].pair_id}, {"sentences", s}}.dump() << '\n';
    }
    write_file(dir / "traces.jsonl", tr.str());
  }

  print_table(out, "combined (" + cfg.classifier.type + ")", report);
  if (base) print_table(out, "baseline (gst)", *base);
  return kOk;
}

int cmd_baseline(const Options& o, std::ostream& out, std::ostream&) {
  const auto cfg = resolve_config(o);
  const auto engine = make_engine(cfg);
  const auto pairs = load_pairs(o, cfg.seed);
  const auto dir = prepare_out(o);
  std::vector<classify::Label> labels;
  for (const auto& p : pairs) labels.push_back(p.label);
  std::vector<double> gst;
  const auto report = run_baseline(*engine, pairs, labels, o.jobs, gst);

  json j = report_json("baseline", o, cfg, pairs, report);
  j["gst"] = {{"min_match", cfg.gst.min_match}, {"min_tile", cfg.gst.min_tile}, {"threshold", cfg.gst.threshold}};
  std::ostringstream csv;
  csv << "pair_id,label,gst,fold,predicted\n";
  for (std::size_t i = 0; i < pairs.size(); ++i)
    csv << csv_field(pairs[i].pair_id) << ',' << (classify::positive(labels[i]) ? 1 : 0) << ',' << fmt(gst[i]) << ','
        << report.fold_of[i] << ',' << (classify::positive(report.predictions[i].label) ? 1 : 0) << '\n';
  write_file(dir / "report.json", j.dump(2) + "\n");
  write_file(dir / "features.csv", csv.str());
  print_table(out, "baseline (gst)", report);
  return kOk;
}

int cmd_fit(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.model.empty()) throw ConfigError("--model FILE is required");
  const auto cfg = resolve_config(o);
  const auto engine = make_engine(cfg);
  auto model = classify::make_classifier(cfg.classifier);
  const auto pairs = load_pairs(o, cfg.seed);
  const auto feats = extract(*engine, pairs, o.jobs, false);
  std::vector<classify::Sample> data;
  std::size_t empty = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    data.push_back({classify::select(feats[i].v, engine->dimensions()), pairs[i].label});
    empty += feats[i].empty ? 1 : 0;
  }
  if (empty) err << "warning: " << empty << " pair(s) had a passage with no sentences; scored 0\n";
  model->fit(data);
  json j = {{"dimensions", cfg.dimensions}, {"model", model->to_json()}};
  write_file(o.model, j.dump(2) + "\n");
  out << "fitted " << cfg.classifier.type << " on " << data.size() << " pairs -> " << o.model << '\n';
  return kOk;
}

int cmd_score(const Options& o, std::ostream& out, std::ostream& err) {
  const auto cfg = resolve_config(o);
  const auto engine = make_engine(cfg);
  std::unique_ptr<classify::Classifier> model;
  std::vector<classify::Dimension> dims = engine->dimensions();
  if (!o.model.empty()) {
    std::ifstream in(o.model);
    if (!in) throw ResourceError("missing model file: " + o.model);
    const auto j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.contains("model")) throw ConfigError("malformed model file " + o.model);
    dims = classify::parse_dimensions(j.value("dimensions", cfg.dimensions));
    model = classify::classifier_from_json(j.at("model"));
  } else {
    model = std::make_unique<classify::ThresholdRule>(cfg.classifier.threshold);
  }
  const auto suspect = corpus::read_text(o.suspect);
  const auto source = corpus::read_text(o.source);
  std::vector<classify::SentenceTrace> trace;
  const auto v = classify::passage_features(suspect, source, engine->features(), o.traces ? &trace : nullptr);
  const auto p = model->predict(classify::select(v, dims));
  json j = {{"semantic", v.semantic},
            {"syntactic", v.syntactic},
            {"insdel", v.insdel},
            {"label", classify::to_string(p.label)},
            {"score", p.score},
            {"classifier", o.model.empty() ? "threshold" : model->to_json().value("type", "")}};
  out << j.dump(2) << '\n';
  for (const auto& t : trace) err << classify::to_json(t).dump() << '\n';
  return kOk;
}

int cmd_crossval(const Options& o, std::ostream& out, std::ostream&) {
  const auto cfg = resolve_config(o);
  const auto prototype = classify::make_classifier(cfg.classifier);
  const auto dims = classify::parse_dimensions(cfg.dimensions);
  std::ifstream in(o.data);
  if (!in) throw ConfigError("cannot read features file " + o.data);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("features file is empty");
  const auto header = csv_split(line);
  auto col = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ConfigError("features file lacks column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_label = col("label"), c_sem = col("semantic"), c_syn = col("syntactic"), c_ins = col("insdel");
  std::vector<classify::Sample> data;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = csv_split(line);
    try {
      if (f.size() != header.size()) throw std::invalid_argument("field count");
      classify::SimilarityVector v{std::stod(f[c_sem]), std::stod(f[c_syn]), std::stod(f[c_ins])};
      const auto label = classify::parse_label(f[c_label]);
      if (!label) throw std::invalid_argument("label");
      data.push_back({classify::select(v, dims), *label});
    } catch (const std::exception&) {
      throw MalformedLine(o.data, line_no);
    }
  }
  const auto report = classify::cross_validate(data, *prototype, cfg.folds, cfg.seed);
  const auto dir = prepare_out(o);
  json j = classify::to_json(report);
  j["command"] = "crossval";
  j["classifier"] = classifier_json(cfg.classifier);
  j["dimensions"] = dims_json(dims);
  j["seed"] = cfg.seed;
  j["k_folds"] = cfg.folds;
  write_file(dir / "report.json", j.dump(2) + "\n");
  print_table(out, "crossval (" + cfg.classifier.type + ")", report);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"paradet: paraphrase plagiarism detection"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "Engine config (flat JSON)");
    sub->add_option("--seed", o.seed, "Override the config seed");
    sub->add_option("--dims", o.dims, "Feature dimensions, e.g. semantic,insdel");
  };
  auto add_corpus = [&](CLI::App* sub) {
    add_common(sub);
    sub->add_option("data", o.data, "Corpus directory (or JSON-lines file)")->required();
    sub->add_option("--corpus", o.corpus_kind, "Corpus layout")->check(CLI::IsMember({"crowd", "cs", "jsonl"}));
    sub->add_option("--truth", o.truth, "Clough-Stevenson ground-truth table");
    sub->add_option("--jobs", o.jobs, "Worker threads (default: all cores)");
    sub->add_option("--sample", o.sample, "Evaluate a seeded random subset of N pairs");
  };

  auto* score = app.add_subcommand("score", "Score one suspect/source pair");
  add_common(score);
  score->add_option("suspect", o.suspect)->required();
  score->add_option("source", o.source)->required();
  score->add_option("--model", o.model, "Fitted model (default: threshold rule)");
  score->add_flag("--debug-traces", o.traces, "Word-match traces to stderr as JSON lines");

  auto* evaluate = app.add_subcommand("evaluate", "Feature extraction + k-fold CV on a corpus");
  add_corpus(evaluate);
  evaluate->add_option("--out", o.out_dir, "Output directory")->required();
  evaluate->add_flag("--baseline", o.baseline, "Also run the GST baseline on the same split");
  evaluate->add_flag("--debug-traces", o.traces, "Write traces.jsonl");

  auto* baseline = app.add_subcommand("baseline", "GST containment + threshold, k-fold CV");
  add_corpus(baseline);
  baseline->add_option("--out", o.out_dir, "Output directory")->required();

  auto* fit = app.add_subcommand("fit", "Fit the configured classifier on a whole corpus");
  add_corpus(fit);
  fit->add_option("--model", o.model, "Model file to write")->required();

  auto* crossval = app.add_subcommand("crossval", "k-fold CV on a features.csv");
  add_common(crossval);
  crossval->add_option("data", o.data, "features.csv from evaluate")->required();
  crossval->add_option("--out", o.out_dir, "Output directory")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*score) return cmd_score(o, out, err);
    if (*evaluate) return cmd_evaluate(o, out, err);
    if (*baseline) return cmd_baseline(o, out, err);
    if (*fit) return cmd_fit(o, out, err);
    return cmd_crossval(o, out, err);
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << '\n';
    return kMissingResource;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace paradet::cli
