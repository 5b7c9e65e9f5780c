#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "paradet/config.hpp"
#include "paradet/error.hpp"

using namespace paradet;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_dir(const std::string& name) {
  auto d = fs::temp_directory_path() / ("paradet_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

void write(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kPairs = PARADET_TEST_DATA "/pairs24.jsonl";

}  // namespace

TEST_CASE("score identical and reordered files") {
  const auto d = temp_dir("score");
  write(d / "a.txt", "Mary is the winner of the tournament and John is the runner up.");
  write(d / "b.txt", "The winner of the tournament is John and the runner up is Mary.");
  write(d / "empty.txt", "");

  auto r = run({"score", (d / "a.txt").string(), (d / "a.txt").string()});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["semantic"] == 1.0);
  CHECK(j["syntactic"] == 1.0);
  CHECK(j["insdel"] == 1.0);
  CHECK(j["label"] == "paraphrased");

  r = run({"score", (d / "b.txt").string(), (d / "a.txt").string()});
  REQUIRE(r.code == 0);
  j = nlohmann::json::parse(r.out);
  CHECK(j["syntactic"].get<double>() == doctest::Approx(0.8778998778998779).epsilon(1e-12));

  r = run({"score", (d / "empty.txt").string(), (d / "a.txt").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("EmptyPassage") != std::string::npos);
}

TEST_CASE("exit codes") {
  const auto d = temp_dir("codes");
  write(d / "a.txt", "Some text here.");
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"score", "--help"}).code == 0);
  CHECK(run({"score", (d / "a.txt").string()}).code == 2);
  CHECK(run({"score", (d / "missing.txt").string(), (d / "a.txt").string()}).code == 2);

  write(d / "missing_res.json", R"({"lexdb_dir": "/nonexistent/wordnet"})");
  CHECK(run({"score", (d / "a.txt").string(), (d / "a.txt").string(), "--config", (d / "missing_res.json").string()})
            .code == 3);
  write(d / "bad_key.json", R"({"lexdb": "x"})");
  CHECK(run({"score", (d / "a.txt").string(), (d / "a.txt").string(), "--config", (d / "bad_key.json").string()})
            .code == 2);
  write(d / "bad_range.json", R"({"embed_min": 3})");
  CHECK(run({"score", (d / "a.txt").string(), (d / "a.txt").string(), "--config", (d / "bad_range.json").string()})
            .code == 2);
  CHECK(run({"evaluate", kPairs, "--corpus", "nope", "--out", (d / "o").string()}).code == 2);
  CHECK(run({"evaluate", kPairs, "--corpus", "cs", "--out", (d / "o").string()}).code == 2);  // no --truth
}

TEST_CASE("evaluate on a separable fixture") {
  const auto d = temp_dir("evaluate");
  write(d / "cfg.json", R"({"folds": 4, "knn_k": 3, "seed": 5})");
  const auto r = run({"evaluate", kPairs, "--corpus", "jsonl", "--config", (d / "cfg.json").string(), "--out",
                      (d / "out").string(), "--baseline", "--jobs", "3", "--debug-traces"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const auto j = nlohmann::json::parse(slurp(d / "out" / "report.json"));
  CHECK(j["f1"] == 1.0);
  CHECK(j["confusion"]["tp"] == 12);
  CHECK(j["confusion"]["tn"] == 12);
  CHECK(j["folds"].size() == 4);
  CHECK(j["corpus"]["pairs"] == 24);
  CHECK(j.contains("baseline"));
  CHECK(j["single_dimension"].contains("insdel"));
  CHECK(fs::exists(d / "out" / "traces.jsonl"));
  const auto csv = slurp(d / "out" / "features.csv");
  CHECK(csv.starts_with("pair_id,label,semantic,syntactic,insdel,gst,fold,predicted,score\n"));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 25);
  CHECK(r.out.find("pred +") != std::string::npos);

  // Same run, different worker count: byte-identical outputs.
  const auto r2 = run({"evaluate", kPairs, "--corpus", "jsonl", "--config", (d / "cfg.json").string(), "--out",
                       (d / "out2").string(), "--baseline", "--jobs", "1", "--debug-traces"});
  REQUIRE(r2.code == 0);
  CHECK(slurp(d / "out" / "report.json") == slurp(d / "out2" / "report.json"));
  CHECK(slurp(d / "out" / "features.csv") == slurp(d / "out2" / "features.csv"));
  CHECK(slurp(d / "out" / "traces.jsonl") == slurp(d / "out2" / "traces.jsonl"));

  // crossval over the exported features reproduces the combined report.
  const auto r3 = run({"crossval", (d / "out" / "features.csv").string(), "--config", (d / "cfg.json").string(),
                       "--out", (d / "out3").string()});
  REQUIRE_MESSAGE(r3.code == 0, r3.err);
  const auto j3 = nlohmann::json::parse(slurp(d / "out3" / "report.json"));
  CHECK(j3["confusion"] == j["confusion"]);
  CHECK(j3["auc"] == j["auc"]);
}

TEST_CASE("baseline on identical and disjoint fixtures") {
  const auto d = temp_dir("baseline");
  std::ofstream f(d / "pairs.jsonl");
  for (int i = 0; i < 6; ++i) {
    const std::string text = "Shared passage number " + std::to_string(i) + " with enough characters to tile.";
    f << nlohmann::json{{"pair_id", "s" + std::to_string(i)}, {"suspect_text", text}, {"source_text", text},
                        {"label", "paraphrased"}}
             .dump()
      << "\n";
    f << nlohmann::json{{"pair_id", "d" + std::to_string(i)}, {"suspect_text", "qqqqq " + std::to_string(i)},
                        {"source_text", "zzzzzzzz"}, {"label", "not_paraphrased"}}
             .dump()
      << "\n";
  }
  f.close();
  for (const char* th : {"0.01", "0.5", "1.0"}) {
    write(d / "cfg.json", std::string(R"({"folds": 3, "gst_threshold": )") + th + "}");
    const auto r = run({"baseline", (d / "pairs.jsonl").string(), "--corpus", "jsonl", "--config",
                        (d / "cfg.json").string(), "--out", (d / "out").string()});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const auto j = nlohmann::json::parse(slurp(d / "out" / "report.json"));
    CHECK(j["confusion"]["tp"] == 6);
    CHECK(j["confusion"]["tn"] == 6);
  }
}

TEST_CASE("fit then score with the model") {
  const auto d = temp_dir("fit");
  write(d / "cfg.json", R"({"classifier": "nb"})");
  auto r = run({"fit", kPairs, "--corpus", "jsonl", "--config", (d / "cfg.json").string(), "--model",
                (d / "model.json").string()});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  write(d / "a.txt", "The river flows north through the old valley.");
  write(d / "b.txt", "Through the old valley the river flows north.");
  r = run({"score", (d / "b.txt").string(), (d / "a.txt").string(), "--model", (d / "model.json").string()});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["classifier"] == "nb");
  CHECK(j["label"] == "paraphrased");
  CHECK(run({"score", (d / "b.txt").string(), (d / "a.txt").string(), "--model", (d / "nope.json").string()}).code ==
        3);
}

TEST_CASE("config parsing") {
  const auto d = temp_dir("config");
  write(d / "stop.txt", "the\n");
  write(d / "cfg.json", R"({"stopword_file": "stop.txt", "embed_min": 0.7, "knn_k": 7, "channel_resnik": false})");
  const auto c = cli::load_config(d / "cfg.json");
  CHECK(c.stopword_file == (d / "stop.txt").string());
  CHECK(c.thresholds.embed_min == 0.7);
  CHECK(c.classifier.k == 7);
  CHECK(!c.channels.resnik);
  CHECK_NOTHROW(cli::validate(c));
  CHECK(cli::config_from_json(cli::to_json(c)).classifier.k == 7);
  CHECK_THROWS_AS(cli::config_from_json(nlohmann::json{{"knn_k", "seven"}}), ConfigError);
  auto bad = c;
  bad.embedding_file = "/nonexistent/vectors.bin";
  CHECK_THROWS_AS(cli::validate(bad), MissingFile);
}

TEST_CASE("shipped example config matches the defaults") {
  const auto c = cli::load_config(PARADET_TEST_DATA "/../../data/engine.example.json");
  auto j = cli::to_json(c);
  auto d = cli::to_json(cli::EngineConfig{});
  for (const char* key : {"lexdb_dir", "ic_file"}) j.erase(key), d.erase(key);
  CHECK(j == d);
}
