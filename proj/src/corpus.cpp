#include "paradet/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "paradet/error.hpp"
#include "paradet/textprep.hpp"

namespace paradet::corpus {
namespace fs = std::filesystem;

namespace {

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n\f\v\"'";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::string collapse_spaces(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '_' || c == '-') {
      if (!out.empty() && out.back() != ' ') out.push_back(' ');
    } else {
      out.push_back(c);
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

std::vector<std::string> split_row(std::string_view line, char delim) {
  std::vector<std::string> out;
  if (delim == ' ') {
    std::istringstream in{std::string(line)};
    for (std::string f; in >> f;) out.emplace_back(trim(f));
    return out;
  }
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    out.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

char detect_delimiter(std::string_view header) {
  for (char d : {'\t', ',', ';'})
    if (header.find(d) != std::string_view::npos) return d;
  return ' ';
}

classify::Label verdict_from_metadata(const fs::path& path, const std::string& id) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MetadataParse("pair " + id + ": missing metadata file " + path.string());
  for (std::string line; std::getline(in, line);) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    if (lower_ascii(trim(std::string_view(line).substr(0, colon))) != "paraphrase") continue;
    const auto value = lower_ascii(trim(std::string_view(line).substr(colon + 1)));
    if (value == "yes") return classify::Label::paraphrased;
    if (value == "no") return classify::Label::not_paraphrased;
    throw MetadataParse("pair " + id + ": unrecognized paraphrase verdict '" + value + "'");
  }
  throw MetadataParse("pair " + id + ": no paraphrase verdict in " + path.string());
}

fs::path resolve_answer(const fs::path& dir, const std::string& file) {
  fs::path p = dir / file;
  if (fs::exists(p)) return p;
  if (p.extension() != ".txt" && fs::exists(dir / (file + ".txt"))) return dir / (file + ".txt");
  throw MissingFile(p.string());
}

}  // namespace

const char* to_string(Origin o) { return o == Origin::crowd ? "crowd" : "clough_stevenson"; }

nlohmann::json to_json(const LabelledPair& p) {
  return {{"pair_id", p.pair_id},
          {"suspect_text", p.suspect_text},
          {"source_text", p.source_text},
          {"label", classify::to_string(p.label)},
          {"origin", to_string(p.origin)},
          {"raw_category", p.raw_category}};
}

LabelledPair pair_from_json(const nlohmann::json& j) {
  try {
    LabelledPair p;
    p.pair_id = j.at("pair_id").get<std::string>();
    p.suspect_text = j.at("suspect_text").get<std::string>();
    p.source_text = j.at("source_text").get<std::string>();
    const auto label = classify::parse_label(j.at("label").get<std::string>());
    if (!label) throw ConfigError("pair " + p.pair_id + ": bad label");
    p.label = *label;
    const auto origin = j.value("origin", std::string("crowd"));
    if (origin == "crowd")
      p.origin = Origin::crowd;
    else if (origin == "clough_stevenson")
      p.origin = Origin::clough_stevenson;
    else
      throw ConfigError("pair " + p.pair_id + ": bad origin '" + origin + "'");
    p.raw_category = j.value("raw_category", std::string());
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad pair record: ") + e.what());
  }
}

void write_jsonl(std::ostream& out, const std::vector<LabelledPair>& pairs) {
  for (const auto& p : pairs) out << to_json(p).dump() << '\n';
}

std::vector<LabelledPair> read_jsonl(std::istream& in) {
  std::vector<LabelledPair> out;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw MalformedLine("<jsonl>", line_no, "invalid JSON");
    out.push_back(pair_from_json(j));
  }
  return out;
}

std::vector<LabelledPair> load_jsonl(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFile(path.string());
  return read_jsonl(in);
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFile(path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return textprep::sanitize_utf8(ss.str());
}

std::vector<LabelledPair> load_crowd(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw MissingFile(dir.string());
  // Every file named <n>-{original,paraphrase,metadata}.txt marks a pair id.
  std::map<unsigned long, std::string> ids;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    const auto dash = name.find('-');
    if (dash == std::string::npos || dash == 0) continue;
    const auto kind = name.substr(dash + 1);
    if (kind != "original.txt" && kind != "paraphrase.txt" && kind != "metadata.txt") continue;
    unsigned long n = 0;
    const auto [ptr, ec] = std::from_chars(name.data(), name.data() + dash, n);
    if (ec != std::errc{} || ptr != name.data() + dash) continue;
    ids.emplace(n, name.substr(0, dash));
  }

  std::vector<LabelledPair> out;
  out.reserve(ids.size());
  for (const auto& [n, id] : ids) {
    LabelledPair p;
    p.pair_id = id;
    p.origin = Origin::crowd;
    p.label = verdict_from_metadata(dir / (id + "-metadata.txt"), id);
    p.raw_category = classify::positive(p.label) ? "yes" : "no";
    p.source_text = read_text(dir / (id + "-original.txt"));
    p.suspect_text = read_text(dir / (id + "-paraphrase.txt"));
    out.push_back(std::move(p));
  }
  return out;
}

classify::Label label_for_category(std::string_view category) {
  const auto c = collapse_spaces(lower_ascii(trim(category)));
  if (c == "light" || c == "heavy") return classify::Label::paraphrased;
  if (c == "cut" || c == "cut and paste" || c == "near copy" || c == "non") return classify::Label::not_paraphrased;
  throw UnknownCategory(std::string(category));
}

std::vector<LabelledPair> load_clough_stevenson(const fs::path& dir, const fs::path& truth_file) {
  if (!fs::is_directory(dir)) throw MissingFile(dir.string());
  std::ifstream in(truth_file, std::ios::binary);
  if (!in) throw MissingFile(truth_file.string());

  std::string header;
  while (std::getline(in, header) && trim(header).empty()) {
  }
  if (!header.empty() && header.back() == '\r') header.pop_back();
  const char delim = detect_delimiter(header);
  const auto cols = split_row(header, delim);
  auto column = [&](std::string_view name) {
    for (std::size_t i = 0; i < cols.size(); ++i)
      if (lower_ascii(cols[i]) == name) return i;
    throw MalformedLine(truth_file.string(), 1, "no '" + std::string(name) + "' column");
  };
  const auto file_col = column("file"), task_col = column("task"), cat_col = column("category");

  std::map<std::string, std::string> originals;  // task letter -> text
  auto original = [&](std::string task) -> const std::string& {
    task = lower_ascii(task);
    if (task.starts_with("task")) task = task.substr(4);
    auto it = originals.find(task);
    if (it == originals.end()) it = originals.emplace(task, read_text(dir / ("orig_task" + task + ".txt"))).first;
    return it->second;
  };

  std::vector<LabelledPair> out;
  std::size_t line_no = 1;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split_row(line, delim);
    if (f.size() <= std::max({file_col, task_col, cat_col}))
      throw MalformedLine(truth_file.string(), line_no, "too few fields");
    if (lower_ascii(f[file_col]).starts_with("orig")) continue;
    LabelledPair p;
    p.pair_id = fs::path(f[file_col]).stem().string();
    p.origin = Origin::clough_stevenson;
    p.raw_category = f[cat_col];
    p.label = label_for_category(p.raw_category);
    p.suspect_text = read_text(resolve_answer(dir, f[file_col]));
    p.source_text = original(f[task_col]);
    out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.pair_id < b.pair_id; });
  return out;
}

ClassCounts count(const std::vector<LabelledPair>& pairs) {
  ClassCounts c;
  c.total = pairs.size();
  for (const auto& p : pairs) ++(classify::positive(p.label) ? c.paraphrased : c.not_paraphrased);
  return c;
}

}  // namespace paradet::corpus
