#include "paradet/textprep.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/locid.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "paradet/error.hpp"

namespace paradet::textprep {

extern const char* const kEnglishStopwords;  // generated from data/stopwords_en.txt

namespace {

// Abbreviations whose trailing period never ends a sentence. Compared
// lowercase, without the final period.
constexpr std::array<std::string_view, 42> kAbbreviations{
    "mr",  "mrs",  "ms",  "dr",  "prof", "sr",  "jr",   "st",   "vs",   "etc", "e.g", "i.e", "eg",  "ie",  "inc",
    "ltd", "co",   "corp", "fig",  "gen", "gov",  "sen",  "rep",  "mt",  "u.s", "u.k", "jan", "feb", "mar",
    "apr", "jun",  "jul", "aug", "sep",  "sept", "oct", "nov",  "dec",  "approx", "dept", "al",  "capt",
};

bool is_mark(UChar32 c) {
  const auto t = u_charType(c);
  return t == U_NON_SPACING_MARK || t == U_COMBINING_SPACING_MARK || t == U_ENCLOSING_MARK;
}

bool is_word_char(UChar32 c) { return u_isalnum(c) || is_mark(c); }

struct CodePoint {
  UChar32 c;
  std::size_t begin;
  std::size_t end;
};

std::vector<CodePoint> decode(std::string_view s) {
  std::vector<CodePoint> out;
  out.reserve(s.size());
  const auto* p = reinterpret_cast<const uint8_t*>(s.data());
  const int32_t n = static_cast<int32_t>(s.size());
  int32_t i = 0;
  while (i < n) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(p, i, n, c);
    if (c < 0) c = 0xFFFD;
    out.push_back({c, static_cast<std::size_t>(start), static_cast<std::size_t>(i)});
  }
  return out;
}

bool is_space(UChar32 c) { return u_isUWhiteSpace(c); }

bool is_closer(UChar32 c) {
  return c == '"' || c == '\'' || c == ')' || c == ']' || c == 0x201D || c == 0x2019 || c == 0xBB;
}

bool is_opener(UChar32 c) { return c == '"' || c == '\'' || c == '(' || c == '[' || c == 0x201C || c == 0x2018 || c == 0xAB; }

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& ch : out)
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
  return out;
}

// True when the period at cps[dot] belongs to an abbreviation or an initial.
bool abbreviation_before(const std::vector<CodePoint>& cps, std::size_t dot, std::string_view text) {
  std::size_t start = dot;
  while (start > 0 && !is_space(cps[start - 1].c) && !is_opener(cps[start - 1].c)) --start;
  if (start == dot) return false;
  const std::string word = lower_ascii(text.substr(cps[start].begin, cps[dot].begin - cps[start].begin));
  if (std::find(kAbbreviations.begin(), kAbbreviations.end(), word) != kAbbreviations.end()) return true;
  // A single capital letter followed by a period is an initial ("J. Smith").
  return dot - start == 1 && u_isupper(cps[start].c);
}

std::string trim(std::string_view s) {
  const auto cps = decode(s);
  std::size_t b = 0, e = cps.size();
  while (b < e && is_space(cps[b].c)) ++b;
  while (e > b && is_space(cps[e - 1].c)) --e;
  if (b == e) return {};
  return std::string(s.substr(cps[b].begin, cps[e - 1].end - cps[b].begin));
}

const icu::Normalizer2& nfd() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFDInstance(status);
  if (U_FAILURE(status) || n == nullptr) throw Error("ICU NFD normalizer unavailable");
  return *n;
}

icu::UnicodeString strip_marks(const icu::UnicodeString& in) {
  icu::UnicodeString out;
  for (int32_t i = 0; i < in.length();) {
    const UChar32 c = in.char32At(i);
    if (!is_mark(c)) out.append(c);
    i += U16_LENGTH(c);
  }
  return out;
}

}  // namespace

StopwordList StopwordList::parse(std::string_view text) {
  StopwordList list;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string word = trim(line);
    if (word.empty() || word.front() == '#') continue;
    list.words_.insert(normalize(word));
  }
  return list;
}

StopwordList StopwordList::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFile(path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const StopwordList& StopwordList::english_default() {
  static const StopwordList list = parse(kEnglishStopwords);
  return list;
}

std::string sanitize_utf8(std::string_view bytes) {
  std::string out;
  out.reserve(bytes.size());
  for (const auto& cp : decode(bytes)) {
    char buf[4];
    int32_t len = 0;
    UBool err = false;
    U8_APPEND(reinterpret_cast<uint8_t*>(buf), len, 4, cp.c, err);
    if (err) continue;
    out.append(buf, static_cast<std::size_t>(len));
  }
  return out;
}

std::string normalize(std::string_view surface) {
  UErrorCode status = U_ZERO_ERROR;
  const auto src = icu::UnicodeString::fromUTF8(icu::StringPiece(surface.data(), static_cast<int32_t>(surface.size())));
  icu::UnicodeString decomposed = nfd().normalize(src, status);
  if (U_FAILURE(status)) throw Error("NFD normalization failed");
  icu::UnicodeString folded = strip_marks(decomposed);
  folded.toLower(icu::Locale::getRoot());
  // Lowercasing can reintroduce marks (e.g. U+0130), so strip once more.
  decomposed = nfd().normalize(folded, status);
  if (U_FAILURE(status)) throw Error("NFD normalization failed");
  std::string out;
  strip_marks(decomposed).toUTF8String(out);
  return out;
}

std::vector<std::string> tokenize(std::string_view sentence) {
  std::vector<std::string> tokens;
  const auto cps = decode(sentence);
  std::size_t i = 0;
  while (i < cps.size()) {
    if (!is_word_char(cps[i].c) || is_mark(cps[i].c)) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < cps.size() && is_word_char(cps[i].c)) ++i;
    tokens.emplace_back(sentence.substr(cps[start].begin, cps[i - 1].end - cps[start].begin));
  }
  return tokens;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  const auto cps = decode(text);
  std::size_t sentence_begin = 0;  // byte offset
  std::size_t i = 0;
  while (i < cps.size()) {
    const UChar32 c = cps[i].c;
    if (c != '.' && c != '?' && c != '!') {
      ++i;
      continue;
    }
    const std::size_t term = i;
    std::size_t j = i;
    while (j < cps.size() && (cps[j].c == '.' || cps[j].c == '?' || cps[j].c == '!')) ++j;
    while (j < cps.size() && is_closer(cps[j].c)) ++j;
    std::size_t k = j;
    while (k < cps.size() && is_space(cps[k].c)) ++k;
    std::size_t first = k;
    while (first < cps.size() && is_opener(cps[first].c)) ++first;
    const bool boundary = k > j && first < cps.size() && (u_isupper(cps[first].c) || u_istitle(cps[first].c)) &&
                          !(c == '.' && j == term + 1 && abbreviation_before(cps, term, text));
    if (boundary) {
      std::string s = trim(text.substr(sentence_begin, cps[j - 1].end - sentence_begin));
      if (!s.empty()) out.push_back(std::move(s));
      sentence_begin = cps[k].begin;
    }
    i = j;
  }
  std::string tail = trim(text.substr(std::min(sentence_begin, text.size())));
  if (!tail.empty()) out.push_back(std::move(tail));
  return out;
}

std::vector<ProcessedSentence> preprocess_passage(std::string_view text, const PrepConfig& config) {
  std::vector<ProcessedSentence> out;
  const std::string clean = sanitize_utf8(text);
  for (const auto& raw : split_sentences(clean)) {
    ProcessedSentence s;
    s.sentence_id = out.size();
    for (auto& surface : tokenize(raw)) {
      Token t;
      t.normalized = normalize(surface);
      t.surface = std::move(surface);
      t.stem = config.stemmer == Stemmer::porter ? porter_stem(t.normalized) : t.normalized;
      t.index = s.all_tokens.size();
      s.all_tokens.push_back(t);
      if (!t.normalized.empty() && !config.stopwords.contains(t.normalized)) s.content_tokens.push_back(std::move(t));
    }
    if (!s.all_tokens.empty()) out.push_back(std::move(s));
  }
  return out;
}

nlohmann::json to_json(const ProcessedSentence& sentence) {
  auto tokens = [](const std::vector<Token>& ts) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& t : ts)
      arr.push_back({{"surface", t.surface}, {"normalized", t.normalized}, {"stem", t.stem}, {"index", t.index}});
    return arr;
  };
  return {{"sentence_id", sentence.sentence_id},
          {"all_tokens", tokens(sentence.all_tokens)},
          {"content_tokens", tokens(sentence.content_tokens)}};
}

}  // namespace paradet::textprep
