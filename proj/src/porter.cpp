// Porter, M.F. (1980) suffix stripping, original rule set.

#include <algorithm>
#include <array>
#include <span>
#include <string>
#include <string_view>

#include "paradet/textprep.hpp"

namespace paradet::textprep {
namespace {

class Word {
 public:
  explicit Word(std::string_view w) : b_(w) {}

  std::string take() && { return std::move(b_); }

  bool cons(std::size_t i) const {
    switch (b_[i]) {
      case 'a':
      case 'e':
      case 'i':
      case 'o':
      case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !cons(i - 1);
      default:
        return true;
    }
  }

  // Number of VC sequences in b_[0, len).
  int measure(std::size_t len) const {
    int m = 0;
    std::size_t i = 0;
    while (i < len && cons(i)) ++i;
    while (i < len) {
      while (i < len && !cons(i)) ++i;
      if (i >= len) break;
      while (i < len && cons(i)) ++i;
      ++m;
    }
    return m;
  }

  bool has_vowel(std::size_t len) const {
    for (std::size_t i = 0; i < len; ++i)
      if (!cons(i)) return true;
    return false;
  }

  bool double_cons(std::size_t len) const {
    return len >= 2 && b_[len - 1] == b_[len - 2] && cons(len - 1);
  }

  // *o: stem ends consonant-vowel-consonant, last consonant not w, x or y.
  bool cvc(std::size_t len) const {
    if (len < 3 || !cons(len - 1) || cons(len - 2) || !cons(len - 3)) return false;
    const char c = b_[len - 1];
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool ends(std::string_view s) const { return b_.size() >= s.size() && std::string_view(b_).ends_with(s); }
  std::size_t stem_len(std::string_view suffix) const { return b_.size() - suffix.size(); }

  void replace(std::string_view suffix, std::string_view with) {
    b_.resize(stem_len(suffix));
    b_ += with;
  }

  char back() const { return b_.back(); }
  std::size_t size() const { return b_.size(); }
  void pop() { b_.pop_back(); }
  void push(char c) { b_.push_back(c); }

 private:
  std::string b_;
};

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
};

// Applies the longest matching rule when its stem has measure > min_m.
// Only one rule per step is considered: if the longest match fails its
// condition, the step does nothing.
void apply_longest(Word& w, std::span<const Rule> rules, int min_m) {
  const Rule* best = nullptr;
  for (const auto& r : rules)
    if (w.ends(r.suffix) && (!best || r.suffix.size() > best->suffix.size())) best = &r;
  if (best && w.measure(w.stem_len(best->suffix)) > min_m) w.replace(best->suffix, best->replacement);
}

void step1a(Word& w) {
  if (w.ends("sses"))
    w.replace("sses", "ss");
  else if (w.ends("ies"))
    w.replace("ies", "i");
  else if (w.ends("ss"))
    return;
  else if (w.ends("s"))
    w.replace("s", "");
}

void step1b(Word& w) {
  bool trimmed = false;
  if (w.ends("eed")) {
    if (w.measure(w.stem_len("eed")) > 0) w.replace("eed", "ee");
  } else if (w.ends("ed") && w.has_vowel(w.stem_len("ed"))) {
    w.replace("ed", "");
    trimmed = true;
  } else if (w.ends("ing") && w.has_vowel(w.stem_len("ing"))) {
    w.replace("ing", "");
    trimmed = true;
  }
  if (!trimmed) return;

  if (w.ends("at"))
    w.replace("at", "ate");
  else if (w.ends("bl"))
    w.replace("bl", "ble");
  else if (w.ends("iz"))
    w.replace("iz", "ize");
  else if (w.double_cons(w.size())) {
    const char c = w.back();
    if (c != 'l' && c != 's' && c != 'z') w.pop();
  } else if (w.measure(w.size()) == 1 && w.cvc(w.size())) {
    w.push('e');
  }
}

void step1c(Word& w) {
  if (w.ends("y") && w.has_vowel(w.stem_len("y"))) w.replace("y", "i");
}

constexpr std::array<Rule, 20> kStep2{{
    {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},   {"anci", "ance"},   {"izer", "ize"},
    {"abli", "able"},   {"alli", "al"},     {"entli", "ent"},   {"eli", "e"},       {"ousli", "ous"},
    {"ization", "ize"}, {"ation", "ate"},   {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"},
    {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},   {"biliti", "ble"},
}};

constexpr std::array<Rule, 7> kStep3{{
    {"icate", "ic"},
    {"ative", ""},
    {"alize", "al"},
    {"iciti", "ic"},
    {"ical", "ic"},
    {"ful", ""},
    {"ness", ""},
}};

constexpr std::array<std::string_view, 19> kStep4{
    "al",  "ance", "ence", "er",  "ic",  "able", "ible", "ant", "ement", "ment",
    "ent", "ion",  "ou",   "ism", "ate", "iti",  "ous",  "ive", "ize",
};

void step4(Word& w) {
  std::string_view best;
  for (auto s : kStep4)
    if (w.ends(s) && s.size() > best.size()) best = s;
  if (best.empty()) return;
  const std::size_t len = w.stem_len(best);
  if (w.measure(len) <= 1) return;
  if (best == "ion") {
    if (len == 0) return;
    if (!w.ends("sion") && !w.ends("tion")) return;
  }
  w.replace(best, "");
}

void step5(Word& w) {
  if (w.ends("e")) {
    const std::size_t len = w.stem_len("e");
    const int m = w.measure(len);
    if (m > 1 || (m == 1 && !w.cvc(len))) w.pop();
  }
  if (w.measure(w.size()) > 1 && w.double_cons(w.size()) && w.back() == 'l') w.pop();
}

}  // namespace

std::string porter_stem(std::string_view word) {
  if (word.size() <= 2) return std::string(word);
  if (!std::all_of(word.begin(), word.end(), [](char c) { return c >= 'a' && c <= 'z'; })) return std::string(word);
  Word w(word);
  step1a(w);
  step1b(w);
  step1c(w);
  apply_longest(w, kStep2, 0);
  apply_longest(w, kStep3, 0);
  step4(w);
  step5(w);
  return std::move(w).take();
}

}  // namespace paradet::textprep
