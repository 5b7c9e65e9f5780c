#include "paradet/gst.hpp"

#include <algorithm>
#include <cmath>

#include <unicode/uchar.h>
#include <unicode/locid.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "paradet/error.hpp"

namespace paradet::gst {

void validate(const GstParams& p) {
  if (p.min_match == 0) throw ConfigError("gst min_match must be positive");
  if (p.min_tile < p.min_match) throw ConfigError("gst min_tile must be >= min_match");
  if (!std::isfinite(p.threshold) || p.threshold < 0 || p.threshold > 1)
    throw ConfigError("gst threshold must be in [0, 1]");
}

std::u32string to_u32(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  const auto* p = reinterpret_cast<const uint8_t*>(utf8.data());
  const int32_t n = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < n) {
    UChar32 c;
    U8_NEXT(p, i, n, c);
    out.push_back(static_cast<char32_t>(c < 0 ? 0xFFFD : c));
  }
  return out;
}

std::string canonicalize(std::string_view text) {
  auto lowered = icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  lowered.toLower(icu::Locale::getRoot());
  std::string utf8;
  lowered.toUTF8String(utf8);

  std::string out;
  out.reserve(utf8.size());
  bool pending_space = false;
  const auto* p = reinterpret_cast<const uint8_t*>(utf8.data());
  const int32_t n = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < n) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(p, i, n, c);
    if (c >= 0 && u_isUWhiteSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.append(utf8, static_cast<std::size_t>(start), static_cast<std::size_t>(i - start));
  }
  return out;
}

Tile longest_unmarked_match(std::u32string_view suspect, std::u32string_view source,
                            const std::vector<bool>& suspect_marked, const std::vector<bool>& source_marked) {
  Tile best;
  std::vector<std::size_t> prev(source.size() + 1, 0), cur(source.size() + 1, 0);
  for (std::size_t i = 1; i <= suspect.size(); ++i) {
    if (suspect_marked[i - 1]) {
      std::fill(cur.begin(), cur.end(), 0);
    } else {
      cur[0] = 0;
      for (std::size_t j = 1; j <= source.size(); ++j) {
        cur[j] = (!source_marked[j - 1] && suspect[i - 1] == source[j - 1]) ? prev[j - 1] + 1 : 0;
        // Scanning end positions in (i, j) order finds equal-length matches in
        // (suspect offset, source offset) order, so strict > keeps the first.
        if (cur[j] > best.length) best = {i - cur[j], j - cur[j], cur[j]};
      }
    }
    std::swap(prev, cur);
  }
  return best;
}

std::vector<Tile> greedy_matches(std::u32string_view suspect, std::u32string_view source, std::size_t min_match) {
  std::vector<bool> ms(suspect.size(), false), mt(source.size(), false);
  std::vector<Tile> tiles;
  while (true) {
    const Tile t = longest_unmarked_match(suspect, source, ms, mt);
    if (t.length < min_match || t.length == 0) break;
    std::fill_n(ms.begin() + static_cast<std::ptrdiff_t>(t.suspect_offset), t.length, true);
    std::fill_n(mt.begin() + static_cast<std::ptrdiff_t>(t.source_offset), t.length, true);
    tiles.push_back(t);
  }
  return tiles;
}

std::vector<Tile> gst_tiles(std::string_view suspect, std::string_view source, const GstParams& p) {
  const auto a = to_u32(suspect);
  const auto b = to_u32(source);
  if (a.size() > p.max_chars || b.size() > p.max_chars)
    throw Error("GST input longer than max_chars (" + std::to_string(p.max_chars) + ")");

  auto raw = greedy_matches(a, b, p.min_match);
  std::sort(raw.begin(), raw.end(),
            [](const Tile& x, const Tile& y) { return x.suspect_offset < y.suspect_offset; });

  std::vector<Tile> merged;
  for (const auto& t : raw) {
    if (!merged.empty()) {
      Tile& last = merged.back();
      if (last.suspect_offset + last.length == t.suspect_offset && last.source_offset + last.length == t.source_offset) {
        last.length += t.length;
        continue;
      }
    }
    merged.push_back(t);
  }
  std::erase_if(merged, [&](const Tile& t) { return t.length < p.min_tile; });
  return merged;
}

double gst_containment(std::string_view suspect, std::string_view source, const GstParams& p) {
  const std::string s = canonicalize(suspect);
  const std::string r = canonicalize(source);
  const std::size_t len = to_u32(s).size();
  if (len == 0) throw EmptySuspect();
  std::size_t covered = 0;
  for (const auto& t : gst_tiles(s, r, p)) covered += t.length;
  return static_cast<double>(covered) / static_cast<double>(len);
}

nlohmann::json to_json(const std::vector<Tile>& tiles) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : tiles)
    arr.push_back({{"suspect_offset", t.suspect_offset}, {"source_offset", t.source_offset}, {"length", t.length}});
  return arr;
}

}  // namespace paradet::gst
