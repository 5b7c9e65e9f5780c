#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace paradet::gst {

// Offsets and lengths count Unicode code points of the canonicalized text.
struct Tile {
  std::size_t suspect_offset = 0;
  std::size_t source_offset = 0;
  std::size_t length = 0;

  bool operator==(const Tile&) const = default;
};

struct GstParams {
  std::size_t min_match = 5;
  std::size_t min_tile = 10;
  double threshold = 0.15;
  std::size_t max_chars = 50000;  // per side; longer inputs are rejected
};

void validate(const GstParams& p);  // throws ConfigError

// Lowercase, whitespace runs collapsed to one space, trimmed.
std::string canonicalize(std::string_view text);

// Longest common substring made of characters not yet marked on either side.
// Ties: smallest suspect offset, then smallest source offset. Length 0 if none.
Tile longest_unmarked_match(std::u32string_view suspect, std::u32string_view source,
                            const std::vector<bool>& suspect_marked, const std::vector<bool>& source_marked);

// Greedy rounds before merging: one longest match (>= min_match) per round.
std::vector<Tile> greedy_matches(std::u32string_view suspect, std::u32string_view source, std::size_t min_match);

// Greedy tiling, then merge of tiles contiguous on both sides, then removal of
// tiles shorter than min_tile. Sorted by suspect offset.
std::vector<Tile> gst_tiles(std::string_view suspect, std::string_view source, const GstParams& p);

// Total tile length / suspect length, both canonicalized. Throws EmptySuspect.
double gst_containment(std::string_view suspect, std::string_view source, const GstParams& p);

std::u32string to_u32(std::string_view utf8);

nlohmann::json to_json(const std::vector<Tile>& tiles);

}  // namespace paradet::gst
