#include "paradet/editsim.hpp"

#include <algorithm>
#include <numeric>

namespace paradet::editsim {

std::size_t word_edit_distance(std::span<const std::string> sp, std::span<const std::string> sr) {
  // Rolling row over the shorter sequence.
  if (sp.size() < sr.size()) std::swap(sp, sr);
  std::vector<std::size_t> row(sr.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= sp.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= sr.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t replace = diag + (sp[i - 1] == sr[j - 1] ? 0 : 1);
      row[j] = std::min({up + 1, row[j - 1] + 1, replace});
      diag = up;
    }
  }
  return row[sr.size()];
}

double insdel_similarity(std::span<const std::string> sp, std::span<const std::string> sr) {
  const std::size_t longest = std::max(sp.size(), sr.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(word_edit_distance(sp, sr)) / static_cast<double>(longest);
}

std::vector<std::string> stems(std::span<const textprep::Token> tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.stem);
  return out;
}

}  // namespace paradet::editsim
