#include "paradet/synsim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>
#include <unordered_map>

#include "paradet/error.hpp"

namespace paradet::synsim {

OrderVectorPair build_order_vectors(std::span<const textprep::Token> sp_tokens,
                                    std::span<const textprep::Token> sr_tokens) {
  // Suspect positions per word, consumed front to back.
  std::unordered_map<std::string, std::deque<std::int64_t>> positions;
  for (std::size_t j = 0; j < sp_tokens.size(); ++j)
    positions[sp_tokens[j].normalized].push_back(static_cast<std::int64_t>(j + 1));

  OrderVectorPair out;
  out.base.reserve(sr_tokens.size());
  out.other.reserve(sr_tokens.size());
  for (std::size_t i = 0; i < sr_tokens.size(); ++i) {
    out.base.push_back(static_cast<std::int64_t>(i + 1));
    auto it = positions.find(sr_tokens[i].normalized);
    if (it == positions.end() || it->second.empty()) {
      out.other.push_back(0);
    } else {
      out.other.push_back(it->second.front());
      it->second.pop_front();
    }
  }
  return out;
}

double order_cosine(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  if (a.size() != b.size()) throw DimMismatch("order vectors differ in length");
  // Exact integer accumulation keeps cosine(v, v) == 1 exactly.
  std::int64_t dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) return 0.0;
  const double c = static_cast<double>(dot) / std::sqrt(static_cast<double>(na) * static_cast<double>(nb));
  return std::min(1.0, std::max(-1.0, c));
}

double syntactic_similarity(std::span<const textprep::Token> sp_tokens, std::span<const textprep::Token> sr_tokens) {
  const auto v = build_order_vectors(sp_tokens, sr_tokens);
  return std::max(0.0, order_cosine(v.base, v.other));
}

}  // namespace paradet::synsim
