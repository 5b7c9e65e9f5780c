#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "paradet/textprep.hpp"

namespace paradet::synsim {

// Word-position vectors indexed by the source sentence. base is 1..n; other[i]
// is the 1-based suspect position matched to source word i, or 0.
struct OrderVectorPair {
  std::vector<std::int64_t> base;
  std::vector<std::int64_t> other;
};

// Matching is on normalized forms; repeated words pair up left to right.
OrderVectorPair build_order_vectors(std::span<const textprep::Token> sp_tokens,
                                    std::span<const textprep::Token> sr_tokens);

// Cosine of integer vectors; 0 when either is all zeros.
double order_cosine(std::span<const std::int64_t> a, std::span<const std::int64_t> b);

// Reordering score in [0, 1]. Intended for all_tokens (stopwords kept).
double syntactic_similarity(std::span<const textprep::Token> sp_tokens, std::span<const textprep::Token> sr_tokens);

}  // namespace paradet::synsim
