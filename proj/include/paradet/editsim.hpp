#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "paradet/textprep.hpp"

namespace paradet::editsim {

// Unit-cost word-level Levenshtein distance (insert, delete, replace).
std::size_t word_edit_distance(std::span<const std::string> sp, std::span<const std::string> sr);

// 1 - distance / max(len); 1.0 when both are empty.
double insdel_similarity(std::span<const std::string> sp, std::span<const std::string> sr);

// Stems of a token list, the stream insdel similarity runs on.
std::vector<std::string> stems(std::span<const textprep::Token> tokens);

}  // namespace paradet::editsim
