#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace paradet::resources {

enum class EmbeddingFormat { text, binary };

std::optional<EmbeddingFormat> parse_embedding_format(std::string_view name);

// Word vectors keyed by the exact stored string.
class EmbeddingStore {
 public:
  explicit EmbeddingStore(std::size_t dim = 0) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }

  // Throws DimMismatch. A repeated word keeps its first vector.
  void add(std::string word, std::span<const float> vec);

  // Case-sensitive lookup.
  std::optional<std::span<const float>> find(std::string_view word) const;
  // Exact lookup, then the first stored word whose ASCII lowercase form equals word.
  std::optional<std::span<const float>> find_folded(std::string_view word) const;

  const std::vector<std::string>& words() const { return words_; }

 private:
  std::size_t dim_;
  std::vector<std::string> words_;
  std::vector<float> data_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::unordered_map<std::string, std::uint32_t> folded_;

  std::span<const float> row(std::uint32_t i) const { return {data_.data() + std::size_t{i} * dim_, dim_}; }
};

// word2vec text or binary layout. `limit` > 0 reads only the first `limit`
// vectors (files are frequency sorted). Throws HeaderMismatch or
// TruncatedVector.
EmbeddingStore load_embeddings(const std::filesystem::path& path, EmbeddingFormat format, std::size_t limit = 0);

void save_embeddings(const EmbeddingStore& store, const std::filesystem::path& path, EmbeddingFormat format);

// dot(a, b) / (|a| |b|); 0 when either vector is all zeros. Throws DimMismatch.
double cosine(std::span<const double> a, std::span<const double> b);
double cosine(std::span<const float> a, std::span<const float> b);

}  // namespace paradet::resources
