#include "paradet/embeddings.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "paradet/error.hpp"

namespace paradet::resources {
namespace {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

bool parse_size(std::string_view s, std::size_t& out) {
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

std::pair<std::size_t, std::size_t> parse_header(const std::string& line) {
  std::istringstream in(line);
  std::string count_s, dim_s, extra;
  in >> count_s >> dim_s;
  std::size_t count = 0, dim = 0;
  if (!parse_size(count_s, count) || !parse_size(dim_s, dim) || dim == 0 || (in >> extra))
    throw HeaderMismatch("embedding header must be '<count> <dim>', got '" + line + "'");
  return {count, dim};
}

float read_le_float(const char* bytes) {
  std::uint32_t bits = 0;
  for (int i = 3; i >= 0; --i) bits = (bits << 8) | static_cast<unsigned char>(bytes[i]);
  return std::bit_cast<float>(bits);
}

void write_le_float(std::ostream& out, float f) {
  auto bits = std::bit_cast<std::uint32_t>(f);
  char bytes[4];
  for (char& b : bytes) {
    b = static_cast<char>(bits & 0xFF);
    bits >>= 8;
  }
  out.write(bytes, 4);
}

EmbeddingStore load_text(std::istream& in, std::size_t limit) {
  std::string line;
  if (!std::getline(in, line)) throw HeaderMismatch("empty embedding file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto [count, dim] = parse_header(line);
  const std::size_t wanted = limit > 0 ? std::min(limit, count) : count;

  EmbeddingStore store(dim);
  std::vector<float> vec(dim);
  std::size_t read = 0;
  while (read < wanted && std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string word;
    fields >> word;
    std::size_t k = 0;
    std::string tok;
    while (fields >> tok) {
      if (k == dim) throw HeaderMismatch("vector for '" + word + "' is longer than dim " + std::to_string(dim));
      const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), vec[k]);
      if (ec != std::errc() || p != tok.data() + tok.size()) throw TruncatedVector(word);
      ++k;
    }
    if (k != dim) throw TruncatedVector(word);
    store.add(std::move(word), vec);
    ++read;
  }
  if (read != wanted)
    throw HeaderMismatch("header declares " + std::to_string(count) + " vectors, file has " + std::to_string(read));
  return store;
}

EmbeddingStore load_binary(std::istream& in, std::size_t limit) {
  std::string line;
  if (!std::getline(in, line)) throw HeaderMismatch("empty embedding file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto [count, dim] = parse_header(line);
  const std::size_t wanted = limit > 0 ? std::min(limit, count) : count;

  EmbeddingStore store(dim);
  std::vector<char> raw(dim * 4);
  std::vector<float> vec(dim);
  for (std::size_t n = 0; n < wanted; ++n) {
    std::string word;
    int c = in.get();
    while (c == '\n' || c == '\r') c = in.get();
    while (c != EOF && c != ' ') {
      word.push_back(static_cast<char>(c));
      c = in.get();
    }
    if (c == EOF) {
      if (word.empty())
        throw HeaderMismatch("header declares " + std::to_string(count) + " vectors, file has " + std::to_string(n));
      throw TruncatedVector(word);
    }
    in.read(raw.data(), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) throw TruncatedVector(word);
    for (std::size_t k = 0; k < dim; ++k) vec[k] = read_le_float(raw.data() + 4 * k);
    store.add(std::move(word), vec);
  }
  return store;
}

template <typename T>
double cosine_impl(std::span<const T> a, std::span<const T> b) {
  if (a.size() != b.size())
    throw DimMismatch("cosine of vectors with dims " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a[i], y = b[i];
    dot += x * y;
    na += x * x;
    nb += y * y;
  }
  if (na == 0 || nb == 0) return 0.0;
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

}  // namespace

std::optional<EmbeddingFormat> parse_embedding_format(std::string_view name) {
  if (name == "text") return EmbeddingFormat::text;
  if (name == "binary") return EmbeddingFormat::binary;
  return std::nullopt;
}

void EmbeddingStore::add(std::string word, std::span<const float> vec) {
  if (vec.size() != dim_)
    throw DimMismatch("vector for '" + word + "' has dim " + std::to_string(vec.size()) + ", store has " +
                      std::to_string(dim_));
  const auto slot = static_cast<std::uint32_t>(words_.size());
  if (!index_.emplace(word, slot).second) return;
  folded_.emplace(ascii_lower(word), slot);
  data_.insert(data_.end(), vec.begin(), vec.end());
  words_.push_back(std::move(word));
}

std::optional<std::span<const float>> EmbeddingStore::find(std::string_view word) const {
  if (const auto it = index_.find(std::string(word)); it != index_.end()) return row(it->second);
  return std::nullopt;
}

std::optional<std::span<const float>> EmbeddingStore::find_folded(std::string_view word) const {
  if (auto v = find(word)) return v;
  if (const auto it = folded_.find(ascii_lower(word)); it != folded_.end()) return row(it->second);
  return std::nullopt;
}

EmbeddingStore load_embeddings(const std::filesystem::path& path, EmbeddingFormat format, std::size_t limit) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFile(path.string());
  return format == EmbeddingFormat::text ? load_text(in, limit) : load_binary(in, limit);
}

void save_embeddings(const EmbeddingStore& store, const std::filesystem::path& path, EmbeddingFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << store.size() << ' ' << store.dim() << '\n';
  for (const auto& word : store.words()) {
    const auto vec = *store.find(word);
    out << word << ' ';
    if (format == EmbeddingFormat::binary) {
      for (float f : vec) write_le_float(out, f);
      out << '\n';
    } else {
      for (std::size_t k = 0; k < vec.size(); ++k) {
        char buf[32];
        const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, vec[k]);
        out.write(buf, p - buf);
        out << (k + 1 == vec.size() ? '\n' : ' ');
      }
    }
  }
}

double cosine(std::span<const double> a, std::span<const double> b) { return cosine_impl(a, b); }
double cosine(std::span<const float> a, std::span<const float> b) { return cosine_impl(a, b); }

}  // namespace paradet::resources
