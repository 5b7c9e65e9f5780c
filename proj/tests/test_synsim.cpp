#include <doctest.h>

#include <random>

#include "paradet/error.hpp"
#include "paradet/synsim.hpp"

using namespace paradet;
using namespace paradet::synsim;

namespace {

std::vector<textprep::Token> tokens(std::string_view text) {
  const auto s = textprep::preprocess_passage(text, {});
  REQUIRE(s.size() == 1);
  return s[0].all_tokens;
}

}  // namespace

TEST_CASE("published order vectors") {
  const std::vector<std::int64_t> base{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13};
  const std::vector<std::int64_t> other{13, 12, 1, 2, 3, 4, 5, 8, 7, 6, 9, 10, 11};
  CHECK(order_cosine(base, other) == doctest::Approx(671.0 / 819.0).epsilon(1e-12));
  CHECK(std::abs(order_cosine(base, other) - 0.8192918192918193) < 1e-9);
}

TEST_CASE("worked sentence pair") {
  const auto src = tokens("Mary is the winner of the tournament and John is the runner up");
  const auto sus = tokens("The winner of the tournament is John and the runner up is Mary");
  const auto v = build_order_vectors(sus, src);
  CHECK(v.base == std::vector<std::int64_t>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13});
  // Repeated words pair up left to right.
  CHECK(v.other == std::vector<std::int64_t>{13, 6, 1, 2, 3, 4, 5, 8, 7, 12, 9, 10, 11});
  CHECK(syntactic_similarity(sus, src) == doctest::Approx(0.8778998778998779).epsilon(1e-12));
}

TEST_CASE("small cases") {
  const auto v = build_order_vectors(tokens("c a b"), tokens("a b c"));
  CHECK(v.other == std::vector<std::int64_t>{2, 3, 1});
  CHECK(syntactic_similarity(tokens("x y"), tokens("a b")) == 0.0);
  const std::vector<std::int64_t> z{0, 0}, o{1, 2}, s{1};
  CHECK(order_cosine(z, o) == 0.0);
  CHECK_THROWS_AS(order_cosine(o, s), DimMismatch);
}

TEST_CASE("reflexivity and bounds") {
  std::mt19937_64 rng(9);
  const std::vector<std::string> vocab = {"the", "a", "cat", "dog", "sat", "on", "mat", "and", "ran", "the"};
  for (int round = 0; round < 300; ++round) {
    std::string a, b;
    for (int i = 0, n = 1 + static_cast<int>(rng() % 12); i < n; ++i) a += vocab[rng() % vocab.size()] + " ";
    for (int i = 0, n = 1 + static_cast<int>(rng() % 12); i < n; ++i) b += vocab[rng() % vocab.size()] + " ";
    const auto ta = tokens(a), tb = tokens(b);
    CHECK(syntactic_similarity(ta, ta) == 1.0);
    const double s = syntactic_similarity(ta, tb);
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
  }
}
