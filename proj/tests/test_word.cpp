#include <doctest.h>

#include "hyperwalk/word.hpp"
#include "test_util.hpp"

using hyperwalk::Word;
using testutil::W;

TEST_CASE("word parsing and printing") {
  CHECK(W("abA").str() == "abA");
  CHECK(W("1").empty());
  CHECK(W("").empty());
  CHECK(W("b^5").str() == "bbbbb");
  CHECK(W("a^-2 b").str() == "AAb");
  CHECK(Word{}.str() == "1");
  CHECK_THROWS_AS(W("aA"), std::invalid_argument);
  CHECK_THROWS_AS(W("c"), std::invalid_argument);
  CHECK(Word::parse_reducing("aAbB", 2).empty());
}

TEST_CASE("word group operations") {
  const Word x = W("abA");
  CHECK((x * x.inverse()).empty());
  CHECK((W("ab") * W("Ba")).str() == "aa");
  CHECK(W("abab").prefix(2) == W("ab"));
  CHECK(hyperwalk::common_prefix(W("aab"), W("aBB")) == 1);
  CHECK(hyperwalk::word_distance(W(""), W("abA")) == 3);
  CHECK(hyperwalk::word_distance(W("ab"), W("aB")) == 2);
}

TEST_CASE("shortlex order") {
  CHECK(W("b") < W("aa"));
  CHECK(W("a") < W("A"));
  CHECK(W("A") < W("b"));
  CHECK(W("ab") < W("aB"));
}
