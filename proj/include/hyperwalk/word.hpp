#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hyperwalk {

/// A letter of a free group alphabet: +i is the i-th generator, -i its inverse.
using Letter = std::int8_t;

constexpr int kMaxRank = 26;

/// Position of a letter in the canonical alphabet order a < A < b < B < ...
inline int letter_index(Letter l) { return 2 * (l > 0 ? l - 1 : -l - 1) + (l < 0 ? 1 : 0); }
inline Letter letter_from_index(int idx) {
  const auto gen = static_cast<Letter>(idx / 2 + 1);
  return (idx % 2 == 0) ? gen : static_cast<Letter>(-gen);
}
char letter_char(Letter l);

/// Splits text such as "abA", "b^5a^-2" or "1" (identity) into letters
/// without reducing. Lowercase letters are generators, uppercase their
/// inverses. Throws std::invalid_argument on malformed input.
std::vector<Letter> tokenize_letters(std::string_view text);

/// Reduced word in the free group of some rank. The rank is not stored:
/// callers validate letters against a ModelSpace.
class Word {
 public:
  Word() = default;

  /// Builds a word from letters, freely reducing them.
  static Word reduce(std::span<const Letter> letters);
  /// Parses a word that must already be reduced, with every letter of
  /// index <= rank. Throws std::invalid_argument otherwise.
  static Word parse(std::string_view text, int rank);
  /// Parses and freely reduces (no reducedness requirement).
  static Word parse_reducing(std::string_view text, int rank);
  static Word power(Letter l, int exponent);

  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  std::span<const Letter> letters() const { return letters_; }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter back() const { return letters_.back(); }

  /// Canonical text form; identity prints as "1".
  std::string str() const;

  Word inverse() const;
  Word prefix(std::size_t n) const;

  /// Right multiplication with cancellation.
  void append(Letter l);
  void append(const Word& w);
  void pop_back() { letters_.pop_back(); }

  friend Word operator*(const Word& a, const Word& b) {
    Word out = a;
    out.append(b);
    return out;
  }
  friend bool operator==(const Word&, const Word&) = default;

  /// Shortlex order using the canonical letter order.
  friend std::strong_ordering operator<=>(const Word& a, const Word& b);

  /// Largest rank-index used by the word (0 for identity).
  int max_generator() const;

 private:
  std::vector<Letter> letters_;
};

/// Length of the common prefix of two reduced words.
std::size_t common_prefix(const Word& a, const Word& b);

/// Word metric distance |a^-1 b| computed without allocating.
inline std::size_t word_distance(const Word& a, const Word& b) {
  const std::size_t cp = common_prefix(a, b);
  return a.length() + b.length() - 2 * cp;
}

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept;
};

}  // namespace hyperwalk
