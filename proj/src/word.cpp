#include "hyperwalk/word.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <stdexcept>

namespace hyperwalk {

char letter_char(Letter l) {
  return l > 0 ? static_cast<char>('a' + l - 1) : static_cast<char>('A' + (-l) - 1);
}

std::vector<Letter> tokenize_letters(std::string_view text) {
  std::vector<Letter> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char ch = text[i];
    if (ch == ' ' || ch == '*' || ch == '.') {
      ++i;
      continue;
    }
    if (ch == '1' && (i + 1 == text.size() || !std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      ++i;
      continue;
    }
    if (!std::isalpha(static_cast<unsigned char>(ch))) {
      throw std::invalid_argument("unexpected character '" + std::string(1, ch) + "' in word \"" +
                                  std::string(text) + "\"");
    }
    Letter l = std::islower(static_cast<unsigned char>(ch)) ? static_cast<Letter>(ch - 'a' + 1)
                                                             : static_cast<Letter>(-(ch - 'A' + 1));
    ++i;
    int exponent = 1;
    if (i < text.size() && text[i] == '^') {
      ++i;
      const char* first = text.data() + i;
      const char* last = text.data() + text.size();
      auto [ptr, ec] = std::from_chars(first, last, exponent);
      if (ec != std::errc() || ptr == first) {
        throw std::invalid_argument("bad exponent in word \"" + std::string(text) + "\"");
      }
      i += static_cast<std::size_t>(ptr - first);
    }
    if (exponent < 0) {
      l = static_cast<Letter>(-l);
      exponent = -exponent;
    }
    out.insert(out.end(), static_cast<std::size_t>(exponent), l);
  }
  return out;
}

Word Word::reduce(std::span<const Letter> letters) {
  Word w;
  for (Letter l : letters) w.append(l);
  return w;
}

Word Word::parse(std::string_view text, int rank) {
  const auto letters = tokenize_letters(text);
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (std::abs(letters[i]) > rank) {
      throw std::invalid_argument("letter '" + std::string(1, letter_char(letters[i])) +
                                  "' exceeds rank " + std::to_string(rank));
    }
    if (i > 0 && letters[i] == -letters[i - 1]) {
      throw std::invalid_argument("word \"" + std::string(text) + "\" is not reduced");
    }
  }
  Word w;
  w.letters_ = letters;
  return w;
}

Word Word::parse_reducing(std::string_view text, int rank) {
  const auto letters = tokenize_letters(text);
  for (Letter l : letters) {
    if (std::abs(l) > rank) {
      throw std::invalid_argument("letter '" + std::string(1, letter_char(l)) + "' exceeds rank " +
                                  std::to_string(rank));
    }
  }
  return reduce(letters);
}

Word Word::power(Letter l, int exponent) {
  Word w;
  if (exponent < 0) {
    l = static_cast<Letter>(-l);
    exponent = -exponent;
  }
  w.letters_.assign(static_cast<std::size_t>(exponent), l);
  return w;
}

std::string Word::str() const {
  if (letters_.empty()) return "1";
  std::string s;
  s.reserve(letters_.size());
  for (Letter l : letters_) s.push_back(letter_char(l));
  return s;
}

Word Word::inverse() const {
  Word w;
  w.letters_.resize(letters_.size());
  std::transform(letters_.rbegin(), letters_.rend(), w.letters_.begin(),
                 [](Letter l) { return static_cast<Letter>(-l); });
  return w;
}

Word Word::prefix(std::size_t n) const {
  Word w;
  w.letters_.assign(letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(std::min(n, letters_.size())));
  return w;
}

void Word::append(Letter l) {
  if (!letters_.empty() && letters_.back() == -l) {
    letters_.pop_back();
  } else {
    letters_.push_back(l);
  }
}

void Word::append(const Word& w) {
  for (Letter l : w.letters_) append(l);
}

std::strong_ordering operator<=>(const Word& a, const Word& b) {
  if (a.length() != b.length()) return a.length() <=> b.length();
  for (std::size_t i = 0; i < a.length(); ++i) {
    const int ia = letter_index(a[i]);
    const int ib = letter_index(b[i]);
    if (ia != ib) return ia <=> ib;
  }
  return std::strong_ordering::equal;
}

int Word::max_generator() const {
  int m = 0;
  for (Letter l : letters_) m = std::max(m, std::abs(static_cast<int>(l)));
  return m;
}

std::size_t common_prefix(const Word& a, const Word& b) {
  const auto la = a.letters();
  const auto lb = b.letters();
  const std::size_t n = std::min(la.size(), lb.size());
  std::size_t i = 0;
  while (i < n && la[i] == lb[i]) ++i;
  return i;
}

std::size_t WordHash::operator()(const Word& w) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (Letter l : w.letters()) {
    h ^= static_cast<std::size_t>(static_cast<std::uint8_t>(l));
    h *= 1099511628211ull;
  }
  return h ^ w.length();
}

}  // namespace hyperwalk
