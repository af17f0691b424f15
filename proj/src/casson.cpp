#include "hyperwalk/casson.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hyperwalk/word.hpp"

namespace hyperwalk {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("Casson value overflow");
  return out;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("Casson value overflow");
  return out;
}

std::int64_t checked_neg(std::int64_t a) { return checked_mul(a, -1); }

std::int64_t parse_int(std::string_view s) {
  std::size_t used = 0;
  const std::string text(s);
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad integer '" + text + "' in trace");
  }
  if (used != text.size()) throw std::invalid_argument("bad integer '" + text + "' in trace");
  return v;
}

// log(c0 / sqrt(n)) - log(K c^n); positive when the crossover inequality holds.
double crossover_gap(double k, double c, double c0, double n) {
  return std::log(c0) - 0.5 * std::log(n) - std::log(k) - n * std::log(c);
}

void validate_crossover(double k, double c, double c0) {
  if (!(k > 0.0) || !(c > 0.0) || !(c < 1.0) || !(c0 > 0.0)) {
    throw std::invalid_argument("crossover needs K > 0, 0 < c < 1 and c0 > 0");
  }
}

// First n >= lo with a positive gap, given that the gap is increasing from lo on.
std::int64_t first_positive_from(double k, double c, double c0, std::int64_t lo) {
  if (crossover_gap(k, c, c0, static_cast<double>(lo)) > 0.0) return lo;
  std::int64_t step = 1;
  std::int64_t hi = lo + 1;
  while (!(crossover_gap(k, c, c0, static_cast<double>(hi)) > 0.0)) {
    lo = hi;
    if (step > (std::int64_t{1} << 60)) throw std::overflow_error("crossover beyond 2^61");
    step *= 2;
    hi = lo + step;
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (crossover_gap(k, c, c0, static_cast<double>(mid)) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace

HomologySphereValue three_sphere() { return {}; }

HomologySphereValue casson_surgery(const SurgeryKnot& k, std::int64_t m) {
  if (k.name.empty() || k.name.find_first_of("(),#~ ") != std::string::npos) {
    throw std::invalid_argument("knot name must be nonempty and free of trace syntax");
  }
  HomologySphereValue v;
  v.lambda = checked_mul(m, k.half_second_derivative);
  v.trace.push_back("S(" + k.name + "," + std::to_string(k.half_second_derivative) + "," + std::to_string(m) + ")");
  return v;
}

HomologySphereValue connected_sum(const HomologySphereValue& a, const HomologySphereValue& b) {
  if (a.trace.empty()) return b;
  if (b.trace.empty()) return a;
  HomologySphereValue v;
  v.lambda = checked_add(a.lambda, b.lambda);
  v.trace = a.trace;
  v.trace.insert(v.trace.end(), b.trace.begin(), b.trace.end());
  v.trace.emplace_back("#");
  return v;
}

HomologySphereValue reverse_orientation(const HomologySphereValue& a) {
  if (a.trace.empty()) return a;
  HomologySphereValue v;
  v.lambda = checked_neg(a.lambda);
  v.trace = a.trace;
  if (v.trace.back() == "~") {
    v.trace.pop_back();
  } else {
    v.trace.emplace_back("~");
  }
  return v;
}

std::int64_t replay_trace(const std::vector<std::string>& trace) {
  std::vector<std::int64_t> stack;
  for (const auto& tok : trace) {
    if (tok == "#") {
      if (stack.size() < 2) throw std::invalid_argument("'#' needs two values");
      const std::int64_t b = stack.back();
      stack.pop_back();
      stack.back() = checked_add(stack.back(), b);
    } else if (tok == "~") {
      if (stack.empty()) throw std::invalid_argument("'~' needs a value");
      stack.back() = checked_neg(stack.back());
    } else if (tok.size() > 3 && tok.rfind("S(", 0) == 0 && tok.back() == ')') {
      const std::string_view body(tok.data() + 2, tok.size() - 3);
      const auto c1 = body.find(',');
      const auto c2 = body.rfind(',');
      if (c1 == std::string_view::npos || c1 == c2 || c1 == 0) throw std::invalid_argument("bad surgery token " + tok);
      const std::int64_t h = parse_int(body.substr(c1 + 1, c2 - c1 - 1));
      const std::int64_t m = parse_int(body.substr(c2 + 1));
      stack.push_back(checked_mul(m, h));
    } else {
      throw std::invalid_argument("unknown trace token '" + tok + "'");
    }
  }
  if (stack.size() > 1) throw std::invalid_argument("trace leaves more than one value");
  return stack.empty() ? 0 : stack.back();
}

std::int64_t homomorphism_eval(const std::map<char, std::int64_t>& generator_values, std::string_view word) {
  std::int64_t total = 0;
  for (Letter l : tokenize_letters(word)) {
    const char gen = letter_char(static_cast<Letter>(l > 0 ? l : -l));
    const auto it = generator_values.find(gen);
    if (it == generator_values.end()) throw std::invalid_argument(std::string("no value for generator '") + gen + "'");
    total = checked_add(total, l > 0 ? it->second : checked_neg(it->second));
  }
  return total;
}

void validate_integer_law(const IntegerLaw& law, bool strict) {
  if (law.empty()) throw std::invalid_argument("integer law needs a nonempty support");
  double total = 0.0;
  std::map<std::int64_t, double> agg;
  for (const auto& [step, p] : law) {
    if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("integer law weights must be positive");
    total += p;
    agg[step] += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("integer law weights must sum to 1");
  if (!strict) return;
  for (const auto& [step, p] : agg) {
    const auto it = agg.find(-step);
    if (it == agg.end() || std::abs(it->second - p) > 1e-12) throw std::invalid_argument("strict mode needs a symmetric law");
  }
  std::int64_t g = 0;
  const std::int64_t first = agg.begin()->first;
  for (const auto& [step, p] : agg) g = std::gcd(g, step - first);
  if (g != 1) throw std::invalid_argument("strict mode needs gcd of support differences equal to 1");
}

double IntegerWalkLaw::at(std::int64_t k) const {
  const std::int64_t i = k - offset;
  if (i < 0 || i >= static_cast<std::int64_t>(weights.size())) return 0.0;
  return weights[static_cast<std::size_t>(i)];
}

double IntegerWalkLaw::total() const {
  double t = 0.0;
  for (double w : weights) t += w;
  return t;
}

IntegerWalkLaw z_walk_law(const IntegerLaw& law, int n, bool strict) {
  validate_integer_law(law, strict);
  if (n < 0) throw std::invalid_argument("n must be nonnegative");
  std::int64_t lo = law.front().first;
  std::int64_t hi = lo;
  for (const auto& e : law) {
    lo = std::min(lo, e.first);
    hi = std::max(hi, e.first);
  }
  const auto span = static_cast<std::size_t>(hi - lo);
  IntegerWalkLaw out;
  out.offset = 0;
  out.weights = {1.0};
  for (int step = 0; step < n; ++step) {
    std::vector<double> next(out.weights.size() + span, 0.0);
    for (std::size_t i = 0; i < out.weights.size(); ++i) {
      const double w = out.weights[i];
      if (w == 0.0) continue;
      for (const auto& [s, p] : law) next[i + static_cast<std::size_t>(s - lo)] += w * p;
    }
    out.weights = std::move(next);
  }
  out.offset = lo * n;
  return out;
}

HitProbability z_walk_hit_prob(const IntegerLaw& law, int n, std::int64_t k, bool strict) {
  HitProbability out;
  out.probability = z_walk_law(law, n, strict).at(k);
  out.c_lower = n == 0 ? out.probability : out.probability * std::sqrt(static_cast<double>(n));
  return out;
}

std::int64_t existence_crossover(double k, double c, double c0) {
  validate_crossover(k, c, c0);
  if (crossover_gap(k, c, c0, 1.0) > 0.0) return 1;
  // The gap is convex in n and decreases until n* = 1 / (2 |log c|); from a
  // nonpositive value at n = 1 it stays nonpositive up to n*.
  const double n_star = 1.0 / (2.0 * -std::log(c));
  const auto lo = static_cast<std::int64_t>(std::max(1.0, std::floor(n_star)));
  return first_positive_from(k, c, c0, lo);
}

std::int64_t sustained_crossover(double k, double c, double c0) {
  validate_crossover(k, c, c0);
  const double n_star = 1.0 / (2.0 * -std::log(c));
  const auto lo = static_cast<std::int64_t>(std::max(1.0, std::ceil(n_star)));
  std::int64_t n = first_positive_from(k, c, c0, lo);
  // Walk back over the decreasing part while the gap stays positive.
  while (n > 1 && crossover_gap(k, c, c0, static_cast<double>(n - 1)) > 0.0) --n;
  return n;
}

GenusThreshold genus_threshold_check(std::int64_t splitting_distance, std::int64_t g) {
  if (splitting_distance < 0) throw std::invalid_argument("splitting distance must be nonnegative");
  if (g < 1) throw std::invalid_argument("genus must be at least 1");
  return {splitting_distance > 2, splitting_distance > 2 * g};
}

}  // namespace hyperwalk
