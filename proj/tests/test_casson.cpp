#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "hyperwalk/casson.hpp"

using namespace hyperwalk;

namespace {

const IntegerLaw kLazy{{-1, 0.25}, {0, 0.5}, {1, 0.25}};
const IntegerLaw kSimple{{-1, 0.5}, {1, 0.5}};

// First n by plain scan with direct powers.
std::int64_t scan_crossover(double k, double c, double c0) {
  for (std::int64_t n = 1;; ++n) {
    if (c0 / std::sqrt(static_cast<double>(n)) > k * std::pow(c, static_cast<double>(n))) return n;
  }
}

std::string random_formal_word(std::mt19937_64& gen) {
  static const char letters[] = "tTsSuU";
  std::string w;
  const int len = static_cast<int>(gen() % 12);
  for (int i = 0; i < len; ++i) w.push_back(letters[gen() % 6]);
  return w;
}

}  // namespace

TEST_CASE("surgery on the trefoil") {
  const auto t = SurgeryKnot::trefoil();
  CHECK(casson_surgery(t, 0).lambda == 0);
  CHECK(casson_surgery(t, 0).lambda == three_sphere().lambda);
  CHECK(std::abs(casson_surgery(t, -1).lambda) == 1);
  for (int m = -10; m < 10; ++m) CHECK(casson_surgery(t, m + 1).lambda - casson_surgery(t, m).lambda == 1);
  const SurgeryKnot other{"k", -3};
  for (int m = -10; m < 10; ++m) CHECK(casson_surgery(other, m + 1).lambda - casson_surgery(other, m).lambda == -3);
  CHECK_THROWS_AS(casson_surgery(SurgeryKnot{"bad#name", 1}, 1), std::invalid_argument);
  CHECK_THROWS_AS(casson_surgery(SurgeryKnot{"big", INT64_MAX}, 2), std::overflow_error);
}

TEST_CASE("connected sum and orientation") {
  const auto t = SurgeryKnot::trefoil();
  const auto p = casson_surgery(t, 1);
  CHECK(connected_sum(p, p).lambda == 2);
  CHECK(connected_sum(casson_surgery(t, 5), three_sphere()).lambda == 5);
  CHECK(connected_sum(casson_surgery(t, 3), casson_surgery(t, -3)).lambda == 0);
  CHECK(reverse_orientation(p).lambda == -1);
  CHECK(reverse_orientation(three_sphere()).lambda == 0);
  CHECK(reverse_orientation(reverse_orientation(p)).lambda == p.lambda);
  CHECK(reverse_orientation(reverse_orientation(p)).trace == p.trace);
  const auto v = connected_sum(reverse_orientation(casson_surgery(t, 4)), connected_sum(p, casson_surgery(t, -2)));
  CHECK(v.trace == std::vector<std::string>{"S(trefoil,1,4)", "~", "S(trefoil,1,1)", "S(trefoil,1,-2)", "#", "#"});
  CHECK(replay_trace(v.trace) == v.lambda);
  CHECK(v.lambda == -5);
}

TEST_CASE("trace replay on random constructions") {
  std::mt19937_64 gen(13);
  const SurgeryKnot knots[] = {SurgeryKnot::trefoil(), {"fig8", -1}, {"k7", 7}};
  for (int trial = 0; trial < 300; ++trial) {
    HomologySphereValue v = three_sphere();
    std::int64_t expected = 0;
    for (int step = 0; step < 12; ++step) {
      if (gen() % 4 == 0) {
        v = reverse_orientation(v);
        expected = -expected;
      } else {
        const auto& k = knots[gen() % 3];
        const auto m = static_cast<std::int64_t>(gen() % 21) - 10;
        v = connected_sum(v, casson_surgery(k, m));
        expected += m * k.half_second_derivative;
      }
    }
    CHECK(v.lambda == expected);
    CHECK(replay_trace(v.trace) == expected);
  }
  CHECK_THROWS_AS(replay_trace({"#"}), std::invalid_argument);
  CHECK_THROWS_AS(replay_trace({"S(a,1,2)", "S(a,1,2)"}), std::invalid_argument);
  CHECK_THROWS_AS(replay_trace({"S(a,x,2)"}), std::invalid_argument);
  CHECK(replay_trace({}) == 0);
}

TEST_CASE("homomorphism evaluation") {
  const std::map<char, std::int64_t> values{{'t', 1}, {'s', -4}, {'u', 0}};
  CHECK(homomorphism_eval(values, "t") == 1);
  CHECK(homomorphism_eval(values, "") == 0);
  CHECK(homomorphism_eval(values, "t^3T") == 2);
  CHECK(homomorphism_eval(values, "tsuST") == 0);
  CHECK_THROWS_AS(homomorphism_eval(values, "x"), std::invalid_argument);
  std::mt19937_64 gen(17);
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_formal_word(gen);
    const auto b = random_formal_word(gen);
    CHECK(homomorphism_eval(values, a + b) == homomorphism_eval(values, a) + homomorphism_eval(values, b));
  }
}

TEST_CASE("integer walk laws") {
  const auto lazy = z_walk_hit_prob(kLazy, 400, 0);
  // S_400 + 400 is Binomial(800, 1/2).
  const double oracle = std::exp(std::lgamma(801.0) - 2 * std::lgamma(401.0) - 800 * std::log(2.0));
  CHECK(lazy.probability == doctest::Approx(oracle).epsilon(1e-10));
  CHECK(std::abs(lazy.probability - 0.0282) <= 0.0002);
  CHECK(std::abs(lazy.probability - 1.0 / std::sqrt(M_PI * 400)) < 1e-4);
  CHECK(lazy.c_lower == doctest::Approx(lazy.probability * 20.0));
  CHECK(z_walk_hit_prob(kLazy, 0, 0).probability == 1.0);
  CHECK(z_walk_hit_prob(kSimple, 7, 0).probability == 0.0);
  CHECK(z_walk_hit_prob(kSimple, 8, 0).probability == doctest::Approx(70.0 / 256.0));
  CHECK_THROWS_AS(z_walk_law(kSimple, 3, true), std::invalid_argument);
  CHECK_THROWS_AS(z_walk_law({{1, 0.5}, {0, 0.5}}, 3, true), std::invalid_argument);
  CHECK_NOTHROW(z_walk_law(kLazy, 3, true));
  CHECK_THROWS_AS(z_walk_law({{1, 0.5}}, 3), std::invalid_argument);
  CHECK_THROWS_AS(z_walk_law(kLazy, -1), std::invalid_argument);

  const IntegerLaw wide{{-3, 0.1}, {-1, 0.2}, {0, 0.4}, {1, 0.2}, {3, 0.1}};
  for (int n : {1, 5, 40, 200}) {
    const auto law = z_walk_law(wide, n, true);
    CHECK(std::abs(law.total() - 1.0) < 1e-12);
    for (std::int64_t k = 0; k <= 3 * n; ++k) CHECK(law.at(k) == doctest::Approx(law.at(-k)).epsilon(1e-12));
  }
  for (const auto& lw : {kLazy, wide}) {
    const double a = 400 * std::pow(z_walk_hit_prob(lw, 400, 0).probability, 2);
    const double b = 1600 * std::pow(z_walk_hit_prob(lw, 1600, 0).probability, 2);
    CHECK(std::abs(a - b) / b < 0.02);
  }
}

TEST_CASE("existence crossover") {
  CHECK(existence_crossover(1.0, 0.9, 0.1) == 40);
  CHECK(scan_crossover(1.0, 0.9, 0.1) == 40);
  CHECK(0.1 / std::sqrt(39.0) < std::pow(0.9, 39));
  CHECK(0.1 / std::sqrt(40.0) > std::pow(0.9, 40));
  CHECK(existence_crossover(1.0, 0.5, 1.0) == 1);
  CHECK(existence_crossover(1.0, 0.3, 2.0) == 1);
  CHECK_THROWS_AS(existence_crossover(1.0, 1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(existence_crossover(0.0, 0.5, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(existence_crossover(1.0, 0.5, -1.0), std::invalid_argument);

  std::int64_t prev = 0;
  for (double c = 0.5; c < 0.995; c += 0.01) {
    const auto n = existence_crossover(2.0, c, 0.05);
    CHECK(n >= prev);
    prev = n;
  }
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const double k = 0.1 + 10 * u(gen);
    const double c = 0.3 + 0.69 * u(gen);
    const double c0 = 0.01 + 2 * u(gen);
    const auto n = existence_crossover(k, c, c0);
    CHECK(n == scan_crossover(k, c, c0));
    const auto s = sustained_crossover(k, c, c0);
    CHECK(s >= n);
    for (std::int64_t m = s; m < s + 200; ++m) {
      CHECK(c0 / std::sqrt(static_cast<double>(m)) > k * std::pow(c, static_cast<double>(m)));
    }
    if (s > 1) CHECK_FALSE(c0 / std::sqrt(static_cast<double>(s - 1)) > k * std::pow(c, static_cast<double>(s - 1)));
  }
  // Holds at n = 1, fails in between, then holds for good.
  CHECK(existence_crossover(1.0, 0.999, 1.0005) == 1);
  CHECK(sustained_crossover(1.0, 0.999, 1.0005) > 1000);
}

TEST_CASE("genus thresholds") {
  const auto a = genus_threshold_check(3, 2);
  CHECK(a.hyperbolic);
  CHECK_FALSE(a.genus_exactly_g);
  for (int g = 1; g <= 5; ++g) {
    const auto b = genus_threshold_check(2 * g + 1, g);
    CHECK(b.hyperbolic);
    CHECK(b.genus_exactly_g);
    CHECK_FALSE(genus_threshold_check(2 * g, g).genus_exactly_g);
  }
  const auto z = genus_threshold_check(0, 2);
  CHECK_FALSE(z.hyperbolic);
  CHECK_FALSE(z.genus_exactly_g);
  CHECK_FALSE(genus_threshold_check(2, 1).hyperbolic);
  CHECK_THROWS_AS(genus_threshold_check(-1, 2), std::invalid_argument);
  CHECK_THROWS_AS(genus_threshold_check(3, 0), std::invalid_argument);
}
