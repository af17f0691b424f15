#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hyperwalk {

/// A knot described only by h = Delta''(1)/2 of its Alexander polynomial.
struct SurgeryKnot {
  std::string name;
  std::int64_t half_second_derivative = 0;

  static SurgeryKnot trefoil() { return {"trefoil", 1}; }
};

/// Casson invariant of an integral homology sphere together with the
/// construction that produced it, as a postfix trace: tokens
/// "S(name,h,m)" push a surgery value, "#" adds the top two values and "~"
/// negates the top value.
struct HomologySphereValue {
  std::int64_t lambda = 0;
  std::vector<std::string> trace;
};

/// lambda(S^3 + 1/m K) = m h. The global sign is a convention.
HomologySphereValue casson_surgery(const SurgeryKnot& k, std::int64_t m);
HomologySphereValue connected_sum(const HomologySphereValue& a, const HomologySphereValue& b);
HomologySphereValue reverse_orientation(const HomologySphereValue& a);
/// Recomputes lambda from a trace. Throws std::invalid_argument on a
/// malformed trace.
std::int64_t replay_trace(const std::vector<std::string>& trace);
/// S^3, the empty construction.
HomologySphereValue three_sphere();

/// Sum of generator values over a formal word such as "t^3T" (lowercase
/// letters are generators, uppercase their inverses). Throws
/// std::invalid_argument for letters without a value.
std::int64_t homomorphism_eval(const std::map<char, std::int64_t>& generator_values, std::string_view word);

/// Finitely supported step law on the integers.
using IntegerLaw = std::vector<std::pair<std::int64_t, double>>;

/// Law of S_n as offsets from n * (smallest step): index i holds
/// P(S_n = n * min_step + i).
struct IntegerWalkLaw {
  std::int64_t offset = 0;
  std::vector<double> weights;
  double at(std::int64_t k) const;
  double total() const;
};

/// Throws std::invalid_argument for an empty support, non-positive weights
/// or a total off 1 by more than 1e-9; in strict mode also unless the law is
/// symmetric and the gcd of support differences is 1.
void validate_integer_law(const IntegerLaw& law, bool strict);

IntegerWalkLaw z_walk_law(const IntegerLaw& law, int n, bool strict = false);

struct HitProbability {
  double probability = 0.0;
  /// Largest c with c / sqrt(n) <= probability (probability itself at n = 0).
  double c_lower = 0.0;
};

/// P(S_n = k) by exact convolution.
HitProbability z_walk_hit_prob(const IntegerLaw& law, int n, std::int64_t k, bool strict = false);

/// Least n >= 1 with c0 / sqrt(n) > K c^n. Requires K > 0, 0 < c < 1, c0 > 0.
std::int64_t existence_crossover(double k, double c, double c0);
/// Least N >= 1 such that c0 / sqrt(n) > K c^n for every n >= N.
std::int64_t sustained_crossover(double k, double c, double c0);

struct GenusThreshold {
  /// Splitting distance > 2.
  bool hyperbolic = false;
  /// Splitting distance > 2g.
  bool genus_exactly_g = false;
};

GenusThreshold genus_threshold_check(std::int64_t splitting_distance, std::int64_t g);

}  // namespace hyperwalk
