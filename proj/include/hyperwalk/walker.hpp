#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hyperwalk/chain.hpp"
#include "hyperwalk/qconvex.hpp"
#include "hyperwalk/shadow.hpp"
#include "hyperwalk/space.hpp"
#include "hyperwalk/stats.hpp"
#include "hyperwalk/word.hpp"

namespace hyperwalk {

/// Finitely supported probability measure on a free group. The support is
/// kept sorted in shortlex order with duplicates aggregated.
class StepDistribution {
 public:
  /// Throws std::invalid_argument for empty support, non-positive weights
  /// or a total differing from 1 by more than 1e-9.
  static StepDistribution make(std::vector<std::pair<Word, double>> entries);
  static StepDistribution uniform(const std::vector<Word>& words);
  /// Uniform on the generators of F_rank and their inverses.
  static StepDistribution simple_random_walk(int rank);
  static StepDistribution point_mass(const Word& w);

  const std::vector<std::pair<Word, double>>& support() const { return support_; }
  std::size_t size() const { return support_.size(); }
  const Word& element(std::size_t i) const { return support_[i].first; }
  double weight(std::size_t i) const { return support_[i].second; }
  /// mu(w), zero off the support.
  double mass(const Word& w) const;
  double total_mass() const;
  std::size_t max_word_length() const;

  /// Index of a support element drawn with one uniform variate.
  std::size_t sample_index(std::mt19937_64& gen) const;

  friend bool operator==(const StepDistribution& a, const StepDistribution& b) { return a.support_ == b.support_; }

 private:
  std::vector<std::pair<Word, double>> support_;
  std::vector<double> cumulative_;
};

struct SemigroupCheck {
  bool ok = false;
  int bound = 0;
  /// Support elements whose inverse is not a product of <= bound support
  /// elements.
  std::vector<Word> unreachable;
};

/// Checks that every support element's inverse is a product of at most
/// `bound` support elements. Throws std::invalid_argument when the search
/// would visit more than max_products elements.
SemigroupCheck check_semigroup_support(const StepDistribution& mu, int bound = 8,
                                       std::size_t max_products = 2'000'000);

/// Validates the support against the space; in strict mode a failed
/// semigroup check is an std::invalid_argument, otherwise it is returned.
SemigroupCheck validate_step_distribution(const ModelSpace& space, const StepDistribution& mu, bool strict,
                                          int bound = 8);

struct SamplePath {
  std::uint64_t seed = 0;
  std::vector<Word> increments;
  /// locations[0] is the identity; locations[k] = locations[k-1] increments[k-1].
  std::vector<Word> locations;
};

SamplePath sample_path(const StepDistribution& mu, int n, std::uint64_t seed);

/// mu^(g) = mu(g^-1).
StepDistribution reflect(const StepDistribution& mu);

/// N-fold convolution power. Throws std::length_error if an intermediate
/// support exceeds `cap` elements.
StepDistribution iterate_measure(const StepDistribution& mu, int n, std::size_t cap = 1'000'000);

/// floor(d(D, x) / R).
int phi_R(const ModelSpace& space, const QuasiconvexSet& d, const Point& x, double r);
/// floor(dist / R), adjusted so that R phi <= dist < R (phi + 1) holds exactly.
int phi_from_distance(double dist, double r);

/// Shared estimator settings. In enumeration mode all |supp|^n paths are
/// visited with their exact probabilities instead of sampling; it requires
/// n <= 8 and |supp| <= 4.
struct MonteCarloOptions {
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  bool enumerate = false;
  double z = 3.0;
};

inline constexpr int kMaxEnumerationSteps = 8;
inline constexpr std::size_t kMaxEnumerationSupport = 4;

/// P(d(x0, w_n x0) <= L n) for n in n_list; drift is E d(x0, w_n x0) / n at
/// the largest n.
DecayReport estimate_linear_progress(const StepDistribution& mu, const ModelSpace& space, const Point& x0,
                                     double l, const std::vector<int>& n_list, const MonteCarloOptions& opts);

/// P(w_n x0 in S) for n in n_list.
DecayReport estimate_shadow_decay(const StepDistribution& mu, const ModelSpace& space, const Point& x0,
                                  const ShadowSpec& shadow, const std::vector<int>& n_list,
                                  const MonteCarloOptions& opts);

/// P(w_n x0 in S_x0(y, R)) at a fixed n for several targets y, reported
/// against d(x0, y) - R (rounded to the nearest integer in the `n` column)
/// and fitted to K c^(d - R).
DecayReport estimate_shadow_rate(const StepDistribution& mu, const ModelSpace& space, const Point& x0,
                                 const std::vector<Point>& targets, double r, int n,
                                 const MonteCarloOptions& opts);

/// Law of phi_R(g w_n x0) given phi_R(g x0) = t >= 1.
struct BacktrackReport {
  int t = 0;
  int n = 0;
  bool exact = false;
  std::uint64_t trials = 0;
  /// state -> probability (exact mode) or relative frequency.
  std::map<int, double> distribution;
  /// Row r - 1 holds P(phi <= t + 1 - r) for r = 1..t+1, stored with n = r.
  std::vector<DecayPoint> exceedance;
  /// max over r of p_hat^(1/r).
  double q_hat = 0.0;
  /// max over feasible r of ci_hi^(1/r); r is feasible when a drop of r - 1
  /// levels is reachable in n steps.
  double q_upper = 0.0;
  int max_feasible_r = 0;
};

/// Throws std::invalid_argument if phi_R(g x0) = 0. The walk is run from x0
/// against g^-1 D.
BacktrackReport estimate_backtrack(const StepDistribution& mu, const ModelSpace& space, const Point& x0,
                                   const QuasiconvexSet& d, const Word& g, double r, int n,
                                   const MonteCarloOptions& opts);

struct EscapeReport {
  /// P(phi_R(g w_n x0) >= 1) per n.
  DecayReport escaped;
  /// P(phi_R(g w_n x0) = 1) per n.
  DecayReport first_level;
  /// max over n of the lower confidence bound of `escaped` (the exact value
  /// in enumeration mode).
  double eps_hat = 0.0;
};

/// Throws std::invalid_argument unless phi_R(g x0) = 0.
EscapeReport estimate_escape(const StepDistribution& mu, const ModelSpace& space, const Point& x0,
                             const QuasiconvexSet& d, const Word& g, double r, const std::vector<int>& n_list,
                             const MonteCarloOptions& opts);

/// Observation of X_k = phi_R(w_{kN} x0) for k = 0..steps alongside the
/// distance curve.
struct KernelSpec {
  double r = 1.0;
  int n = 1;
  int steps = 0;
  /// Chain times at which the law of X_k is recorded.
  std::vector<int> record_times;
};

/// Kernels split by the sign of the previous transition of X.
struct KernelEstimate {
  KernelTable all;
  /// Transitions whose previous step went up.
  KernelTable after_up;
  /// Transitions whose previous step stayed or went down (or the first step).
  KernelTable after_other;
  /// max over states with >= 500 visits in both tables of
  /// |P(stay or down | up) - P(stay or down | other)|.
  double history_gap = 0.0;
};

KernelEstimate empirical_kernels(std::span<const std::vector<int>> runs);

struct DistanceReport {
  DecayReport curve;
  KernelEstimate kernels;
  /// chain time -> (state -> count or probability)
  std::map<int, std::map<int, double>> state_laws;
  bool degenerate = false;
};

/// P(d(D, w_n x0) <= L n) for n in n_list, plus the phi-process kernels
/// when kernel.steps > 0.
DistanceReport estimate_distance_from_D(const StepDistribution& mu, const ModelSpace& space, const Point& x0,
                                        const QuasiconvexSet& d, double l, const std::vector<int>& n_list,
                                        const MonteCarloOptions& opts, const KernelSpec& kernel = {});

struct SplittingReport {
  /// P(d(D, w_n Dp) <= L n)
  DecayReport curve;
  /// P(d(D, w_m x0) <= L n / 2), m = floor(n/2)
  DecayReport initial_segment;
  /// P(d(w_m x0, w_n Dp) <= L (n/2 + 1))
  DecayReport final_segment;
  /// P((x0 . w_n x0)_{w_m x0} >= L n / 4)
  DecayReport gromov;
  /// Rows where some event holds although none of the three diagnostics
  /// does would contradict the union bound; counted here per n.
  std::vector<std::uint64_t> uncovered;
};

/// Throws std::invalid_argument unless x0 lies in D and in Dp.
SplittingReport estimate_splitting_distance(const StepDistribution& mu, const ModelSpace& space, const Point& x0,
                                            const QuasiconvexSet& d, const QuasiconvexSet& dp, double l,
                                            const std::vector<int>& n_list, const MonteCarloOptions& opts);

/// Grid search for (R, N) with a certified escape probability and
/// backtracking constant.
struct CalibrationOptions {
  int r_min = 1;
  int r_max = 8;
  int n_min = 1;
  int n_max = 32;
  std::uint64_t trials = 20000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  double z = 3.0;
  double q_limit = 0.25;
};

struct CalibrationCell {
  int r = 0;
  int n = 0;
  double eps_hat = 0.0;
  double q_hat = 0.0;
  bool passed = false;
  /// True when a start already exceeded q_limit and later starts were skipped.
  bool aborted = false;
};

struct CalibrationResult {
  bool found = false;
  int r = 0;
  int n = 0;
  double eps_hat = 0.0;
  double q_hat = 0.0;
  std::vector<CalibrationCell> cells;
  std::string to_csv() const;
};

/// Scans R-major over the grid. For each cell the walk is run N steps (one
/// step of mu_N) from starts ray^k x0: eps_hat is the minimum lower
/// bound of P(phi >= 1) over starts with phi = 0, and q_hat the maximum of
/// BacktrackReport::q_upper over the lowest starts of bands
/// t = 1..ceil(N s / R) + 2 (s the largest step displacement). The first
/// cell with eps_hat > 0 and q_hat < q_limit is returned.
CalibrationResult calibrate(const StepDistribution& mu, const ModelSpace& space, const Point& x0,
                            const QuasiconvexSet& d, const Word& ray, const CalibrationOptions& opts);

}  // namespace hyperwalk
