#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hyperwalk {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Wilson score interval for a binomial proportion at z standard deviations.
/// With trials == 0 the interval is [0, 1].
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 3.0);
/// Same for non-integer (weighted) counts.
Interval wilson_interval(double successes, double trials, double z);

/// Least-squares fit of log p = log K + n log c.
struct ExpFit {
  double K = 0.0;
  double c = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
  /// First and last n of the window used.
  int n_first = 0;
  int n_last = 0;
};

/// Fits over the longest contiguous window of strictly positive p (ties
/// broken towards smaller n). Returns nullopt with fewer than two points.
std::optional<ExpFit> fit_exponential(const std::vector<int>& n, const std::vector<double>& p);

/// One row of an empirical probability curve.
struct DecayPoint {
  int n = 0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double p_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 1.0;
};

DecayPoint make_decay_point(int n, std::uint64_t successes, std::uint64_t trials, double z = 3.0);
/// Enumeration-mode row: p is exact, the interval is [p, p], and trials and
/// successes count paths.
DecayPoint make_exact_point(int n, double p, std::uint64_t successes, std::uint64_t paths);

/// Empirical decay curve with its fit. `exact` marks enumeration-mode
/// output, where p_hat is an exact probability and the interval collapses.
struct DecayReport {
  std::string name;
  std::vector<DecayPoint> points;
  std::optional<ExpFit> fit;
  /// Mean of (observed quantity)/n at the largest n, when meaningful.
  std::optional<double> drift;
  std::uint64_t seed = 0;
  bool exact = false;
  std::vector<std::string> notes;

  void refit();
  /// Columns n,trials,successes,p_hat,ci_lo,ci_hi.
  std::string to_csv() const;
};

/// Shortest round-trip decimal text for a double, used for all artifacts.
std::string format_double(double x);

}  // namespace hyperwalk
