#include "hyperwalk/stats.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hyperwalk {

Interval wilson_interval(double successes, double trials, double z) {
  if (trials <= 0.0) return {0.0, 1.0};
  if (successes < 0.0 || successes > trials) throw std::invalid_argument("successes out of range");
  const double p = successes / trials;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / trials;
  const double center = (p + z2 / (2.0 * trials)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  return wilson_interval(static_cast<double>(successes), static_cast<double>(trials), z);
}

std::optional<ExpFit> fit_exponential(const std::vector<int>& n, const std::vector<double>& p) {
  if (n.size() != p.size()) throw std::invalid_argument("fit_exponential: size mismatch");
  std::size_t best_start = 0;
  std::size_t best_len = 0;
  for (std::size_t i = 0; i < p.size();) {
    if (!(p[i] > 0.0)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < p.size() && p[j] > 0.0) ++j;
    if (j - i > best_len) {
      best_start = i;
      best_len = j - i;
    }
    i = j;
  }
  if (best_len < 2) return std::nullopt;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  const double m = static_cast<double>(best_len);
  for (std::size_t i = best_start; i < best_start + best_len; ++i) {
    const double x = n[i];
    const double y = std::log(p[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double vx = sxx - sx * sx / m;
  const double vy = syy - sy * sy / m;
  const double cxy = sxy - sx * sy / m;
  if (vx <= 0.0) return std::nullopt;
  const double slope = cxy / vx;
  const double intercept = (sy - slope * sx) / m;
  ExpFit fit;
  fit.K = std::exp(intercept);
  fit.c = std::exp(slope);
  fit.r_squared = vy > 0.0 ? (cxy * cxy) / (vx * vy) : 1.0;
  fit.points = best_len;
  fit.n_first = n[best_start];
  fit.n_last = n[best_start + best_len - 1];
  return fit;
}

DecayPoint make_decay_point(int n, std::uint64_t successes, std::uint64_t trials, double z) {
  DecayPoint pt;
  pt.n = n;
  pt.trials = trials;
  pt.successes = successes;
  pt.p_hat = trials > 0 ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
  const Interval ci = wilson_interval(successes, trials, z);
  pt.ci_lo = ci.lo;
  pt.ci_hi = ci.hi;
  return pt;
}

DecayPoint make_exact_point(int n, double p, std::uint64_t successes, std::uint64_t paths) {
  DecayPoint pt;
  pt.n = n;
  pt.trials = paths;
  pt.successes = successes;
  pt.p_hat = p;
  pt.ci_lo = p;
  pt.ci_hi = p;
  return pt;
}

void DecayReport::refit() {
  std::vector<int> ns;
  std::vector<double> ps;
  for (const auto& pt : points) {
    ns.push_back(pt.n);
    ps.push_back(pt.p_hat);
  }
  fit = fit_exponential(ns, ps);
}

std::string DecayReport::to_csv() const {
  std::ostringstream os;
  os << "n,trials,successes,p_hat,ci_lo,ci_hi\n";
  for (const auto& pt : points) {
    os << pt.n << ',' << pt.trials << ',' << pt.successes << ',' << format_double(pt.p_hat) << ','
       << format_double(pt.ci_lo) << ',' << format_double(pt.ci_hi) << '\n';
  }
  return os.str();
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace hyperwalk
