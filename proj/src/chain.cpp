#include "hyperwalk/chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "hyperwalk/stats.hpp"

namespace hyperwalk {

void ChainParams::validate() const {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("chain eps must lie in (0, 1]");
  const double q_max = exploratory ? 0.5 : 0.25;
  if (!(q > 0.0 && q < q_max)) {
    throw std::invalid_argument(exploratory ? "exploratory chain q must lie in (0, 1/2)"
                                            : "chain q must lie in (0, 1/4)");
  }
  if (truncation < 1) throw std::invalid_argument("chain truncation must be positive");
}

double up_probability(const ChainParams& params, int i) {
  double sum = 0.0;
  double power = 1.0;
  for (int m = 1; m <= i + 1; ++m) {
    power *= params.q;
    if (power == 0.0) break;
    sum += power;
  }
  return 1.0 - sum;
}

double transition(const ChainParams& params, int i, int j) {
  if (i < 0 || j < 0) throw std::invalid_argument("chain states are nonnegative");
  if (i == 0) {
    if (j == 0) return 1.0 - params.eps;
    if (j == 1) return params.eps;
    return 0.0;
  }
  if (j <= i) return std::pow(params.q, i - j + 1);
  if (j == i + 1) return up_probability(params, i);
  return 0.0;
}

double DistributionVector::cdf(int t) const {
  if (t < 0) return 0.0;
  if (static_cast<std::size_t>(t) + 1 >= weights.size()) return 1.0;
  double s = 0.0;
  for (int i = 0; i <= t; ++i) s += weights[static_cast<std::size_t>(i)];
  return s;
}

std::string DistributionVector::to_csv() const {
  std::ostringstream os;
  os << "state,probability\n";
  for (std::size_t i = 0; i < weights.size(); ++i) os << i << ',' << format_double(weights[i]) << '\n';
  return os.str();
}

double cdf(const DistributionVector& d, int t) { return d.cdf(t); }

namespace {

// up[i] = p_i for 1 <= i <= n.
std::vector<double> up_table(double q, int n) {
  std::vector<double> up(static_cast<std::size_t>(n) + 1, 0.0);
  double power = q;
  double sum = q;
  for (int i = 1; i <= n; ++i) {
    power *= q;
    sum += power;
    up[static_cast<std::size_t>(i)] = 1.0 - sum;
  }
  return up;
}

// One step of the forward equation in O(support).
std::vector<double> forward_step(const ChainParams& params, const std::vector<double>& up, const std::vector<double>& pi) {
  const double q = params.q;
  const std::size_t size = pi.size();
  std::vector<double> next(size + 1, 0.0);
  // g = sum_{i >= j, i >= 1} q^(i-j+1) pi_i, accumulated from the top.
  double g = 0.0;
  for (std::size_t j = size - 1; j >= 1; --j) {
    g = q * (pi[j] + g);
    next[j] += g;
    next[j + 1] += up[j] * pi[j];
  }
  next[0] = (1.0 - params.eps) * pi[0] + q * g;
  next[1] += params.eps * pi[0];
  return next;
}

}  // namespace

std::vector<DistributionVector> n_step_distributions(const ChainParams& params, int n) {
  params.validate();
  if (n < 0) throw std::invalid_argument("number of steps must be nonnegative");
  if (params.truncation < n) throw std::invalid_argument("chain truncation is smaller than the number of steps");
  const auto up = up_table(params.q, n);
  std::vector<DistributionVector> out;
  std::vector<double> pi{1.0};
  out.push_back({pi, 0, 0.0});
  for (int step = 1; step <= n; ++step) {
    pi = forward_step(params, up, pi);
    double mass = 0.0;
    for (double w : pi) mass += w;
    const double err = std::abs(mass - 1.0);
    if (err > 1e-12) throw std::runtime_error("chain mass drifted beyond 1e-12");
    out.push_back({pi, step, err});
  }
  return out;
}

DistributionVector n_step_distribution(const ChainParams& params, int n) {
  return std::move(n_step_distributions(params, n).back());
}

bool dominates(const DistributionVector& d_a, const DistributionVector& d_b, double tol) {
  const int top = static_cast<int>(std::max(d_a.weights.size(), d_b.weights.size()));
  double fa = 0.0;
  double fb = 0.0;
  for (int t = 0; t < top; ++t) {
    if (static_cast<std::size_t>(t) < d_a.weights.size()) fa += d_a.weights[static_cast<std::size_t>(t)];
    if (static_cast<std::size_t>(t) < d_b.weights.size()) fb += d_b.weights[static_cast<std::size_t>(t)];
    if (fa < fb - tol) return false;
  }
  return true;
}

double spectral_radius_bound(const ChainParams& params) {
  ChainParams strict = params;
  strict.exploratory = false;
  strict.validate();
  return std::max(1.0 - params.eps * (1.0 - 2.0 * params.q), 4.0 * params.q);
}

double superharmonic_ratio(const ChainParams& params, int k) {
  const double q = params.q;
  if (k == 0) return (1.0 - params.eps) + params.eps * 2.0 * q;
  // sum_{m=0}^{k} q 2^-m = q (2 - 2^-k)
  return q * (2.0 - std::ldexp(1.0, -k)) + 2.0 * q * up_probability(params, k);
}

CheckReport check_superharmonic(const ChainParams& params, double t, int kmax, double tol) {
  params.validate();
  if (params.exploratory && params.q >= 0.25) throw std::invalid_argument("certificate withheld for q >= 1/4");
  CheckReport report;
  const double q = params.q;
  report.hypothesis_met = 1;
  // Running pieces: s = q (2 - 2^-k), up = p_k.
  double s = q;
  double power = q;
  double sum = q;
  for (int k = 0; k <= kmax; ++k) {
    double ratio = 0.0;
    if (k == 0) {
      ratio = (1.0 - params.eps) + params.eps * 2.0 * q;
    } else {
      s = 0.5 * s + q;
      power *= q;
      sum += power;
      ratio = s + 2.0 * q * (1.0 - sum);
    }
    ++report.checked;
    report.assert_margin(t - ratio, tol, [&] {
      std::ostringstream os;
      os << "k=" << k << " ratio=" << ratio << " t=" << t;
      return os.str();
    });
  }
  report.finish();
  return report;
}

double estimate_spectral_radius(const ChainParams& params, int n_max) {
  params.validate();
  if (n_max < 1) throw std::invalid_argument("n_max must be positive");
  if (params.truncation < n_max) throw std::invalid_argument("chain truncation is smaller than n_max");
  // Same recurrence as forward_step on log weights: p^(n)(0,0) is far
  // below the smallest double long before n = 1000.
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  auto add = [](double a, double b) {
    if (a < b) std::swap(a, b);
    if (b == kNegInf) return a;
    return a + std::log1p(std::exp(b - a));
  };
  const auto up = up_table(params.q, n_max);
  const double lq = std::log(params.q);
  const double l_stay = params.eps < 1.0 ? std::log(1.0 - params.eps) : kNegInf;
  const double l_eps = std::log(params.eps);
  std::vector<double> pi{0.0};
  for (int step = 1; step <= n_max; ++step) {
    const std::size_t size = pi.size();
    std::vector<double> next(size + 1, kNegInf);
    double g = kNegInf;
    for (std::size_t j = size - 1; j >= 1; --j) {
      g = lq + add(pi[j], g);
      next[j] = add(next[j], g);
      next[j + 1] = add(next[j + 1], std::log(up[j]) + pi[j]);
    }
    next[0] = add(l_stay + pi[0], lq + g);
    next[1] = add(next[1], l_eps + pi[0]);
    pi = std::move(next);
  }
  return std::exp(pi[0] / n_max);
}

IrreducibilityConstants uniform_irreducibility_constants(const ChainParams& params) {
  params.validate();
  const double q = params.q;
  IrreducibilityConstants c;
  c.n = 1;
  c.eps0 = std::min({params.eps, q * q, 1.0 - q / (1.0 - q)});
  for (int i = 0; i <= params.truncation; ++i) {
    for (int j : {i - 1, i + 1}) {
      if (j < 0 || j > params.truncation) continue;
      if (transition(params, i, j) < c.eps0) {
        throw std::logic_error("transition " + std::to_string(i) + "->" + std::to_string(j) + " is below eps0");
      }
    }
  }
  return c;
}

TailBound tail_bound(double a, double rho, double l, int n) {
  if (!(a > 0.0)) throw std::invalid_argument("tail bound needs A > 0");
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("tail bound needs 0 < rho < 1");
  if (l < 0.0 || n < 0) throw std::invalid_argument("tail bound needs L >= 0 and n >= 0");
  TailBound b;
  b.critical_l = a > 1.0 ? std::log(1.0 / rho) / std::log(a) : std::numeric_limits<double>::infinity();
  const double ln_steps = l * n;
  b.value = ln_steps > 0.0 ? std::exp(std::log(ln_steps) + ln_steps * std::log(a) + n * std::log(rho)) : 0.0;
  return b;
}

TailBound tail_bound(const ChainParams& params, double a, double l, int n) {
  return tail_bound(a, spectral_radius_bound(params), l, n);
}

void KernelTable::add(int from, int to, double weight) { weights[from][to] += weight; }

double KernelTable::visits(int from) const {
  const auto it = weights.find(from);
  if (it == weights.end()) return 0.0;
  double s = 0.0;
  for (const auto& [to, w] : it->second) s += w;
  return s;
}

void KernelTable::merge(const KernelTable& other) {
  for (const auto& [from, row] : other.weights) {
    for (const auto& [to, w] : row) weights[from][to] += w;
  }
}

CheckReport check_kernel_domination(const KernelTable& kernels, const ChainParams& params,
                                    const DominationOptions& options) {
  params.validate();
  CheckReport report;
  std::size_t untested = 0;
  for (const auto& [k, row] : kernels.weights) {
    ++report.checked;
    double total = 0.0;
    for (const auto& [to, w] : row) total += w;
    if (total < options.min_visits) {
      ++untested;
      continue;
    }
    ++report.hypothesis_met;
    double below = 0.0;  // empirical weight at states <= l
    double chain_cdf = 0.0;
    auto it = row.begin();
    for (int l = 0; l <= k; ++l) {
      while (it != row.end() && it->first <= l) {
        below += it->second;
        ++it;
      }
      chain_cdf += transition(params, k, l);
      const double lower =
          options.sigma > 0.0 ? wilson_interval(below, total, options.sigma).lo : below / total;
      report.assert_margin(chain_cdf - lower, 1e-12, [&] {
        std::ostringstream os;
        os << "state " << k << " F_emp(" << l << ") lower=" << lower << " > F_chain=" << chain_cdf
           << " visits=" << total;
        return os.str();
      });
    }
  }
  if (untested > 0) {
    report.notes.push_back(std::to_string(untested) + " states untested (fewer than " +
                           format_double(options.min_visits) + " visits)");
    if (report.violations == 0) report.verdict = Verdict::ConditionalPass;
  }
  report.finish();
  return report;
}

}  // namespace hyperwalk
