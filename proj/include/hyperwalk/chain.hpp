#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hyperwalk/report.hpp"

namespace hyperwalk {

/// Birth-and-death-like chain on {0, 1, 2, ...}:
///   p(0,0) = 1 - eps, p(0,1) = eps,
///   p(i,j) = q^(i-j+1) for j <= i, p(i,i+1) = 1 - q - ... - q^(i+1)  (i > 0).
struct ChainParams {
  double eps = 0.5;
  double q = 0.2;
  /// Largest state represented.
  int truncation = 1001;
  /// Allows q in [1/4, 1/2) with the certificate withheld.
  bool exploratory = false;

  /// Throws std::invalid_argument unless eps in (0,1], q in (0,1/4)
  /// (or [1/4,1/2) when exploratory) and truncation >= 1.
  void validate() const;
};

double transition(const ChainParams& params, int i, int j);

/// p_i = 1 - q - q^2 - ... - q^(i+1).
double up_probability(const ChainParams& params, int i);

struct DistributionVector {
  std::vector<double> weights;
  int time = 0;
  /// |sum of weights - 1|
  double mass_error = 0.0;

  /// F(t) = sum of weights at states <= t; 1 beyond the support.
  double cdf(int t) const;
  /// Columns state,probability.
  std::string to_csv() const;
};

/// Exact law of the state after n steps from 0. Throws std::invalid_argument
/// if truncation < n and std::runtime_error if the mass drifts by more than
/// 1e-12.
DistributionVector n_step_distribution(const ChainParams& params, int n);

/// All laws for times 0..n (index = time).
std::vector<DistributionVector> n_step_distributions(const ChainParams& params, int n);

double cdf(const DistributionVector& d, int t);

/// True iff d_a is dominated by d_b: F_a(t) >= F_b(t) for every t.
bool dominates(const DistributionVector& d_a, const DistributionVector& d_b, double tol = 0.0);

/// t = max{1 - eps(1 - 2q), 4q}. Throws for q >= 1/4.
double spectral_radius_bound(const ChainParams& params);

/// Checks (Pf)(k) <= t f(k) + tol for f(k) = (2q)^k and 0 <= k <= kmax.
/// worst_margin is t - max ratio (Pf)(k)/f(k).
CheckReport check_superharmonic(const ChainParams& params, double t, int kmax, double tol = 1e-10);

/// (Pf)(k) / f(k) for f(k) = (2q)^k.
double superharmonic_ratio(const ChainParams& params, int k);

/// p^(n)(0,0)^(1/n).
double estimate_spectral_radius(const ChainParams& params, int n_max);

struct IrreducibilityConstants {
  int n = 1;
  double eps0 = 0.0;
};

/// N = 1 and eps0 = min{eps, q^2, 1 - q/(1-q)}; throws std::logic_error if
/// some transition between distinct neighbours i, j <= truncation is
/// smaller than eps0.
IrreducibilityConstants uniform_irreducibility_constants(const ChainParams& params);

struct TailBound {
  /// L n A^(L n) rho^n
  double value = 0.0;
  /// Largest L with L ln A + ln rho < 0 (infinite for A <= 1).
  double critical_l = 0.0;
};

TailBound tail_bound(double a, double rho, double l, int n);
TailBound tail_bound(const ChainParams& params, double a, double l, int n);

/// Observed transitions of an integer-valued process, keyed by the current
/// state. Weights are normally counts.
struct KernelTable {
  std::map<int, std::map<int, double>> weights;

  void add(int from, int to, double weight = 1.0);
  double visits(int from) const;
  void merge(const KernelTable& other);
};

struct DominationOptions {
  /// States with fewer visits are reported untested.
  double min_visits = 500.0;
  /// Wilson interval width in standard deviations; 0 compares point values.
  double sigma = 3.0;
};

/// Checks that the chain kernel at every tested state k is dominated by the
/// empirical kernel: the Wilson lower bound of the empirical F(l) must not
/// exceed the chain's F(l) for l <= k. worst_margin is the smallest
/// F_chain(l) - lower bound.
CheckReport check_kernel_domination(const KernelTable& kernels, const ChainParams& params,
                                    const DominationOptions& options = {});

}  // namespace hyperwalk
