// Acceptance suite: one PASS/FAIL line per criterion.
//
// Usage: acceptance [--known-failures 8,...] [--workers N]
// Exit status is nonzero when a criterion outside the known-failure list
// fails. Known failures are still printed as FAIL.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hyperwalk/casson.hpp"
#include "hyperwalk/chain.hpp"
#include "hyperwalk/coarse_checks.hpp"
#include "hyperwalk/experiment.hpp"
#include "hyperwalk/qconvex.hpp"
#include "hyperwalk/rng.hpp"
#include "hyperwalk/sampling.hpp"
#include "hyperwalk/shadow.hpp"
#include "hyperwalk/walker.hpp"

using namespace hyperwalk;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

void require(Outcome& o, bool ok, const std::string& what) {
  if (!ok) {
    o.pass = false;
    o.detail += (o.detail.empty() ? "" : "; ") + what;
  }
}

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

const double kQGrid[] = {0.01, 0.05, 0.10, 0.15, 0.20, 0.24};
const double kEpsGrid[] = {0.1, 0.5, 0.9};

ChainParams grid_params(double q, double eps) {
  ChainParams p;
  p.q = q;
  p.eps = eps;
  p.truncation = 1001;
  return p;
}

// ---- 1-4: chain ----

Outcome chain_certificate() {
  Outcome o;
  double worst_time = 0.0;
  for (double q : kQGrid) {
    for (double eps : kEpsGrid) {
      const auto p = grid_params(q, eps);
      const double t = std::max(1.0 - eps * (1.0 - 2.0 * q), 4.0 * q);
      const auto t0 = Clock::now();
      const auto rep = check_superharmonic(p, t, 10000, 1e-10);
      const double s = seconds_since(t0);
      worst_time = std::max(worst_time, s);
      require(o, rep.verdict == Verdict::Pass && rep.violations == 0,
              "q=" + num(q) + " eps=" + num(eps) + ": " + rep.summary());
      require(o, s < 1.0, "q=" + num(q) + " eps=" + num(eps) + " took " + num(s) + " s");
    }
  }
  if (o.pass) o.detail = "18 cells pass at kmax=1e4; slowest " + num(worst_time) + " s";
  return o;
}

Outcome spectral_estimate() {
  Outcome o;
  double worst_gap = -1.0;
  double worst_time = 0.0;
  for (double q : kQGrid) {
    for (double eps : kEpsGrid) {
      const auto p = grid_params(q, eps);
      const auto t0 = Clock::now();
      const double est = estimate_spectral_radius(p, 400);
      const double s = seconds_since(t0);
      const double bound = std::max(1.0 - eps * (1.0 - 2.0 * q), 4.0 * q);
      worst_gap = std::max(worst_gap, est - bound);
      worst_time = std::max(worst_time, s);
      require(o, est <= bound + 0.02, "q=" + num(q) + " eps=" + num(eps) + ": estimate " + num(est) + " > bound " +
                                          num(bound) + " + 0.02");
      require(o, s < 5.0, "q=" + num(q) + " eps=" + num(eps) + " took " + num(s) + " s");
    }
  }
  if (o.pass) o.detail = "max(estimate - bound) = " + num(worst_gap) + "; slowest " + num(worst_time) + " s";
  return o;
}

Outcome exact_distribution() {
  Outcome o;
  ChainParams p;
  p.eps = 0.5;
  p.q = 0.2;
  p.truncation = 1001;
  const auto d2 = n_step_distribution(p, 2);
  const double expected[] = {0.27, 0.35, 0.38};
  for (int i = 0; i < 3; ++i) {
    require(o, std::abs(d2.weights[static_cast<std::size_t>(i)] - expected[i]) <= 1e-12,
            "P(X_2=" + std::to_string(i) + ") = " + num(d2.weights[static_cast<std::size_t>(i)]));
  }
  double worst = 0.0;
  for (const auto& d : n_step_distributions(p, 1000)) worst = std::max(worst, d.mass_error);
  require(o, worst <= 1e-12, "mass error " + num(worst));
  if (o.pass) o.detail = "(0.27, 0.35, 0.38) exact to 1e-12; max mass error through n=1000 = " + num(worst);
  return o;
}

Outcome irreducibility() {
  Outcome o;
  std::size_t pairs = 0;
  for (double q : kQGrid) {
    for (double eps : kEpsGrid) {
      const auto p = grid_params(q, eps);
      const double eps0 = std::min({eps, q * q, 1.0 - q / (1.0 - q)});
      for (int i = 0; i <= 1000; ++i) {
        for (int j : {i - 1, i + 1}) {
          if (j < 0 || j > 1000) continue;
          ++pairs;
          const double pij = transition(p, i, j);
          if (!(pij >= eps0)) {
            require(o, false, "q=" + num(q) + " eps=" + num(eps) + " p(" + std::to_string(i) + "," +
                                  std::to_string(j) + ")=" + num(pij) + " < " + num(eps0));
          }
        }
      }
      const auto c = uniform_irreducibility_constants(p);
      require(o, c.n == 1 && c.eps0 == eps0, "constants differ at q=" + num(q) + " eps=" + num(eps));
    }
  }
  if (o.pass) o.detail = std::to_string(pairs) + " neighbour transitions above min{eps, q^2, 1-q/(1-q)}";
  return o;
}

// ---- 5 and 11: pipeline ----

ExperimentConfig pipeline_config(unsigned workers) {
  auto cfg = build_config(std::nullopt, {{"kind", "pipeline"}, {"trials", "100000"}, {"seed", "1"}});
  cfg.workers = workers;
  return cfg;
}

Outcome domination(const PipelineResult& r, double secs) {
  Outcome o;
  require(o, r.calibration.found, "calibration failed");
  require(o, r.kernel_check.violations == 0 && r.kernel_check.hypothesis_met > 0,
          "kernel domination: " + r.kernel_check.summary());
  require(o, r.cdf.size() == 3, "CDF comparison missing");
  for (const auto& c : r.cdf) {
    require(o, c.passed, "CDF at n=" + std::to_string(c.n) + " exceeds by " + num(c.worst_excess));
  }
  require(o, secs < 300.0, "runtime " + num(secs) + " s");
  if (o.pass) {
    o.detail = "R=" + std::to_string(r.calibration.r) + " N=" + std::to_string(r.calibration.n) +
               " eps=" + num(r.chain.eps) + " q=" + num(r.chain.q) + "; " +
               std::to_string(r.kernel_check.hypothesis_met) + " states tested, worst margin " +
               num(r.kernel_check.worst_margin) + "; CDF n=16,32,64 pass; " + num(secs) + " s";
  }
  return o;
}

std::string artifact_bytes(const ExperimentConfig& cfg, const RunArtifacts& a) {
  std::string s = make_manifest(cfg, a).dump(2) + "\n" + a.summary;
  for (const auto& [name, body] : a.files) s += "\n--" + name + "\n" + body;
  return s;
}

Outcome reproducibility(const PipelineResult& first, unsigned workers) {
  Outcome o;
  const auto cfg1 = pipeline_config(1);
  const auto again = run_pipeline(cfg1);
  require(o, artifact_bytes(cfg1, first.artifacts) == artifact_bytes(cfg1, again.artifacts),
          "same seed gave different artifacts");
  const unsigned other = workers > 1 ? workers : 3;
  const auto cfgw = pipeline_config(other);
  const auto par = run_pipeline(cfgw);
  require(o, first.artifacts.files == par.artifacts.files, "CSV differs with " + std::to_string(other) + " workers");
  require(o, artifact_bytes(cfg1, first.artifacts) == artifact_bytes(cfgw, par.artifacts),
          "manifest differs with " + std::to_string(other) + " workers");
  if (o.pass) {
    o.detail = std::to_string(first.artifacts.files.size() + 2) + " artifacts byte-identical across two runs and " +
               "1 vs " + std::to_string(other) + " workers";
  }
  return o;
}

// ---- 6: enumeration against a brute-force oracle ----

struct Path {
  std::vector<Word> locations;
  double weight = 1.0;
};

void all_paths(const StepDistribution& mu, int n, Path& cur, const std::function<void(const Path&)>& visit) {
  if (static_cast<int>(cur.locations.size()) == n + 1) {
    visit(cur);
    return;
  }
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double saved = cur.weight;
    cur.locations.push_back(cur.locations.back() * mu.element(i));
    cur.weight *= mu.weight(i);
    all_paths(mu, n, cur, visit);
    cur.locations.pop_back();
    cur.weight = saved;
  }
}

// Exact probability of an event of the path of length n.
double oracle(const StepDistribution& mu, int n, const std::function<bool(const std::vector<Word>&)>& event) {
  Path p;
  p.locations.push_back(Word{});
  double total = 0.0;
  all_paths(mu, n, p, [&](const Path& path) {
    if (event(path.locations)) total += path.weight;
  });
  return total;
}

bool le(double v, double b) { return v <= b + 1e-9 * std::max(1.0, std::abs(b)); }

class EnumerationCheck {
 public:
  explicit EnumerationCheck(Outcome& o) : o_(o) {}
  void expect(const std::string& what, double got, double exact) {
    ++compared_;
    if (got != exact) require(o_, false, what + ": " + num(got) + " vs exact " + num(exact));
  }
  std::size_t compared() const { return compared_; }

 private:
  Outcome& o_;
  std::size_t compared_ = 0;
};

Outcome enumeration_equivalence() {
  Outcome o;
  EnumerationCheck check(o);
  const auto space = ModelSpace::free_group_tree(2);
  const Point x0 = space.basepoint();
  const auto W = [](const char* s) { return Word::parse(s, 2); };
  const StepDistribution measures[] = {
      StepDistribution::simple_random_walk(2),
      StepDistribution::make({{W("a"), 0.5}, {W("A"), 0.25}, {W("b"), 0.125}, {W("B"), 0.125}}),
      StepDistribution::make({{W("ab"), 0.5}, {W("B"), 0.25}, {W("A"), 0.25}})};
  MonteCarloOptions opts;
  opts.enumerate = true;
  const std::vector<int> n_list{0, 1, 2, 3, 4, 5, 6, 7, 8};
  const auto d = QuasiconvexSet::axis(space, W("a"));
  const auto dp = QuasiconvexSet::axis(space, W("b"));
  const auto d_far = QuasiconvexSet::axis(space, W("b"), W("aa"));

  int mi = 0;
  for (const auto& mu : measures) {
    const std::string tag = "mu" + std::to_string(mi++) + " ";
    const double l = 0.5;

    const auto lp = estimate_linear_progress(mu, space, x0, l, n_list, opts);
    for (const auto& pt : lp.points) {
      check.expect(tag + "linear progress n=" + std::to_string(pt.n), pt.p_hat,
                   oracle(mu, pt.n, [&](const auto& w) { return le(static_cast<double>(w.back().length()), l * pt.n); }));
    }

    const ShadowSpec shadow{x0, Point{W("ab")}, 1.0};
    const auto sd = estimate_shadow_decay(mu, space, x0, shadow, n_list, opts);
    for (const auto& pt : sd.points) {
      check.expect(tag + "shadow decay n=" + std::to_string(pt.n), pt.p_hat,
                   oracle(mu, pt.n, [&](const auto& w) { return in_shadow(space, shadow, Point{w.back()}); }));
    }

    const std::vector<Point> targets{Point{W("a")}, Point{W("ab")}, Point{W("abA")}};
    const auto sr = estimate_shadow_rate(mu, space, x0, targets, 0.0, 6, opts);
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const ShadowSpec s{x0, targets[i], 0.0};
      check.expect(tag + "shadow rate target " + std::to_string(i), sr.points[i].p_hat,
                   oracle(mu, 6, [&](const auto& w) { return in_shadow(space, s, Point{w.back()}); }));
    }

    const auto dist = estimate_distance_from_D(mu, space, x0, d_far, l, n_list, opts);
    for (const auto& pt : dist.curve.points) {
      check.expect(tag + "distance from D n=" + std::to_string(pt.n), pt.p_hat, oracle(mu, pt.n, [&](const auto& w) {
                     return le(distance_to_set(space, d_far, Point{w.back()}), l * pt.n);
                   }));
    }

    const double r = 2.0;
    const Word g_escape = W("b");
    const auto phi = [&](const Word& g, const Word& w) {
      return phi_from_distance(distance_to_set(space, d, Point{g * w}), r);
    };
    const auto esc = estimate_escape(mu, space, x0, d, g_escape, r, {1, 2, 4, 8}, opts);
    for (const auto& pt : esc.escaped.points) {
      check.expect(tag + "escape n=" + std::to_string(pt.n), pt.p_hat,
                   oracle(mu, pt.n, [&](const auto& w) { return phi(g_escape, w.back()) >= 1; }));
    }
    for (const auto& pt : esc.first_level.points) {
      check.expect(tag + "escape first level n=" + std::to_string(pt.n), pt.p_hat,
                   oracle(mu, pt.n, [&](const auto& w) { return phi(g_escape, w.back()) == 1; }));
    }

    const Word g_back = W("b^5");
    const int nb = 6;
    const auto bt = estimate_backtrack(mu, space, x0, d, g_back, r, nb, opts);
    for (const auto& [state, p] : bt.distribution) {
      check.expect(tag + "backtrack law state " + std::to_string(state), p,
                   oracle(mu, nb, [&](const auto& w) { return phi(g_back, w.back()) == state; }));
    }
    for (const auto& pt : bt.exceedance) {
      const int level = bt.t + 1 - pt.n;
      check.expect(tag + "backtrack exceedance r=" + std::to_string(pt.n), pt.p_hat,
                   oracle(mu, nb, [&](const auto& w) { return phi(g_back, w.back()) <= level; }));
    }

    const std::vector<int> even{2, 4, 6, 8};
    const auto sp = estimate_splitting_distance(mu, space, x0, d, dp, l, even, opts);
    for (std::size_t i = 0; i < even.size(); ++i) {
      const int n = even[i];
      const auto um = static_cast<std::size_t>(n / 2);
      const auto un = static_cast<std::size_t>(n);
      const auto moved = [&](const std::vector<Word>& w) { return dp.translated(space, w[un]); };
      check.expect(tag + "splitting n=" + std::to_string(n), sp.curve.points[i].p_hat,
                   oracle(mu, n, [&](const auto& w) { return le(set_distance(space, d, moved(w)), l * n); }));
      check.expect(tag + "initial segment n=" + std::to_string(n), sp.initial_segment.points[i].p_hat,
                   oracle(mu, n, [&](const auto& w) { return le(distance_to_set(space, d, Point{w[um]}), l * n / 2.0); }));
      check.expect(tag + "final segment n=" + std::to_string(n), sp.final_segment.points[i].p_hat,
                   oracle(mu, n, [&](const auto& w) {
                     return le(distance_to_set(space, moved(w), Point{w[um]}), l * (n / 2.0 + 1.0));
                   }));
      check.expect(tag + "gromov n=" + std::to_string(n), sp.gromov.points[i].p_hat, oracle(mu, n, [&](const auto& w) {
                     return gromov_product(space, Point{w[um]}, x0, Point{w[un]}) >= l * n / 4.0 - 1e-9;
                   }));
    }
  }
  if (o.pass) {
    o.detail = std::to_string(check.compared()) +
               " enumerated probabilities (7 estimators, 3 step laws, n <= 8) equal the brute-force values exactly";
  }
  return o;
}

// ---- 7, 8: walks ----

Outcome shadow_decay(unsigned workers) {
  Outcome o;
  const auto space = ModelSpace::free_group_tree(2);
  const auto mu = StepDistribution::simple_random_walk(2);
  std::vector<Point> targets;
  for (int d = 2; d <= 8; ++d) {
    Word w;
    for (int i = 0; i < d; ++i) w.append(static_cast<Letter>(1 + i % 2));
    targets.emplace_back(w);
  }
  MonteCarloOptions opts;
  opts.trials = 100000;
  opts.seed = 7;
  opts.workers = workers;
  const auto t0 = Clock::now();
  const auto rep = estimate_shadow_rate(mu, space, space.basepoint(), targets, 0.0, 30, opts);
  const double secs = seconds_since(t0);
  double worst_ratio = 0.0;
  for (const auto& pt : rep.points) {
    // Reaching the shadow at time n requires passing through the target:
    // probability at most 3^-d.
    const double bound = std::pow(3.0, -pt.n);
    const double slack = 3.0 * std::sqrt(bound * (1.0 - bound) / static_cast<double>(opts.trials));
    worst_ratio = std::max(worst_ratio, pt.p_hat / bound);
    require(o, pt.p_hat <= bound + slack,
            "d=" + std::to_string(pt.n) + ": " + num(pt.p_hat) + " > " + num(bound) + " + " + num(slack));
  }
  require(o, rep.fit.has_value(), "no fit");
  require(o, secs < 120.0, "runtime " + num(secs) + " s");
  if (o.pass) {
    o.detail = "fitted c_S=" + num(rep.fit->c) + " (3^-1 = 0.333); max P/3^-d = " + num(worst_ratio) + "; " +
               num(secs) + " s";
  }
  return o;
}

Outcome linear_progress(unsigned workers) {
  Outcome o;
  const auto space = ModelSpace::free_group_tree(2);
  const auto mu = StepDistribution::simple_random_walk(2);
  MonteCarloOptions opts;
  opts.trials = 100000;
  opts.seed = 8;
  opts.workers = workers;
  std::vector<int> n_list;
  for (int n = 20; n <= 100; n += 8) n_list.push_back(n);
  const auto rep = estimate_linear_progress(mu, space, space.basepoint(), 0.25, n_list, opts);
  const auto& last = rep.points.back();
  std::ostringstream d;
  d << "P(d <= n/4) at n=100: " << num(last.p_hat) << " [" << num(last.ci_lo) << ", " << num(last.ci_hi)
    << "], exact 1.7427e-3";
  require(o, last.p_hat <= 1e-4, "tail " + num(last.p_hat) + " > 1e-4");
  const bool fit_ok = rep.fit && std::log(rep.fit->c) < 0.0 && rep.fit->r_squared >= 0.95;
  require(o, fit_ok, "fit slope/R^2 requirement not met");
  if (rep.fit) {
    d << "; fit slope " << num(std::log(rep.fit->c)) << " R^2 " << num(rep.fit->r_squared) << " over n="
      << rep.fit->n_first << ".." << rep.fit->n_last << (fit_ok ? " (pass)" : " (fail)");
  }
  o.detail = o.pass ? d.str() : o.detail + "; " + d.str();
  return o;
}

// ---- 9: coarse geometry ----

Outcome coarse_geometry() {
  Outcome o;
  const auto tree = ModelSpace::free_group_tree(2);
  const auto W = [](const char* s) { return Word::parse(s, 2); };
  const auto ball = tree_ball(2, Word{}, 6);
  const CoarseConstants tree_c{1, 0, 0};
  CheckReport one, two;
  const auto d = QuasiconvexSet::axis(tree, W("a"));
  for (const Word& y : ball) {
    for (const Word& z : ball) one.absorb(check_one_quasiconvex(tree, d, y, z, tree_c));
  }
  const auto e = QuasiconvexSet::axis(tree, W("a"), W("bbb"));
  for (const Word& y : ball) two.absorb(check_two_quasiconvex(tree, d, e, y, tree_c));
  one.finish();
  two.finish();
  require(o, one.violations == 0 && one.hypothesis_met > 0, "tree one-set: " + one.summary());
  require(o, two.violations == 0 && two.hypothesis_met > 0, "tree two-set: " + two.summary());

  const auto plane = ModelSpace::half_plane(1.0);
  const CoarseConstants plane_c{4, 8, 4};
  SampleSpec spec;
  spec.count = 1000;
  spec.seed = 9;
  const auto pts = sample_points(plane, spec);
  const auto line = QuasiconvexSet::geodesic_line(plane, -1.0, 1.0);
  const double big = std::exp(10.0);
  const auto outer = QuasiconvexSet::geodesic_line(plane, -big, big);
  CheckReport pone, ptwo;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    pone.absorb(check_one_quasiconvex(plane, line, pts[i], pts[(i + 1) % pts.size()], plane_c, 3.0));
  }
  auto gen = trial_rng(9, 1);
  for (int i = 0; i < 1000; ++i) {
    const double rad = std::exp(4.0 + 2.0 * uniform01(gen));
    const double theta = 0.05 + uniform01(gen) * (3.141592653589793 - 0.1);
    ptwo.absorb(check_two_quasiconvex(plane, line, outer, HPoint{rad * std::cos(theta), rad * std::sin(theta)},
                                      plane_c, 3.0));
  }
  pone.finish();
  ptwo.finish();
  require(o, pone.violations == 0 && pone.hypothesis_met > 0, "plane one-set: " + pone.summary());
  require(o, ptwo.violations == 0 && ptwo.hypothesis_met > 0, "plane two-set: " + ptwo.summary());
  if (o.pass) {
    o.detail = "tree radius-6 ball: " + std::to_string(one.checked) + " + " + std::to_string(two.checked) +
               " checks, 0 violations; half-plane: " + std::to_string(pone.checked) + " + " +
               std::to_string(ptwo.checked) + " samples with (4,8,4), 0 violations (hypothesis met " +
               std::to_string(pone.hypothesis_met) + " + " + std::to_string(ptwo.hypothesis_met) + ")";
  }
  return o;
}

// ---- 10: Casson layer ----

Outcome casson_layer() {
  Outcome o;
  const auto t = SurgeryKnot::trefoil();
  for (int m = -10; m < 10; ++m) {
    const auto diff = casson_surgery(t, m + 1).lambda - casson_surgery(t, m).lambda;
    require(o, diff == 1, "difference at m=" + std::to_string(m) + " is " + std::to_string(diff));
  }
  const std::map<char, std::int64_t> values{{'a', 3}, {'b', -2}, {'c', 7}};
  std::mt19937_64 gen(10);
  const auto word = [&] {
    static const char letters[] = "aAbBcC";
    std::string w;
    const auto len = gen() % 16;
    for (std::uint64_t i = 0; i < len; ++i) w.push_back(letters[gen() % 6]);
    return w;
  };
  int additive = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto u = word();
    const auto v = word();
    if (homomorphism_eval(values, u + v) == homomorphism_eval(values, u) + homomorphism_eval(values, v)) ++additive;
  }
  require(o, additive == 1000, "additivity failed on " + std::to_string(1000 - additive) + " pairs");
  const auto hit = z_walk_hit_prob({{-1, 0.25}, {0, 0.5}, {1, 0.25}}, 400, 0, true);
  // S_400 + 400 of the lazy walk is Binomial(800, 1/2).
  const double exact = std::exp(std::lgamma(801.0) - 2.0 * std::lgamma(401.0) - 800.0 * std::log(2.0));
  require(o, std::abs(hit.probability - 0.0282) <= 0.0002, "hit probability " + num(hit.probability));
  require(o, std::abs(hit.probability - exact) <= 1e-12, "convolution differs from binomial oracle");
  const auto n = existence_crossover(1.0, 0.9, 0.1);
  std::int64_t scan = 1;
  while (!(0.1 / std::sqrt(static_cast<double>(scan)) > std::pow(0.9, static_cast<double>(scan)))) ++scan;
  require(o, n == 40 && scan == 40, "crossover " + std::to_string(n) + ", scan " + std::to_string(scan));
  if (o.pass) {
    o.detail = "trefoil differences 1 on [-10,10]; 1000/1000 additive pairs; P(S_400=0)=" + num(hit.probability) +
               "; crossover 40 (scan 40)";
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> known;
  unsigned workers = 1;
  app.add_option("--known-failures", known, "criteria expected to fail (still reported as FAIL)")->delimiter(',');
  app.add_option("--workers", workers, "worker threads for Monte Carlo criteria");
  CLI11_PARSE(app, argc, argv);
  const std::set<int> expected(known.begin(), known.end());

  std::optional<PipelineResult> pipeline;
  double pipeline_secs = 0.0;
  const auto get_pipeline = [&]() -> const PipelineResult& {
    if (!pipeline) {
      const auto t0 = Clock::now();
      pipeline = run_pipeline(pipeline_config(1));
      pipeline_secs = seconds_since(t0);
    }
    return *pipeline;
  };

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"chain certificate", chain_certificate},
      {"spectral estimate vs bound", spectral_estimate},
      {"exact chain distribution", exact_distribution},
      {"uniform irreducibility", irreducibility},
      {"domination pipeline",
       [&] {
         const auto& r = get_pipeline();
         return domination(r, pipeline_secs);
       }},
      {"exhaustive-oracle equivalence", enumeration_equivalence},
      {"shadow decay rate", [&] { return shadow_decay(workers); }},
      {"linear progress", [&] { return linear_progress(workers); }},
      {"coarse-geometry checkers", coarse_geometry},
      {"Casson layer", casson_layer},
      {"reproducibility", [&] { return reproducibility(get_pipeline(), workers); }},
  };

  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    Outcome out;
    const auto t0 = Clock::now();
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const bool known_failure = expected.count(id) > 0;
    std::cout << "criterion " << id << " " << (out.pass ? "PASS" : "FAIL") << ": " << criteria[i].first << " ("
              << num(seconds_since(t0)) << " s): " << out.detail;
    if (!out.pass && known_failure) std::cout << " [known failure]";
    if (out.pass && known_failure) std::cout << " [listed as known failure but passed]";
    std::cout << std::endl;
    if (!out.pass && !known_failure) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
