#include "hyperwalk/walker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "hyperwalk/parallel.hpp"
#include "hyperwalk/rng.hpp"

namespace hyperwalk {

namespace {

constexpr double kCompareTol = 1e-9;

bool is_identity_word(const Point& p) {
  const auto* w = std::get_if<Word>(&p);
  return w != nullptr && w->empty();
}

// Orbit position w x0 of a walk, updated one support index at a time.
class Walk {
 public:
  Walk(const ModelSpace& space, const StepDistribution& mu, const std::vector<Mobius>& mats, const Point& x0)
      : space_(space), mu_(mu), mats_(mats), x0_(x0), tree_(space.is_tree()), plain_(is_identity_word(x0)) {}

  void reset() {
    element_ = Word();
    m_ = Mobius::identity();
  }

  void step(std::size_t i) {
    element_.append(mu_.element(i));
    if (!tree_) m_ = m_ * mats_[i];
  }

  const Word& element() const { return element_; }

  Point point() const {
    if (tree_) return plain_ ? Point{element_} : Point{element_ * std::get<Word>(x0_)};
    return m_.apply(std::get<HPoint>(x0_));
  }

  double displacement() const {
    if (plain_) return static_cast<double>(element_.length());
    return distance(space_, x0_, point());
  }

 private:
  const ModelSpace& space_;
  const StepDistribution& mu_;
  const std::vector<Mobius>& mats_;
  const Point& x0_;
  bool tree_;
  bool plain_;
  Word element_;
  Mobius m_;
};

std::vector<Mobius> step_isometries(const ModelSpace& space, const StepDistribution& mu) {
  std::vector<Mobius> out;
  if (space.is_tree()) return out;
  for (const auto& [w, p] : mu.support()) out.push_back(space.isometry(w));
  return out;
}

// d(D, w x0). For tree orbits with x0 = 1 the local word translate^-1 w is
// kept together with the folded-graph vertex reached by each prefix, so an
// update costs O(step length).
class SetTracker {
 public:
  SetTracker(const ModelSpace& space, const QuasiconvexSet& set, const Point& x0)
      : space_(space), set_(set), incremental_(space.is_tree() && set.is_tree_orbit() && is_identity_word(x0)) {
    if (incremental_) start_ = set.translate().inverse();
  }

  void reset() {
    if (!incremental_) return;
    letters_.clear();
    states_.clear();
    readable_ = 0;
    for (Letter l : start_.letters()) push(l);
  }

  void step(const Word& s) {
    if (!incremental_) return;
    for (Letter l : s.letters()) push(l);
  }

  double distance(const Walk& walk) const {
    if (!incremental_) return distance_to_set(space_, set_, walk.point());
    const SubgroupGraph& g = *set_.graph();
    const int end = readable_ == 0 ? g.base() : states_[readable_ - 1];
    return static_cast<double>(letters_.size() - readable_) + g.distance_to_base(end);
  }

 private:
  void push(Letter l) {
    if (!letters_.empty() && letters_.back() == -l) {
      letters_.pop_back();
      states_.pop_back();
      readable_ = std::min(readable_, letters_.size());
      return;
    }
    const SubgroupGraph& g = *set_.graph();
    const int prev = letters_.empty() ? g.base() : states_.back();
    const int next = prev == SubgroupGraph::kNone ? SubgroupGraph::kNone : g.follow(prev, l);
    letters_.push_back(l);
    states_.push_back(next);
    if (next != SubgroupGraph::kNone) readable_ = letters_.size();
  }

  const ModelSpace& space_;
  const QuasiconvexSet& set_;
  bool incremental_;
  Word start_;
  std::vector<Letter> letters_;
  std::vector<int> states_;
  std::size_t readable_ = 0;
};

void check_enumerable(const StepDistribution& mu, int n_max) {
  if (n_max > kMaxEnumerationSteps || mu.size() > kMaxEnumerationSupport) {
    throw std::invalid_argument("enumeration mode needs n <= 8 and at most 4 support elements");
  }
}

std::uint64_t path_count(const StepDistribution& mu, int n_max) {
  std::uint64_t paths = 1;
  for (int i = 0; i < n_max; ++i) paths *= mu.size();
  return paths;
}

// Calls visit(steps, weight, acc) for every sampled path (weight 1) or, in
// enumeration mode, for every path with its exact probability.
template <class Accum, class Visit>
Accum drive(const StepDistribution& mu, int n_max, const MonteCarloOptions& opts, const Accum& init, Visit visit) {
  const auto len = static_cast<std::size_t>(n_max);
  if (opts.enumerate) {
    check_enumerable(mu, n_max);
    Accum acc = init;
    std::vector<std::size_t> steps(len, 0);
    const std::uint64_t paths = path_count(mu, n_max);
    for (std::uint64_t p = 0; p < paths; ++p) {
      double w = 1.0;
      for (std::size_t k = 0; k < len; ++k) w *= mu.weight(steps[k]);
      visit(std::span<const std::size_t>(steps), w, acc);
      for (std::size_t k = len; k-- > 0;) {
        if (++steps[k] < mu.size()) break;
        steps[k] = 0;
      }
    }
    return acc;
  }
  if (opts.trials == 0) throw std::invalid_argument("trials must be positive");
  return run_trials(opts.trials, opts.workers, init, [&](std::uint64_t trial, Accum& acc) {
    auto gen = trial_rng(opts.seed, trial);
    std::vector<std::size_t> steps(len);
    for (auto& s : steps) s = mu.sample_index(gen);
    visit(std::span<const std::size_t>(steps), 1.0, acc);
  });
}

// Per-row event weights and path counts; weights are counts when sampling.
struct EventCounts {
  std::vector<double> weight;
  std::vector<std::uint64_t> count;
  // Fixed-point sum (2^-24 units) so the result does not depend on how
  // trials were split between workers.
  std::int64_t extra = 0;

  explicit EventCounts(std::size_t rows = 0) : weight(rows, 0.0), count(rows, 0) {}
  void hit(std::size_t row, double w) {
    weight[row] += w;
    ++count[row];
  }
  void merge(const EventCounts& o) {
    for (std::size_t i = 0; i < weight.size(); ++i) {
      weight[i] += o.weight[i];
      count[i] += o.count[i];
    }
    extra += o.extra;
  }
};

constexpr double kFixedScale = 16777216.0;

DecayPoint row_point(const EventCounts& c, std::size_t row, int n, const StepDistribution& mu, int n_max,
                     const MonteCarloOptions& opts) {
  if (opts.enumerate) return make_exact_point(n, c.weight[row], c.count[row], path_count(mu, n_max));
  return make_decay_point(n, c.count[row], opts.trials, opts.z);
}

void validate_n_list(const std::vector<int>& n_list) {
  if (n_list.empty()) throw std::invalid_argument("n_list must not be empty");
  for (int n : n_list) {
    if (n < 0) throw std::invalid_argument("n must be nonnegative");
  }
}

int max_of(const std::vector<int>& v) { return *std::max_element(v.begin(), v.end()); }

// rows_at[k] lists report rows evaluated at time k.
std::vector<std::vector<std::size_t>> rows_by_time(const std::vector<int>& n_list, int n_max) {
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(n_max) + 1);
  for (std::size_t i = 0; i < n_list.size(); ++i) out[static_cast<std::size_t>(n_list[i])].push_back(i);
  return out;
}

DecayReport assemble(const std::string& name, const EventCounts& c, const std::vector<int>& n_list,
                     const StepDistribution& mu, int n_max, const MonteCarloOptions& opts) {
  DecayReport rep;
  rep.name = name;
  rep.exact = opts.enumerate;
  rep.seed = opts.seed;
  for (std::size_t i = 0; i < n_list.size(); ++i) rep.points.push_back(row_point(c, i, n_list[i], mu, n_max, opts));
  rep.refit();
  return rep;
}

void flag_non_monotone(DecayReport& rep) {
  std::vector<DecayPoint> pts = rep.points;
  std::sort(pts.begin(), pts.end(), [](const DecayPoint& a, const DecayPoint& b) { return a.n < b.n; });
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].ci_lo > pts[i - 1].ci_hi) {
      rep.notes.push_back("non-monotone: p at n=" + std::to_string(pts[i].n) + " exceeds the interval at n=" +
                          std::to_string(pts[i - 1].n));
    }
  }
}

bool at_most(double value, double bound) { return value <= bound + kCompareTol * std::max(1.0, std::abs(bound)); }

void require_x0(const ModelSpace& space, const Point& x0) { space.validate(x0); }

void add_run(KernelEstimate& k, std::span<const int> states, double w) {
  for (std::size_t i = 0; i + 1 < states.size(); ++i) {
    k.all.add(states[i], states[i + 1], w);
    const bool up = i > 0 && states[i] > states[i - 1];
    (up ? k.after_up : k.after_other).add(states[i], states[i + 1], w);
  }
}

double stay_or_down(const std::map<int, double>& row, int state) {
  double total = 0.0;
  double low = 0.0;
  for (const auto& [to, w] : row) {
    total += w;
    if (to <= state) low += w;
  }
  return total > 0.0 ? low / total : 0.0;
}

void finish_kernels(KernelEstimate& k) {
  k.history_gap = 0.0;
  for (const auto& [state, row] : k.after_up.weights) {
    const auto it = k.after_other.weights.find(state);
    if (it == k.after_other.weights.end()) continue;
    if (k.after_up.visits(state) < 500.0 || k.after_other.visits(state) < 500.0) continue;
    k.history_gap = std::max(k.history_gap, std::abs(stay_or_down(row, state) - stay_or_down(it->second, state)));
  }
}

void merge_kernels(KernelEstimate& a, const KernelEstimate& b) {
  a.all.merge(b.all);
  a.after_up.merge(b.after_up);
  a.after_other.merge(b.after_other);
}

}  // namespace

// ---------------------------------------------------------------------------
// StepDistribution

StepDistribution StepDistribution::make(std::vector<std::pair<Word, double>> entries) {
  if (entries.empty()) throw std::invalid_argument("step distribution needs a nonempty support");
  std::map<Word, double> agg;
  for (auto& [w, p] : entries) {
    if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("step weights must be positive");
    agg[w] += p;
  }
  StepDistribution out;
  double total = 0.0;
  for (auto& [w, p] : agg) {
    out.support_.emplace_back(w, p);
    total += p;
    out.cumulative_.push_back(total);
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("step weights must sum to 1");
  out.cumulative_.back() = 1.0;
  return out;
}

StepDistribution StepDistribution::uniform(const std::vector<Word>& words) {
  if (words.empty()) throw std::invalid_argument("step distribution needs a nonempty support");
  std::vector<std::pair<Word, double>> entries;
  for (const auto& w : words) entries.emplace_back(w, 1.0 / static_cast<double>(words.size()));
  return make(std::move(entries));
}

StepDistribution StepDistribution::simple_random_walk(int rank) {
  if (rank < 1 || rank > kMaxRank) throw std::invalid_argument("rank out of range");
  std::vector<Word> words;
  for (int i = 0; i < 2 * rank; ++i) {
    const Letter l = letter_from_index(i);
    words.push_back(Word::reduce(std::span<const Letter>(&l, 1)));
  }
  return uniform(words);
}

StepDistribution StepDistribution::point_mass(const Word& w) { return make({{w, 1.0}}); }

double StepDistribution::mass(const Word& w) const {
  for (const auto& [g, p] : support_) {
    if (g == w) return p;
  }
  return 0.0;
}

double StepDistribution::total_mass() const {
  double total = 0.0;
  for (const auto& e : support_) total += e.second;
  return total;
}

std::size_t StepDistribution::max_word_length() const {
  std::size_t out = 0;
  for (const auto& e : support_) out = std::max(out, e.first.length());
  return out;
}

std::size_t StepDistribution::sample_index(std::mt19937_64& gen) const {
  const double u = uniform01(gen);
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return std::min(static_cast<std::size_t>(it - cumulative_.begin()), support_.size() - 1);
}

SemigroupCheck check_semigroup_support(const StepDistribution& mu, int bound, std::size_t max_products) {
  if (bound < 1) throw std::invalid_argument("semigroup bound must be positive");
  std::unordered_set<Word, WordHash> seen;
  std::vector<Word> frontier;
  for (const auto& [w, p] : mu.support()) {
    if (seen.insert(w).second) frontier.push_back(w);
  }
  std::set<Word> missing;
  for (const auto& [w, p] : mu.support()) missing.insert(w.inverse());
  for (const auto& w : seen) missing.erase(w);
  for (int len = 2; len <= bound && !missing.empty() && !frontier.empty(); ++len) {
    std::vector<Word> next;
    for (const auto& f : frontier) {
      for (const auto& [s, p] : mu.support()) {
        Word prod = f * s;
        if (seen.insert(prod).second) {
          missing.erase(prod);
          next.push_back(std::move(prod));
          if (seen.size() > max_products) throw std::invalid_argument("semigroup check exceeded its search budget");
        }
      }
    }
    frontier = std::move(next);
  }
  SemigroupCheck out;
  out.bound = bound;
  for (const auto& [w, p] : mu.support()) {
    if (missing.count(w.inverse()) != 0) out.unreachable.push_back(w);
  }
  out.ok = out.unreachable.empty();
  return out;
}

SemigroupCheck validate_step_distribution(const ModelSpace& space, const StepDistribution& mu, bool strict,
                                          int bound) {
  for (const auto& [w, p] : mu.support()) {
    if (space.is_tree()) {
      space.validate(w);
    } else if (w.max_generator() > space.rank()) {
      throw std::invalid_argument("step " + w.str() + " uses a generator the space does not define");
    }
  }
  SemigroupCheck check = check_semigroup_support(mu, bound);
  if (strict && !check.ok) {
    throw std::invalid_argument("support does not generate a group as a semigroup: inverse of " +
                                check.unreachable.front().str() + " is not a product of <= " +
                                std::to_string(bound) + " support elements");
  }
  return check;
}

SamplePath sample_path(const StepDistribution& mu, int n, std::uint64_t seed) {
  if (n < 0) throw std::invalid_argument("path length must be nonnegative");
  SamplePath path;
  path.seed = seed;
  path.locations.emplace_back();
  auto gen = trial_rng(seed, 0);
  for (int k = 0; k < n; ++k) {
    const Word& g = mu.element(mu.sample_index(gen));
    path.increments.push_back(g);
    path.locations.push_back(path.locations.back() * g);
  }
  return path;
}

StepDistribution reflect(const StepDistribution& mu) {
  std::vector<std::pair<Word, double>> entries;
  for (const auto& [w, p] : mu.support()) entries.emplace_back(w.inverse(), p);
  return StepDistribution::make(std::move(entries));
}

StepDistribution iterate_measure(const StepDistribution& mu, int n, std::size_t cap) {
  if (n < 1) throw std::invalid_argument("iterate_measure needs N >= 1");
  std::map<Word, double> current;
  for (const auto& [w, p] : mu.support()) current[w] += p;
  for (int k = 1; k < n; ++k) {
    std::map<Word, double> next;
    for (const auto& [w, p] : current) {
      for (const auto& [s, ps] : mu.support()) {
        next[w * s] += p * ps;
        if (next.size() > cap) throw std::length_error("convolution support exceeds the cap");
      }
    }
    current = std::move(next);
  }
  std::vector<std::pair<Word, double>> entries(current.begin(), current.end());
  return StepDistribution::make(std::move(entries));
}

int phi_from_distance(double dist, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("R must be positive");
  if (dist < 0.0) throw std::invalid_argument("distance must be nonnegative");
  auto k = static_cast<long long>(std::floor(dist / r));
  while (k > 0 && r * static_cast<double>(k) > dist) --k;
  while (r * static_cast<double>(k + 1) <= dist) ++k;
  return static_cast<int>(k);
}

int phi_R(const ModelSpace& space, const QuasiconvexSet& d, const Point& x, double r) {
  return phi_from_distance(distance_to_set(space, d, x), r);
}

// ---------------------------------------------------------------------------
// Estimators

DecayReport estimate_linear_progress(const StepDistribution& mu, const ModelSpace& space, const Point& x0,
                                     double l, const std::vector<int>& n_list, const MonteCarloOptions& opts) {
  validate_n_list(n_list);
  require_x0(space, x0);
  const int n_max = max_of(n_list);
  const auto rows = rows_by_time(n_list, n_max);
  const auto mats = step_isometries(space, mu);
  EventCounts c = drive(mu, n_max, opts, EventCounts(n_list.size()),
                        [&](std::span<const std::size_t> steps, double w, EventCounts& acc) {
                          Walk walk(space, mu, mats, x0);
                          walk.reset();
                          for (int k = 0; k <= n_max; ++k) {
                            if (k > 0) walk.step(steps[static_cast<std::size_t>(k - 1)]);
                            if (rows[static_cast<std::size_t>(k)].empty() && k != n_max) continue;
                            const double disp = walk.displacement();
                            for (std::size_t row : rows[static_cast<std::size_t>(k)]) {
                              if (at_most(disp, l * k)) acc.hit(row, w);
                            }
                            if (k == n_max && !opts.enumerate) acc.extra += std::llround(disp * kFixedScale);
                          }
                        });
  DecayReport rep = assemble("linear_progress", c, n_list, mu, n_max, opts);
  if (!opts.enumerate && n_max > 0) {
    rep.drift = static_cast<double>(c.extra) / kFixedScale / static_cast<double>(opts.trials) / n_max;
  }
  flag_non_monotone(rep);
  return rep;
}

DecayReport estimate_shadow_decay(const StepDistribution& mu, const ModelSpace& space, const Point& x0,
                                  const ShadowSpec& shadow, const std::vector<int>& n_list,
                                  const MonteCarloOptions& opts) {
  validate_n_list(n_list);
  require_x0(space, x0);
  space.validate(shadow.base);
  space.validate(shadow.target);
  const int n_max = max_of(n_list);
  const auto rows = rows_by_time(n_list, n_max);
  const auto mats = step_isometries(space, mu);
  EventCounts c = drive(mu, n_max, opts, EventCounts(n_list.size()),
                        [&](std::span<const std::size_t> steps, double w, EventCounts& acc) {
                          Walk walk(space, mu, mats, x0);
                          walk.reset();
                          for (int k = 0; k <= n_max; ++k) {
                            if (k > 0) walk.step(steps[static_cast<std::size_t>(k - 1)]);
                            if (rows[static_cast<std::size_t>(k)].empty()) continue;
                            const bool inside = in_shadow(space, shadow, walk.point());
                            for (std::size_t row : rows[static_cast<std::size_t>(k)]) {
                              if (inside) acc.hit(row, w);
                            }
                          }
                        });
  DecayReport rep = assemble("shadow_decay", c, n_list, mu, n_max, opts);
  if (shadow.radius >= distance(space, shadow.base, shadow.target)) rep.notes.push_back("vacuous shadow: R >= d(x0, y)");
  return rep;
}

DecayReport estimate_shadow_rate(const StepDistribution& mu, const ModelSpace& space, const Point& x0,
                                 const std::vector<Point>& targets, double r, int n,
                                 const MonteCarloOptions& opts) {
  if (targets.empty()) throw std::invalid_argument("need at least one shadow target");
  if (n < 0) throw std::invalid_argument("n must be nonnegative");
  require_x0(space, x0);
  std::vector<ShadowSpec> shadows;
  std::vector<int> depth;
  for (const auto& y : targets) {
    space.validate(y);
    shadows.push_back({x0, y, r});
    depth.push_back(static_cast<int>(std::lround(distance(space, x0, y) - r)));
  }
  const auto mats = step_isometries(space, mu);
  EventCounts c = drive(mu, n, opts, EventCounts(targets.size()),
                        [&](std::span<const std::size_t> steps, double w, EventCounts& acc) {
                          Walk walk(space, mu, mats, x0);
                          walk.reset();
                          for (std::size_t s : steps) walk.step(s);
                          const Point p = walk.point();
                          for (std::size_t i = 0; i < shadows.size(); ++i) {
                            if (in_shadow(space, shadows[i], p)) acc.hit(i, w);
                          }
                        });
  DecayReport rep = assemble("shadow_rate", c, depth, mu, n, opts);
  rep.notes.push_back("n column is d(x0, y) - R; walk length " + std::to_string(n));
  return rep;
}

namespace {

struct StateCounts {
  std::map<int, double> weight;
  std::map<int, std::uint64_t> count;
  void merge(const StateCounts& o) {
    for (const auto& [k, v] : o.weight) weight[k] += v;
    for (const auto& [k, v] : o.count) count[k] += v;
  }
};

double max_step_displacement(const ModelSpace& space, const StepDistribution& mu, const Point& x0) {
  double s = 0.0;
  for (const auto& [g, p] : mu.support()) s = std::max(s, distance(space, x0, space.act(g, x0)));
  return s;
}

// Law of phi_R at time n for a walk from x0 measured against `set`.
StateCounts phi_law(const StepDistribution& mu, const ModelSpace& space, const Point& x0, const QuasiconvexSet& set,
                    double r, int n, const MonteCarloOptions& opts) {
  const auto mats = step_isometries(space, mu);
  return drive(mu, n, opts, StateCounts{}, [&](std::span<const std::size_t> steps, double w, StateCounts& acc) {
    Walk walk(space, mu, mats, x0);
    SetTracker tracker(space, set, x0);
    walk.reset();
    tracker.reset();
    for (std::size_t s : steps) {
      walk.step(s);
      tracker.step(mu.element(s));
    }
    const int phi = phi_from_distance(tracker.distance(walk), r);
    acc.weight[phi] += w;
    ++acc.count[phi];
  });
}

}  // namespace

BacktrackReport estimate_backtrack(const StepDistribution& mu, const ModelSpace& space, const Point& x0,
                                   const QuasiconvexSet& d, const Word& g, double r, int n,
                                   const MonteCarloOptions& opts) {
  if (n < 0) throw std::invalid_argument("n must be nonnegative");
  require_x0(space, x0);
  const QuasiconvexSet local = d.translated(space, g.inverse());
  const int t = phi_R(space, local, x0, r);
  if (t == 0) throw std::invalid_argument("backtrack start has phi_R = 0; use estimate_escape");

  const StateCounts law = phi_law(mu, space, x0, local, r, n, opts);
  BacktrackReport rep;
  rep.t = t;
  rep.n = n;
  rep.exact = opts.enumerate;
  rep.trials = opts.enumerate ? path_count(mu, n) : opts.trials;
  for (const auto& [state, w] : law.weight) {
    rep.distribution[state] = opts.enumerate ? w : w / static_cast<double>(opts.trials);
  }
  const double s = max_step_displacement(space, mu, x0);
  const int max_drop = static_cast<int>(std::ceil(n * s / r - kCompareTol));
  rep.max_feasible_r = std::min(t + 1, max_drop + 1);
  for (int rr = 1; rr <= t + 1; ++rr) {
    const int level = t + 1 - rr;
    double w = 0.0;
    std::uint64_t cnt = 0;
    for (const auto& [state, v] : law.weight) {
      if (state <= level) {
        w += v;
        cnt += law.count.at(state);
      }
    }
    const DecayPoint pt = opts.enumerate ? make_exact_point(rr, w, cnt, rep.trials)
                                         : make_decay_point(rr, cnt, opts.trials, opts.z);
    rep.exceedance.push_back(pt);
    const double inv = 1.0 / rr;
    rep.q_hat = std::max(rep.q_hat, std::pow(pt.p_hat, inv));
    if (rr <= rep.max_feasible_r) rep.q_upper = std::max(rep.q_upper, std::pow(pt.ci_hi, inv));
  }
  return rep;
}

EscapeReport estimate_escape(const StepDistribution& mu, const ModelSpace& space, const Point& x0,
                             const QuasiconvexSet& d, const Word& g, double r, const std::vector<int>& n_list,
                             const MonteCarloOptions& opts) {
  validate_n_list(n_list);
  require_x0(space, x0);
  const QuasiconvexSet local = d.translated(space, g.inverse());
  if (phi_R(space, local, x0, r) != 0) throw std::invalid_argument("escape start must have phi_R = 0");
  const int n_max = max_of(n_list);
  const auto rows = rows_by_time(n_list, n_max);
  const auto mats = step_isometries(space, mu);
  const std::size_t m = n_list.size();
  EventCounts c = drive(mu, n_max, opts, EventCounts(2 * m),
                        [&](std::span<const std::size_t> steps, double w, EventCounts& acc) {
                          Walk walk(space, mu, mats, x0);
                          SetTracker tracker(space, local, x0);
                          walk.reset();
                          tracker.reset();
                          for (int k = 0; k <= n_max; ++k) {
                            if (k > 0) {
                              const std::size_t s = steps[static_cast<std::size_t>(k - 1)];
                              walk.step(s);
                              tracker.step(mu.element(s));
                            }
                            if (rows[static_cast<std::size_t>(k)].empty()) continue;
                            const int phi = phi_from_distance(tracker.distance(walk), r);
                            for (std::size_t row : rows[static_cast<std::size_t>(k)]) {
                              if (phi >= 1) acc.hit(row, w);
                              if (phi == 1) acc.hit(m + row, w);
                            }
                          }
                        });
  EscapeReport rep;
  rep.escaped.name = "escape";
  rep.first_level.name = "escape_first_level";
  for (auto* dr : {&rep.escaped, &rep.first_level}) {
    dr->exact = opts.enumerate;
    dr->seed = opts.seed;
  }
  for (std::size_t i = 0; i < m; ++i) {
    rep.escaped.points.push_back(row_point(c, i, n_list[i], mu, n_max, opts));
    rep.first_level.points.push_back(row_point(c, m + i, n_list[i], mu, n_max, opts));
    rep.eps_hat = std::max(rep.eps_hat, rep.escaped.points.back().ci_lo);
  }
  return rep;
}

KernelEstimate empirical_kernels(std::span<const std::vector<int>> runs) {
  KernelEstimate k;
  for (const auto& run : runs) add_run(k, run, 1.0);
  finish_kernels(k);
  return k;
}

namespace {

struct DistanceAccum {
  EventCounts events;
  KernelEstimate kernels;
  std::map<int, std::map<int, double>> laws;
  void merge(const DistanceAccum& o) {
    events.merge(o.events);
    merge_kernels(kernels, o.kernels);
    for (const auto& [time, law] : o.laws) {
      for (const auto& [state, w] : law) laws[time][state] += w;
    }
  }
};

}  // namespace

DistanceReport estimate_distance_from_D(const StepDistribution& mu, const ModelSpace& space, const Point& x0,
                                        const QuasiconvexSet& d, double l, const std::vector<int>& n_list,
                                        const MonteCarloOptions& opts, const KernelSpec& kernel) {
  validate_n_list(n_list);
  require_x0(space, x0);
  if (kernel.steps < 0 || (kernel.steps > 0 && (kernel.n < 1 || !(kernel.r > 0.0)))) {
    throw std::invalid_argument("kernel spec needs R > 0 and N >= 1");
  }
  for (int t : kernel.record_times) {
    if (t < 0 || t > kernel.steps) throw std::invalid_argument("record time outside the kernel run");
  }
  const int kernel_len = kernel.steps * kernel.n;
  const int n_max = std::max(max_of(n_list), kernel_len);
  const auto rows = rows_by_time(n_list, n_max);
  const auto mats = step_isometries(space, mu);
  std::vector<char> recorded(static_cast<std::size_t>(kernel.steps) + 1, 0);
  for (int t : kernel.record_times) recorded[static_cast<std::size_t>(t)] = 1;

  DistanceAccum init;
  init.events = EventCounts(n_list.size());
  DistanceAccum acc = drive(mu, n_max, opts, init, [&](std::span<const std::size_t> steps, double w, DistanceAccum& a) {
    Walk walk(space, mu, mats, x0);
    SetTracker tracker(space, d, x0);
    walk.reset();
    tracker.reset();
    std::vector<int> states;
    for (int k = 0; k <= n_max; ++k) {
      if (k > 0) {
        const std::size_t s = steps[static_cast<std::size_t>(k - 1)];
        walk.step(s);
        tracker.step(mu.element(s));
      }
      const bool kernel_time = kernel.steps > 0 && k <= kernel_len && k % kernel.n == 0;
      if (rows[static_cast<std::size_t>(k)].empty() && !kernel_time) continue;
      const double dist = tracker.distance(walk);
      for (std::size_t row : rows[static_cast<std::size_t>(k)]) {
        if (at_most(dist, l * k)) a.events.hit(row, w);
      }
      if (kernel_time) {
        const int phi = phi_from_distance(dist, kernel.r);
        const int chain_time = k / kernel.n;
        if (recorded[static_cast<std::size_t>(chain_time)]) a.laws[chain_time][phi] += w;
        states.push_back(phi);
      }
    }
    add_run(a.kernels, states, w);
  });

  DistanceReport rep;
  rep.curve = assemble("distance_from_D", acc.events, n_list, mu, n_max, opts);
  rep.kernels = std::move(acc.kernels);
  finish_kernels(rep.kernels);
  rep.state_laws = std::move(acc.laws);
  bool all_one = true;
  bool any_positive_n = false;
  for (const auto& pt : rep.curve.points) {
    if (pt.n == 0) continue;
    any_positive_n = true;
    if (pt.successes != pt.trials) all_one = false;
  }
  rep.degenerate = any_positive_n && all_one;
  if (rep.degenerate) rep.curve.notes.push_back("degenerate: every sampled point stays within L n of D");
  flag_non_monotone(rep.curve);
  return rep;
}

SplittingReport estimate_splitting_distance(const StepDistribution& mu, const ModelSpace& space, const Point& x0,
                                            const QuasiconvexSet& d, const QuasiconvexSet& dp, double l,
                                            const std::vector<int>& n_list, const MonteCarloOptions& opts) {
  validate_n_list(n_list);
  require_x0(space, x0);
  if (!contains(space, d, x0) || !contains(space, dp, x0)) {
    throw std::invalid_argument("basepoint must lie in both D and Dp");
  }
  const int n_max = max_of(n_list);
  const auto mats = step_isometries(space, mu);
  const std::size_t m = n_list.size();
  // Rows: [0,m) main event, then the three diagnostics, then uncovered.
  EventCounts c = drive(mu, n_max, opts, EventCounts(5 * m),
                        [&](std::span<const std::size_t> steps, double w, EventCounts& acc) {
                          Walk walk(space, mu, mats, x0);
                          walk.reset();
                          std::vector<Word> elements{walk.element()};
                          std::vector<Point> points{walk.point()};
                          for (std::size_t s : steps) {
                            walk.step(s);
                            elements.push_back(walk.element());
                            points.push_back(walk.point());
                          }
                          for (std::size_t i = 0; i < m; ++i) {
                            const int n = n_list[i];
                            const auto un = static_cast<std::size_t>(n);
                            const auto um = static_cast<std::size_t>(n / 2);
                            const QuasiconvexSet moved = dp.translated(space, elements[un]);
                            const bool main = at_most(set_distance(space, d, moved), l * n);
                            const bool first = at_most(distance_to_set(space, d, points[um]), l * n / 2.0);
                            const bool second = at_most(distance_to_set(space, moved, points[um]), l * (n / 2.0 + 1.0));
                            const bool third =
                                gromov_product(space, points[um], x0, points[un]) >= l * n / 4.0 - kCompareTol;
                            if (main) acc.hit(i, w);
                            if (first) acc.hit(m + i, w);
                            if (second) acc.hit(2 * m + i, w);
                            if (third) acc.hit(3 * m + i, w);
                            if (main && !first && !second && !third) acc.hit(4 * m + i, w);
                          }
                        });
  SplittingReport rep;
  const char* names[] = {"splitting_distance", "initial_segment", "final_segment", "gromov_product"};
  DecayReport* outs[] = {&rep.curve, &rep.initial_segment, &rep.final_segment, &rep.gromov};
  for (int j = 0; j < 4; ++j) {
    DecayReport& dr = *outs[j];
    dr.name = names[j];
    dr.exact = opts.enumerate;
    dr.seed = opts.seed;
    for (std::size_t i = 0; i < m; ++i) {
      dr.points.push_back(row_point(c, static_cast<std::size_t>(j) * m + i, n_list[i], mu, n_max, opts));
    }
    dr.refit();
  }
  for (std::size_t i = 0; i < m; ++i) {
    rep.uncovered.push_back(c.count[4 * m + i]);
    if (n_list[i] == 0) rep.curve.notes.push_back("degenerate row n=0: D and Dp share the basepoint");
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Calibration

namespace {

constexpr int kMaxRayScan = 100000;

Word ray_power(const Word& ray, int k) {
  Word g;
  for (int i = 0; i < k; ++i) g = g * ray;
  return g;
}

// First k with phi_R(ray^k x0) = t, or -1 when the ray skips band t.
class RayBands {
 public:
  RayBands(const ModelSpace& space, const Point& x0, const QuasiconvexSet& d, const Word& ray, double r)
      : space_(space), x0_(x0), d_(d), ray_(ray), r_(r) {}

  int start(int t) {
    while (first_.empty() || first_.rbegin()->first < t) {
      if (scanned_ > kMaxRayScan) throw std::runtime_error("calibration ray does not leave the set");
      first_.emplace(phi_R(space_, d_, space_.act(current_, x0_), r_), scanned_);
      current_ = current_ * ray_;
      ++scanned_;
    }
    const auto it = first_.find(t);
    return it == first_.end() ? -1 : it->second;
  }

 private:
  const ModelSpace& space_;
  const Point& x0_;
  const QuasiconvexSet& d_;
  const Word& ray_;
  double r_;
  std::map<int, int> first_;
  Word current_;
  int scanned_ = 0;
};

constexpr int kMaxZeroStarts = 64;

std::uint64_t cell_seed(std::uint64_t seed, int r, int n, int start) {
  return splitmix64(seed ^ splitmix64((static_cast<std::uint64_t>(r) << 40) ^ (static_cast<std::uint64_t>(n) << 20) ^
                                      static_cast<std::uint64_t>(start)));
}

}  // namespace

std::string CalibrationResult::to_csv() const {
  std::ostringstream os;
  os << "r,n,eps_hat,q_hat,passed,aborted\n";
  for (const auto& c : cells) {
    os << c.r << ',' << c.n << ',' << format_double(c.eps_hat) << ',' << format_double(c.q_hat) << ','
       << (c.passed ? 1 : 0) << ',' << (c.aborted ? 1 : 0) << '\n';
  }
  return os.str();
}

CalibrationResult calibrate(const StepDistribution& mu, const ModelSpace& space, const Point& x0,
                            const QuasiconvexSet& d, const Word& ray, const CalibrationOptions& opts) {
  if (opts.r_min < 1 || opts.r_max < opts.r_min || opts.n_min < 1 || opts.n_max < opts.n_min) {
    throw std::invalid_argument("invalid calibration grid");
  }
  if (ray.empty()) throw std::invalid_argument("calibration ray must be nontrivial");
  require_x0(space, x0);
  const double s = max_step_displacement(space, mu, x0);
  CalibrationResult result;
  for (int r = opts.r_min; r <= opts.r_max; ++r) {
    // Band-0 starts and the lowest start of each band do not depend on N.
    std::vector<int> zero_starts;
    for (int k = 0; k < kMaxZeroStarts; ++k) {
      if (phi_R(space, d, space.act(ray_power(ray, k), x0), r) != 0) break;
      zero_starts.push_back(k);
    }
    if (zero_starts.empty()) throw std::invalid_argument("x0 must lie within R of the set");
    RayBands bands_of(space, x0, d, ray, r);
    for (int n = opts.n_min; n <= opts.n_max; ++n) {
      CalibrationCell cell;
      cell.r = r;
      cell.n = n;
      MonteCarloOptions mc;
      mc.trials = opts.trials;
      mc.workers = opts.workers;
      mc.z = opts.z;

      cell.eps_hat = 1.0;
      for (int k : zero_starts) {
        mc.seed = cell_seed(opts.seed, r, n, k);
        const auto esc = estimate_escape(mu, space, x0, d, ray_power(ray, k), r, {n}, mc);
        cell.eps_hat = std::min(cell.eps_hat, esc.eps_hat);
      }
      const int bands = static_cast<int>(std::ceil(n * s / r - kCompareTol)) + 2;
      for (int t = 1; t <= bands; ++t) {
        const int k = bands_of.start(t);
        if (k < 0) continue;
        mc.seed = cell_seed(opts.seed, r, n, 1000000 + t);
        const auto bt = estimate_backtrack(mu, space, x0, d, ray_power(ray, k), r, n, mc);
        cell.q_hat = std::max(cell.q_hat, bt.q_upper);
        if (cell.q_hat >= opts.q_limit) {
          cell.aborted = t < bands;
          break;
        }
      }
      cell.passed = cell.eps_hat > 0.0 && cell.q_hat < opts.q_limit;
      result.cells.push_back(cell);
      if (cell.passed) {
        result.found = true;
        result.r = r;
        result.n = n;
        result.eps_hat = cell.eps_hat;
        result.q_hat = cell.q_hat;
        return result;
      }
    }
  }
  return result;
}

}  // namespace hyperwalk
