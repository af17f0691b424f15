#include "hyperwalk/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "hyperwalk/casson.hpp"
#include "hyperwalk/coarse_checks.hpp"
#include "hyperwalk/qconvex.hpp"
#include "hyperwalk/rng.hpp"
#include "hyperwalk/sampling.hpp"

namespace hyperwalk {

namespace {

using nlohmann::json;

const std::vector<std::string> kAllKinds{"chain", "walk", "geom", "shadow", "casson", "pipeline"};

std::string type_name(ValueType t) {
  switch (t) {
    case ValueType::Integer:
      return "integer";
    case ValueType::Number:
      return "number";
    case ValueType::Boolean:
      return "boolean";
    case ValueType::Text:
      return "string";
    case ValueType::IntegerList:
      return "list of integers";
  }
  return "?";
}

const ConfigKey* find_key(const std::string& name) {
  for (const auto& k : config_schema()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

bool type_matches(const ConfigKey& key, const json& v) {
  switch (key.type) {
    case ValueType::Integer:
      return v.is_number_integer();
    case ValueType::Number:
      return v.is_number();
    case ValueType::Boolean:
      return v.is_boolean();
    case ValueType::Text:
      return v.is_string();
    case ValueType::IntegerList:
      return v.is_array() && std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number_integer(); });
  }
  return false;
}

std::int64_t parse_integer(const std::string& text) {
  std::size_t used = 0;
  const long long v = std::stoll(text, &used);
  if (used != text.size()) throw std::invalid_argument(text);
  return v;
}

double parse_number(const std::string& text) {
  std::size_t used = 0;
  const double v = std::stod(text, &used);
  if (used != text.size()) throw std::invalid_argument(text);
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

// "20,28,36" or "first:last:step".
json parse_integer_list(const std::string& text) {
  json out = json::array();
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw std::invalid_argument(text);
    const auto first = parse_integer(parts[0]);
    const auto last = parse_integer(parts[1]);
    const auto step = parse_integer(parts[2]);
    if (step <= 0 || last < first || (last - first) / step > 100000) throw std::invalid_argument(text);
    for (auto v = first; v <= last; v += step) out.push_back(v);
    return out;
  }
  for (const auto& p : split(text, ',')) out.push_back(parse_integer(p));
  return out;
}

json convert_flag(const ConfigKey& key, const std::string& text) {
  try {
    switch (key.type) {
      case ValueType::Integer:
        return parse_integer(text);
      case ValueType::Number:
        return parse_number(text);
      case ValueType::Boolean:
        if (text == "true" || text == "1") return true;
        if (text == "false" || text == "0") return false;
        throw std::invalid_argument(text);
      case ValueType::Text:
        return text;
      case ValueType::IntegerList:
        return parse_integer_list(text);
    }
  } catch (const std::exception&) {
  }
  throw ConfigError("--" + key.name + ": expected " + type_name(key.type) + ", got '" + text + "'");
}

void validate_values(const json& values) {
  std::vector<std::string> errors;
  if (!values.contains("schema_version")) {
    errors.push_back("missing required key 'schema_version'");
  } else if (!values["schema_version"].is_number_integer() || values["schema_version"].get<int>() != kSchemaVersion) {
    errors.push_back("schema_version must be " + std::to_string(kSchemaVersion));
  }
  std::string kind;
  if (!values.contains("kind")) {
    errors.push_back("missing required key 'kind' (one of chain, walk, geom, shadow, casson, pipeline)");
  } else if (!values["kind"].is_string() ||
             std::find(kAllKinds.begin(), kAllKinds.end(), values["kind"].get<std::string>()) == kAllKinds.end()) {
    errors.push_back("kind must be one of chain, walk, geom, shadow, casson, pipeline");
  } else {
    kind = values["kind"].get<std::string>();
  }
  for (const auto& [name, v] : values.items()) {
    const ConfigKey* key = find_key(name);
    if (key == nullptr) {
      errors.push_back("unknown key '" + name + "'");
      continue;
    }
    if (!type_matches(*key, v)) {
      errors.push_back("key '" + name + "' must be a " + type_name(key->type));
      continue;
    }
    if (!kind.empty() && !key->kinds.empty() &&
        std::find(key->kinds.begin(), key->kinds.end(), kind) == key->kinds.end()) {
      errors.push_back("key '" + name + "' does not apply to kind '" + kind + "'");
    }
    if (key->min && (key->type == ValueType::Integer || key->type == ValueType::Number) &&
        v.get<double>() < *key->min) {
      errors.push_back("key '" + name + "' must be >= " + format_double(*key->min));
    }
    if (key->min && key->type == ValueType::IntegerList) {
      if (v.empty()) errors.push_back("key '" + name + "' must not be empty");
      for (const auto& e : v) {
        if (e.get<double>() < *key->min) {
          errors.push_back("entries of '" + name + "' must be >= " + format_double(*key->min));
          break;
        }
      }
    }
  }
  if (!errors.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
}

std::uint64_t stage_seed(std::uint64_t seed, std::uint64_t stage) { return splitmix64(seed ^ splitmix64(stage)); }

std::string fmt(double x) { return format_double(x); }

std::vector<Word> parse_words(const std::string& text, int rank) {
  std::vector<Word> out;
  for (const auto& p : split(text, ',')) out.push_back(Word::parse(p, rank));
  return out;
}

QuasiconvexSet orbit_set(const ModelSpace& space, const std::string& gens, const std::string& translate) {
  return QuasiconvexSet::subgroup_orbit(space, parse_words(gens, space.rank()), Word::parse(translate, space.rank()));
}

json fit_json(const DecayReport& r) {
  json j = json::object();
  if (r.fit) {
    j["K"] = r.fit->K;
    j["c"] = r.fit->c;
    j["r_squared"] = r.fit->r_squared;
    j["n_first"] = r.fit->n_first;
    j["n_last"] = r.fit->n_last;
  } else {
    j["K"] = nullptr;
  }
  if (r.drift) j["drift"] = *r.drift;
  j["notes"] = r.notes;
  return j;
}

std::string fit_line(const DecayReport& r) {
  std::ostringstream os;
  os << r.name << ": ";
  if (r.fit) {
    os << "K=" << fmt(r.fit->K) << " c=" << fmt(r.fit->c) << " R2=" << fmt(r.fit->r_squared) << " over n="
       << r.fit->n_first << ".." << r.fit->n_last;
  } else {
    os << "no fit";
  }
  if (r.drift) os << " drift=" << fmt(*r.drift);
  for (const auto& n : r.notes) os << " [" << n << "]";
  return os.str();
}

json check_json(const CheckReport& r) {
  json j{{"verdict", to_string(r.verdict)},
         {"checked", r.checked},
         {"hypothesis_met", r.hypothesis_met},
         {"violations", r.violations},
         {"witnesses", r.witnesses},
         {"notes", r.notes}};
  j["worst_margin"] = std::isfinite(r.worst_margin) ? json(r.worst_margin) : json(nullptr);
  return j;
}

std::string kernel_csv(const KernelEstimate& k) {
  std::ostringstream os;
  os << "table,from,to,weight\n";
  const std::pair<const char*, const KernelTable*> tables[] = {
      {"all", &k.all}, {"after_up", &k.after_up}, {"after_other", &k.after_other}};
  for (const auto& [name, table] : tables) {
    for (const auto& [from, row] : table->weights) {
      for (const auto& [to, w] : row) os << name << ',' << from << ',' << to << ',' << fmt(w) << '\n';
    }
  }
  return os.str();
}

MonteCarloOptions mc_options(const ExperimentConfig& cfg, std::uint64_t default_trials, std::uint64_t stage) {
  MonteCarloOptions o;
  o.trials = static_cast<std::uint64_t>(cfg.integer("trials", static_cast<std::int64_t>(default_trials)));
  o.seed = stage_seed(static_cast<std::uint64_t>(cfg.integer("seed", 1)), stage);
  o.workers = cfg.workers;
  o.enumerate = cfg.boolean("enumerate", false);
  return o;
}

void fail(RunArtifacts& art, int status, const std::string& why) {
  art.status = status;
  art.failure = why;
  art.summary += "FAILED: " + why + "\n";
}

// ---- chain ----

RunArtifacts run_chain(const ExperimentConfig& cfg) {
  RunArtifacts art;
  ChainParams p;
  p.eps = cfg.number("eps", 0.5);
  p.q = cfg.number("q", 0.2);
  const int n = static_cast<int>(cfg.integer("n", 400));
  p.truncation = static_cast<int>(cfg.integer("truncation", std::max(n, 1001)));
  p.exploratory = cfg.boolean("exploratory", false);
  const bool strict = cfg.boolean("strict", false);
  const int kmax = static_cast<int>(cfg.integer("kmax", 10000));
  const int rho_n = static_cast<int>(cfg.integer("rho_n", 400));
  if (p.q >= 0.25) {
    if (strict) {
      fail(art, 4, "q = " + fmt(p.q) + " >= 1/4: no superharmonic certificate in strict mode");
      return art;
    }
    p.exploratory = true;
  }
  p.validate();

  const auto dist = n_step_distribution(p, n);
  art.files["distribution.csv"] = dist.to_csv();
  std::ostringstream sum;
  sum << "chain eps=" << fmt(p.eps) << " q=" << fmt(p.q) << " n=" << n << " truncation=" << p.truncation << "\n";
  sum << "mass_error " << fmt(dist.mass_error) << "\n";
  art.results["mass_error"] = dist.mass_error;
  const double rho = estimate_spectral_radius(p, rho_n);
  art.results["rho_estimate"] = rho;
  sum << "rho_estimate(n=" << rho_n << ") " << fmt(rho) << "\n";
  if (p.q >= 0.25) {
    art.results["certificate"] = "withheld";
    sum << "certificate withheld: exploratory mode (q >= 1/4)\n";
    art.summary = sum.str();
    return art;
  }
  const double t = spectral_radius_bound(p);
  const auto cert = check_superharmonic(p, t, kmax);
  art.results["t"] = t;
  art.results["certificate"] = check_json(cert);
  sum << "certificate at t=" << fmt(t) << " kmax=" << kmax << ": " << cert.summary() << "\n";
  art.summary = sum.str();
  if (!cert.ok()) fail(art, 4, "superharmonic certificate failed at t = " + fmt(t));
  return art;
}

// ---- walk ----

StepDistribution step_measure(const ExperimentConfig& cfg, int rank) {
  if (!cfg.has("steps")) {
    if (cfg.has("weights")) throw ConfigError("'weights' needs 'steps'");
    return StepDistribution::simple_random_walk(rank);
  }
  const auto words = parse_words(cfg.text("steps", ""), rank);
  if (!cfg.has("weights")) return StepDistribution::uniform(words);
  const auto parts = split(cfg.text("weights", ""), ',');
  if (parts.size() != words.size()) throw ConfigError("'weights' and 'steps' differ in length");
  std::vector<std::pair<Word, double>> entries;
  for (std::size_t i = 0; i < words.size(); ++i) {
    try {
      entries.emplace_back(words[i], parse_number(parts[i]));
    } catch (const std::invalid_argument&) {
      throw ConfigError("bad weight '" + parts[i] + "'");
    }
  }
  return StepDistribution::make(std::move(entries));
}

void add_curve(RunArtifacts& art, std::ostringstream& sum, const DecayReport& r) {
  art.files[r.name + ".csv"] = r.to_csv();
  art.results[r.name] = fit_json(r);
  sum << fit_line(r) << "\n";
}

RunArtifacts run_walk(const ExperimentConfig& cfg) {
  RunArtifacts art;
  const int rank = static_cast<int>(cfg.integer("rank", 2));
  const auto space = ModelSpace::free_group_tree(rank);
  const auto mu = step_measure(cfg, rank);
  const bool strict = cfg.boolean("strict", false);
  const auto semi = validate_step_distribution(space, mu, strict);
  const Point x0 = space.basepoint();
  const auto opts = mc_options(cfg, 10000, 1);
  const std::string est = cfg.text("estimator", "linear_progress");
  const double l = cfg.number("l", 0.25);
  const double r = cfg.number("r", 2.0);
  std::ostringstream sum;
  sum << "walk estimator=" << est << " rank=" << rank << " support=" << mu.size()
      << (opts.enumerate ? " (enumeration)" : " trials=" + std::to_string(opts.trials)) << "\n";
  if (!semi.ok) sum << "warning: support does not generate a group as a semigroup within " << semi.bound << " steps\n";
  art.results["semigroup_ok"] = semi.ok;
  const auto set = [&] { return orbit_set(space, cfg.text("set", "a"), cfg.text("set_translate", "1")); };

  if (est == "linear_progress") {
    add_curve(art, sum, estimate_linear_progress(mu, space, x0, l, cfg.integers("n_list", {20, 28, 36, 44, 52, 60, 68, 76, 84, 92, 100}), opts));
  } else if (est == "distance") {
    KernelSpec ks;
    ks.steps = static_cast<int>(cfg.integer("kernel_steps", 0));
    ks.n = static_cast<int>(cfg.integer("kernel_n", 1));
    ks.r = r;
    const auto rep = estimate_distance_from_D(mu, space, x0, set(), l, cfg.integers("n_list", {10, 20, 30, 40}), opts, ks);
    add_curve(art, sum, rep.curve);
    if (ks.steps > 0) {
      art.files["kernels.csv"] = kernel_csv(rep.kernels);
      art.results["history_gap"] = rep.kernels.history_gap;
      sum << "history_gap " << fmt(rep.kernels.history_gap) << "\n";
    }
  } else if (est == "escape") {
    const Word g = Word::parse(cfg.text("start", "1"), rank);
    const auto rep = estimate_escape(mu, space, x0, set(), g, r, cfg.integers("n_list", {1, 2, 4, 8}), opts);
    add_curve(art, sum, rep.escaped);
    add_curve(art, sum, rep.first_level);
    art.results["eps_hat"] = rep.eps_hat;
    sum << "eps_hat " << fmt(rep.eps_hat) << "\n";
  } else if (est == "backtrack") {
    const Word g = Word::parse(cfg.text("start", "b^4"), rank);
    const int n = static_cast<int>(cfg.integer("n", 4));
    const auto rep = estimate_backtrack(mu, space, x0, set(), g, r, n, opts);
    DecayReport exc;
    exc.name = "backtrack";
    exc.points = rep.exceedance;
    art.files["backtrack.csv"] = exc.to_csv();
    std::ostringstream law;
    law << "state,probability\n";
    for (const auto& [s, w] : rep.distribution) law << s << ',' << fmt(w) << '\n';
    art.files["backtrack_law.csv"] = law.str();
    art.results["t"] = rep.t;
    art.results["q_hat"] = rep.q_hat;
    art.results["q_upper"] = rep.q_upper;
    art.results["max_feasible_r"] = rep.max_feasible_r;
    sum << "t=" << rep.t << " q_hat=" << fmt(rep.q_hat) << " q_upper=" << fmt(rep.q_upper) << "\n";
  } else if (est == "splitting") {
    const auto dp = orbit_set(space, cfg.text("set_p", "b"), "1");
    const auto rep = estimate_splitting_distance(mu, space, x0, set(), dp, l, cfg.integers("n_list", {8, 16, 24, 32}), opts);
    add_curve(art, sum, rep.curve);
    add_curve(art, sum, rep.initial_segment);
    add_curve(art, sum, rep.final_segment);
    add_curve(art, sum, rep.gromov);
    art.results["uncovered"] = rep.uncovered;
  } else {
    throw ConfigError("estimator must be one of linear_progress, distance, escape, backtrack, splitting");
  }
  art.summary = sum.str();
  return art;
}

// ---- geom ----

RunArtifacts run_geom(const ExperimentConfig& cfg) {
  RunArtifacts art;
  const std::string which = cfg.text("check", "one");
  if (which != "one" && which != "two") throw ConfigError("check must be 'one' or 'two'");
  const std::string kind = cfg.text("space", "tree");
  CheckReport total;
  std::ostringstream sum;
  if (kind == "tree") {
    const int rank = static_cast<int>(cfg.integer("rank", 2));
    const auto space = ModelSpace::free_group_tree(rank);
    const CoarseConstants c{cfg.number("const_a", 1), cfg.number("const_b", 0), cfg.number("const_c", 0)};
    const auto d = orbit_set(space, cfg.text("set", "a"), cfg.text("set_translate", "1"));
    const auto ball = tree_ball(rank, Word{}, static_cast<int>(cfg.integer("radius", 6)));
    if (which == "one") {
      for (const Word& y : ball) {
        for (const Word& z : ball) total.absorb(check_one_quasiconvex(space, d, y, z, c));
      }
    } else {
      const auto e = orbit_set(space, cfg.text("set_p", "a"), cfg.text("set_p_translate", "bbb"));
      for (const Word& y : ball) total.absorb(check_two_quasiconvex(space, d, e, y, c));
    }
    sum << "geom tree rank=" << rank << " ball radius " << cfg.integer("radius", 6) << " (" << ball.size()
        << " points)\n";
  } else if (kind == "plane") {
    const auto space = ModelSpace::half_plane(1.0);
    const CoarseConstants c{cfg.number("const_a", 4), cfg.number("const_b", 8), cfg.number("const_c", 4)};
    SampleSpec spec;
    spec.count = static_cast<std::size_t>(cfg.integer("count", 1000));
    spec.seed = stage_seed(static_cast<std::uint64_t>(cfg.integer("seed", 1)), 1);
    const auto pts = sample_points(space, spec);
    const auto d = QuasiconvexSet::geodesic_line(space, -1.0, 1.0);
    if (which == "one") {
      for (std::size_t i = 0; i < pts.size(); ++i) {
        total.absorb(check_one_quasiconvex(space, d, pts[i], pts[(i + 1) % pts.size()], c, 3.0));
      }
    } else {
      // y between the two semicircles, where the hypothesis can hold.
      const double big = std::exp(10.0);
      const auto e = QuasiconvexSet::geodesic_line(space, -big, big);
      auto gen = trial_rng(spec.seed, 0);
      for (std::size_t i = 0; i < spec.count; ++i) {
        const double rad = std::exp(4.0 + 2.0 * uniform01(gen));
        const double theta = 0.05 + uniform01(gen) * (std::numbers::pi - 0.1);
        total.absorb(check_two_quasiconvex(space, d, e, HPoint{rad * std::cos(theta), rad * std::sin(theta)}, c, 3.0));
      }
    }
    sum << "geom half-plane delta=1, " << spec.count << " sampled points\n";
  } else {
    throw ConfigError("space must be 'tree' or 'plane'");
  }
  total.finish();
  std::ostringstream csv;
  csv << "check,checked,hypothesis_met,violations,worst_margin,verdict\n"
      << which << ',' << total.checked << ',' << total.hypothesis_met << ',' << total.violations << ','
      << (std::isfinite(total.worst_margin) ? fmt(total.worst_margin) : "") << ',' << to_string(total.verdict) << '\n';
  art.files["geom.csv"] = csv.str();
  art.results["check"] = check_json(total);
  sum << which << " quasiconvex check: " << total.summary() << "\n";
  art.summary = sum.str();
  if (!total.ok()) fail(art, 4, "coarse-geometry check reported violations");
  return art;
}

// ---- shadow ----

RunArtifacts run_shadow(const ExperimentConfig& cfg) {
  RunArtifacts art;
  const int rank = static_cast<int>(cfg.integer("rank", 2));
  const auto space = ModelSpace::free_group_tree(rank);
  const auto mu = StepDistribution::simple_random_walk(rank);
  const int d_min = static_cast<int>(cfg.integer("d_min", 2));
  const int d_max = static_cast<int>(cfg.integer("d_max", 8));
  if (d_max < d_min) throw ConfigError("d_max must be >= d_min");
  std::vector<Point> targets;
  for (int d = d_min; d <= d_max; ++d) {
    Word w;
    for (int i = 0; i < d; ++i) w.append(static_cast<Letter>(1 + i % std::min(rank, 2)));
    targets.emplace_back(w);
  }
  const auto opts = mc_options(cfg, 100000, 1);
  const int n = static_cast<int>(cfg.integer("n", 30));
  const auto rep = estimate_shadow_rate(mu, space, space.basepoint(), targets, cfg.number("r", 0.0), n, opts);
  std::ostringstream sum;
  sum << "shadow rate rank=" << rank << " n=" << n << " targets d=" << d_min << ".." << d_max << "\n";
  add_curve(art, sum, rep);
  art.summary = sum.str();
  return art;
}

// ---- casson ----

struct CrossoverArgs {
  double k = 0, c = 0, c0 = 0;
};

CrossoverArgs parse_crossover(const std::string& text) {
  std::map<std::string, double> kv;
  for (const auto& part : split(text, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw ConfigError("crossover expects K=..,c=..,c0=.., got '" + text + "'");
    try {
      kv[part.substr(0, eq)] = parse_number(part.substr(eq + 1));
    } catch (const std::invalid_argument&) {
      throw ConfigError("bad number in crossover '" + part + "'");
    }
  }
  if (kv.size() != 3 || !kv.count("K") || !kv.count("c") || !kv.count("c0")) {
    throw ConfigError("crossover expects exactly K, c and c0");
  }
  return {kv["K"], kv["c"], kv["c0"]};
}

RunArtifacts run_casson(const ExperimentConfig& cfg) {
  RunArtifacts art;
  std::ostringstream sum;
  if (cfg.has("crossover")) {
    const auto a = parse_crossover(cfg.text("crossover", ""));
    const auto first = existence_crossover(a.k, a.c, a.c0);
    const auto sustained = sustained_crossover(a.k, a.c, a.c0);
    art.results["existence_crossover"] = first;
    art.results["sustained_crossover"] = sustained;
    sum << "existence_crossover " << first << "\nsustained_crossover " << sustained << "\n";
    art.files["crossover.csv"] = "K,c,c0,existence,sustained\n" + fmt(a.k) + "," + fmt(a.c) + "," + fmt(a.c0) + "," +
                                 std::to_string(first) + "," + std::to_string(sustained) + "\n";
    art.console = std::to_string(first) + "\n";
    art.summary = sum.str();
    return art;
  }
  const SurgeryKnot knot{"k", cfg.integer("knot_h", 1)};
  const auto m_min = cfg.integer("m_min", -10);
  const auto m_max = cfg.integer("m_max", 10);
  if (m_max < m_min) throw ConfigError("m_max must be >= m_min");
  std::ostringstream csv;
  csv << "m,lambda\n";
  for (auto m = m_min; m <= m_max; ++m) csv << m << ',' << casson_surgery(knot, m).lambda << '\n';
  art.files["surgery.csv"] = csv.str();
  const int hit_n = static_cast<int>(cfg.integer("hit_n", 400));
  const auto hit = z_walk_hit_prob({{-1, 0.25}, {0, 0.5}, {1, 0.25}}, hit_n, 0, true);
  art.results["hit_probability"] = hit.probability;
  art.results["c_lower"] = hit.c_lower;
  sum << "surgery h=" << knot.half_second_derivative << " m=" << m_min << ".." << m_max << " (surgery.csv)\n"
      << "lazy walk P(S_" << hit_n << " = 0) = " << fmt(hit.probability) << ", c_lower = " << fmt(hit.c_lower) << "\n";
  art.summary = sum.str();
  return art;
}

}  // namespace

// ---- schema ----

const std::vector<std::string>& experiment_kinds() { return kAllKinds; }

const std::vector<ConfigKey>& config_schema() {
  using V = ValueType;
  static const std::vector<ConfigKey> schema{
      {"schema_version", V::Integer, {}, "configuration schema version (1)", 1},
      {"kind", V::Text, {}, "chain | walk | geom | shadow | casson | pipeline", {}},
      {"seed", V::Integer, {}, "master seed", 0},
      {"strict", V::Boolean, {}, "turn soft warnings into failures", {}},
      {"trials", V::Integer, {"walk", "shadow", "pipeline"}, "Monte Carlo trials", 1},
      {"enumerate", V::Boolean, {"walk", "shadow"}, "exact path enumeration instead of sampling", {}},
      {"eps", V::Number, {"chain"}, "chain escape probability", {}},
      {"q", V::Number, {"chain"}, "chain backtracking constant", {}},
      {"n", V::Integer, {"chain", "walk", "shadow"}, "number of steps", 0},
      {"truncation", V::Integer, {"chain"}, "largest chain state", 1},
      {"exploratory", V::Boolean, {"chain"}, "allow q in [1/4, 1/2) without a certificate", {}},
      {"kmax", V::Integer, {"chain", "pipeline"}, "states checked by the certificate", 0},
      {"rho_n", V::Integer, {"chain", "pipeline"}, "return time for the spectral estimate", 1},
      {"estimator", V::Text, {"walk"}, "linear_progress | distance | escape | backtrack | splitting", {}},
      {"rank", V::Integer, {"walk", "geom", "shadow"}, "free group rank", 1},
      {"steps", V::Text, {"walk"}, "comma-separated support words (default: simple random walk)", {}},
      {"weights", V::Text, {"walk"}, "comma-separated weights matching steps", {}},
      {"l", V::Number, {"walk", "pipeline"}, "linear rate L", 0},
      {"n_list", V::IntegerList, {"walk", "pipeline"}, "step counts, e.g. 20,28 or 20:100:8", 0},
      {"set", V::Text, {"walk", "geom"}, "generators of D, comma-separated", {}},
      {"set_translate", V::Text, {"walk", "geom"}, "left translate of D", {}},
      {"set_p", V::Text, {"walk", "geom"}, "generators of the second set", {}},
      {"set_p_translate", V::Text, {"geom"}, "left translate of the second set", {}},
      {"start", V::Text, {"walk"}, "group element g for escape/backtrack", {}},
      {"r", V::Number, {"walk", "shadow"}, "band width R (shadow radius for shadow)", 0},
      {"kernel_n", V::Integer, {"walk"}, "walk steps per chain step", 1},
      {"kernel_steps", V::Integer, {"walk", "pipeline"}, "chain steps observed", 0},
      {"space", V::Text, {"geom"}, "tree | plane", {}},
      {"check", V::Text, {"geom"}, "one | two", {}},
      {"radius", V::Integer, {"geom"}, "tree ball radius", 0},
      {"count", V::Integer, {"geom"}, "half-plane sample count", 1},
      {"const_a", V::Number, {"geom"}, "additive constant A", {}},
      {"const_b", V::Number, {"geom"}, "additive constant B", {}},
      {"const_c", V::Number, {"geom"}, "additive constant C", {}},
      {"d_min", V::Integer, {"shadow"}, "smallest target distance", 1},
      {"d_max", V::Integer, {"shadow"}, "largest target distance", 1},
      {"crossover", V::Text, {"casson"}, "K=..,c=..,c0=..", {}},
      {"knot_h", V::Integer, {"casson"}, "Delta''(1)/2 of the knot", {}},
      {"m_min", V::Integer, {"casson"}, "smallest surgery coefficient", {}},
      {"m_max", V::Integer, {"casson"}, "largest surgery coefficient", {}},
      {"hit_n", V::Integer, {"casson"}, "steps for the lazy-walk return probability", 0},
      {"calibration_trials", V::Integer, {"pipeline"}, "trials per calibration start", 1},
      {"r_max", V::Integer, {"pipeline"}, "largest R in the calibration grid", 1},
      {"n_max", V::Integer, {"pipeline"}, "largest N in the calibration grid", 1},
      {"q_override", V::Number, {"pipeline"}, "replace the calibrated q_hat", 0},
      {"c0", V::Number, {"pipeline"}, "visit constant (default: lazy walk at n = 400)", 0},
      {"genus", V::Integer, {"pipeline"}, "Heegaard genus g", 1},
  };
  return schema;
}

std::int64_t ExperimentConfig::integer(const std::string& key, std::int64_t fallback) const {
  return has(key) ? values.at(key).get<std::int64_t>() : fallback;
}
double ExperimentConfig::number(const std::string& key, double fallback) const {
  return has(key) ? values.at(key).get<double>() : fallback;
}
bool ExperimentConfig::boolean(const std::string& key, bool fallback) const {
  return has(key) ? values.at(key).get<bool>() : fallback;
}
std::string ExperimentConfig::text(const std::string& key, const std::string& fallback) const {
  return has(key) ? values.at(key).get<std::string>() : fallback;
}
std::vector<int> ExperimentConfig::integers(const std::string& key, const std::vector<int>& fallback) const {
  return has(key) ? values.at(key).get<std::vector<int>>() : fallback;
}

json parse_config_text(const std::string& text) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw ConfigError("invalid configuration:\n  empty config: expected a JSON object with at least "
                      "'schema_version' and 'kind'");
  }
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid configuration:\n  not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("invalid configuration:\n  top level must be a JSON object");
  validate_values(doc);
  return doc;
}

ExperimentConfig build_config(const std::optional<json>& document, const std::map<std::string, std::string>& flags) {
  ExperimentConfig cfg;
  if (document) {
    cfg.values = *document;
  } else {
    cfg.values["schema_version"] = kSchemaVersion;
  }
  for (const auto& [name, text] : flags) {
    const ConfigKey* key = find_key(name);
    if (key == nullptr) throw ConfigError("invalid configuration:\n  unknown key '" + name + "'");
    cfg.values[name] = convert_flag(*key, text);
  }
  validate_values(cfg.values);
  return cfg;
}

// ---- pipeline ----

PipelineResult run_pipeline(const ExperimentConfig& cfg) {
  PipelineResult res;
  RunArtifacts& art = res.artifacts;
  std::ostringstream sum;
  const auto finish = [&] { art.summary = sum.str() + art.summary; };
  const auto seed = static_cast<std::uint64_t>(cfg.integer("seed", 1));
  const auto space = ModelSpace::free_group_tree(2);
  const auto mu = StepDistribution::simple_random_walk(2);
  const Point x0 = space.basepoint();
  const auto d = QuasiconvexSet::axis(space, Word::parse("a", 2));
  const auto dp = QuasiconvexSet::axis(space, Word::parse("b", 2));
  const double l = cfg.number("l", 0.25);
  sum << "pipeline: simple random walk on F2, D = <a>, D' = <b>, seed " << seed << "\n";

  // Calibration.
  CalibrationOptions co;
  co.trials = static_cast<std::uint64_t>(cfg.integer("calibration_trials", 20000));
  co.seed = stage_seed(seed, 1);
  co.workers = cfg.workers;
  co.r_max = static_cast<int>(cfg.integer("r_max", 8));
  co.n_max = static_cast<int>(cfg.integer("n_max", 32));
  res.calibration = calibrate(mu, space, x0, d, Word::parse("b", 2), co);
  art.files["calibration.csv"] = res.calibration.to_csv();
  art.results["calibration"] = {{"found", res.calibration.found},
                                {"R", res.calibration.r},
                                {"N", res.calibration.n},
                                {"eps_hat", res.calibration.eps_hat},
                                {"q_hat", res.calibration.q_hat}};
  if (!res.calibration.found) {
    fail(art, 3, "calibration found no (R, N) with eps_hat > 0 and q_hat < 1/4");
    finish();
    return res;
  }
  double q = res.calibration.q_hat;
  if (cfg.has("q_override")) {
    q = cfg.number("q_override", q);
    art.results["q_override"] = q;
  }
  sum << "calibration: R=" << res.calibration.r << " N=" << res.calibration.n
      << " eps_hat=" << fmt(res.calibration.eps_hat) << " q_hat=" << fmt(q) << "\n";
  if (q >= 0.25) {
    fail(art, 4, "q_hat = " + fmt(q) + " >= 1/4: no certificate");
    finish();
    return res;
  }

  // Domination of the phi process by the chain.
  const int kernel_steps = static_cast<int>(cfg.integer("kernel_steps", 64));
  res.chain.eps = res.calibration.eps_hat;
  res.chain.q = q;
  res.chain.truncation = std::max(1001, kernel_steps + 1);
  res.chain.validate();
  KernelSpec ks;
  ks.r = res.calibration.r;
  ks.n = res.calibration.n;
  ks.steps = kernel_steps;
  for (int t : {16, 32, 64}) {
    if (t <= kernel_steps) ks.record_times.push_back(t);
  }
  const auto dom_opts = mc_options(cfg, 100000, 2);
  const auto dist = estimate_distance_from_D(mu, space, x0, d, l, {kernel_steps * ks.n}, dom_opts, ks);
  res.kernel_check = check_kernel_domination(dist.kernels.all, res.chain, {500.0, 3.0});
  art.files["kernels.csv"] = kernel_csv(dist.kernels);
  std::ostringstream dom;
  dom << "time,state,empirical_cdf,empirical_lower,chain_cdf\n";
  bool cdf_ok = true;
  const auto laws = n_step_distributions(res.chain, kernel_steps);
  for (int t : ks.record_times) {
    CdfComparison cmp;
    cmp.n = t;
    cmp.worst_excess = -1.0;
    const auto& law = dist.state_laws.at(t);
    const double total = static_cast<double>(dom_opts.trials);
    double below = 0.0;
    const int top = law.empty() ? 0 : law.rbegin()->first;
    for (int s = 0; s <= top; ++s) {
      if (const auto it = law.find(s); it != law.end()) below += it->second;
      const double lower = wilson_interval(below, total, 3.0).lo;
      const double chain_cdf = laws[static_cast<std::size_t>(t)].cdf(s);
      cmp.worst_excess = std::max(cmp.worst_excess, lower - chain_cdf);
      dom << t << ',' << s << ',' << fmt(below / total) << ',' << fmt(lower) << ',' << fmt(chain_cdf) << '\n';
    }
    cmp.passed = cmp.worst_excess <= 1e-12;
    cdf_ok = cdf_ok && cmp.passed;
    res.cdf.push_back(cmp);
  }
  art.files["domination.csv"] = dom.str();
  art.results["kernel_domination"] = check_json(res.kernel_check);
  art.results["history_gap"] = dist.kernels.history_gap;
  json cdf_json = json::array();
  for (const auto& c : res.cdf) cdf_json.push_back({{"n", c.n}, {"worst_excess", c.worst_excess}, {"passed", c.passed}});
  art.results["cdf_domination"] = cdf_json;
  sum << "kernel domination: " << res.kernel_check.summary() << "\n";
  for (const auto& c : res.cdf) {
    sum << "CDF domination at n=" << c.n << ": " << (c.passed ? "pass" : "FAIL") << " (worst excess "
        << fmt(c.worst_excess) << ")\n";
  }
  if (!res.kernel_check.ok() || !cdf_ok) {
    fail(art, 4, "chain does not dominate the observed process");
    finish();
    return res;
  }

  // Certificate.
  res.rho_bound = spectral_radius_bound(res.chain);
  res.certificate = check_superharmonic(res.chain, res.rho_bound, static_cast<int>(cfg.integer("kmax", 10000)));
  res.rho_estimate = estimate_spectral_radius(res.chain, static_cast<int>(cfg.integer("rho_n", 400)));
  art.results["certificate"] = check_json(res.certificate);
  art.results["rho_bound"] = res.rho_bound;
  art.results["rho_estimate"] = res.rho_estimate;
  sum << "certificate at t=" << fmt(res.rho_bound) << ": " << res.certificate.summary()
      << "; rho estimate " << fmt(res.rho_estimate) << "\n";
  if (!res.certificate.ok()) {
    fail(art, 4, "superharmonic certificate failed");
    finish();
    return res;
  }
  // Smallest A with P(Y_n <= L n) <= L n A^(L n) rho^n at the recorded times.
  double a_hat = 1.0;
  for (int t : ks.record_times) {
    const double ln = l * t;
    const double p = laws[static_cast<std::size_t>(t)].cdf(static_cast<int>(std::floor(ln)));
    if (ln > 0.0 && p > 0.0) {
      a_hat = std::max(a_hat, std::exp((std::log(p) - std::log(ln) - t * std::log(res.rho_bound)) / ln));
    }
  }
  art.results["tail_constant_A"] = a_hat;
  if (!ks.record_times.empty()) {
    const int t = ks.record_times.back();
    art.results["tail_bound"] = tail_bound(a_hat, res.rho_bound, l, t).value;
  }

  // Splitting-distance decay.
  const auto n_list = cfg.integers("n_list", {8, 12, 16, 20, 24, 28, 32, 36, 40});
  res.splitting = estimate_splitting_distance(mu, space, x0, d, dp, l, n_list, mc_options(cfg, 100000, 3));
  for (const auto* r : {&res.splitting.curve, &res.splitting.initial_segment, &res.splitting.final_segment,
                        &res.splitting.gromov}) {
    art.files[r->name + ".csv"] = r->to_csv();
    art.results["splitting"][r->name] = fit_json(*r);
  }
  art.results["splitting"]["uncovered"] = res.splitting.uncovered;
  sum << fit_line(res.splitting.curve) << "\n";
  const auto& fit = res.splitting.curve.fit;
  if (!fit || !(fit->c > 0.0) || !(fit->c < 1.0)) {
    fail(art, 3, "splitting-distance curve has no decaying exponential fit");
    finish();
    return res;
  }
  res.fitted_k = fit->K;
  res.fitted_c = fit->c;

  // Thresholds.
  const auto g = cfg.integer("genus", 2);
  if (!(l > 0.0)) throw ConfigError("pipeline needs l > 0");
  int tn = 1;
  while (std::floor(l * tn) <= 2.0 * static_cast<double>(g)) ++tn;
  res.threshold_n = tn;
  res.thresholds = genus_threshold_check(static_cast<std::int64_t>(std::floor(l * tn)), g);
  art.results["threshold"] = {{"genus", g},
                              {"n", tn},
                              {"hyperbolic", res.thresholds.hyperbolic},
                              {"genus_exactly_g", res.thresholds.genus_exactly_g}};
  sum << "thresholds: for n >= " << tn << ", distance > L n > 2g = " << 2 * g << " except with probability K c^n\n";

  // Crossover.
  res.c0 = cfg.has("c0") ? cfg.number("c0", 0.0)
                         : z_walk_hit_prob({{-1, 0.25}, {0, 0.5}, {1, 0.25}}, 400, 0, true).c_lower;
  res.first_crossover = existence_crossover(res.fitted_k, res.fitted_c, res.c0);
  res.n_star = sustained_crossover(res.fitted_k, res.fitted_c, res.c0);
  std::ostringstream verdict;
  verdict << "for all n >= " << res.n_star << ", c0/sqrt(n) > K c^n with K=" << fmt(res.fitted_k)
          << " c=" << fmt(res.fitted_c) << " c0=" << fmt(res.c0);
  res.verdict = verdict.str();
  art.results["c0"] = res.c0;
  art.results["first_crossover"] = res.first_crossover;
  art.results["n_star"] = res.n_star;
  art.results["verdict"] = res.verdict;
  std::ostringstream diag;
  diag << "quantity,value\n"
       << "R," << res.calibration.r << "\nN," << res.calibration.n << "\neps_hat," << fmt(res.chain.eps)
       << "\nq_hat," << fmt(res.chain.q) << "\nrho_bound," << fmt(res.rho_bound) << "\nrho_estimate,"
       << fmt(res.rho_estimate) << "\ntail_constant_A," << fmt(art.results["tail_constant_A"].get<double>())
       << "\nhistory_gap," << fmt(dist.kernels.history_gap) << "\nK," << fmt(res.fitted_k)
       << "\nc," << fmt(res.fitted_c) << "\nc0," << fmt(res.c0) << "\nthreshold_n," << tn << "\nfirst_crossover,"
       << res.first_crossover << "\nn_star," << res.n_star << "\n";
  art.files["diagnostics.csv"] = diag.str();
  sum << "crossover: first n = " << res.first_crossover << ", n* = " << res.n_star << "\n";
  sum << "verdict: " << res.verdict << "\n";
  finish();
  return res;
}

RunArtifacts run_experiment(const ExperimentConfig& config) {
  const std::string kind = config.kind();
  try {
    if (kind == "chain") return run_chain(config);
    if (kind == "walk") return run_walk(config);
    if (kind == "geom") return run_geom(config);
    if (kind == "shadow") return run_shadow(config);
    if (kind == "casson") return run_casson(config);
    if (kind == "pipeline") return run_pipeline(config).artifacts;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid configuration:\n  ") + e.what());
  } catch (const std::exception& e) {
    throw EstimatorError(e.what());
  }
  throw ConfigError("unknown kind '" + kind + "'");
}

json make_manifest(const ExperimentConfig& config, const RunArtifacts& artifacts) {
  json files = json::array();
  for (const auto& [name, body] : artifacts.files) files.push_back(name);
  return {{"tool", "hyperwalk"},
          {"version", kToolVersion},
          {"schema_version", kSchemaVersion},
          {"config", config.values},
          {"seed", config.integer("seed", 1)},
          {"files", files},
          {"status", artifacts.status},
          {"failure", artifacts.failure},
          {"results", artifacts.results}};
}

void write_artifacts(const std::filesystem::path& dir, const ExperimentConfig& config, const RunArtifacts& artifacts) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  const auto put = [&](const std::string& name, const std::string& body) {
    std::ofstream os(dir / name, std::ios::binary);
    os << body;
    if (!os) throw ConfigError("cannot write " + (dir / name).string());
  };
  put("manifest.json", make_manifest(config, artifacts).dump(2) + "\n");
  put("summary.txt", artifacts.summary);
  for (const auto& [name, body] : artifacts.files) put(name, body);
}

int run_and_report(const std::optional<json>& document, const std::map<std::string, std::string>& flags,
                   unsigned workers, const std::string& out, std::ostream& log, std::ostream& err) {
  try {
    ExperimentConfig cfg = build_config(document, flags);
    cfg.workers = std::max(1u, workers);
    cfg.out = out;
    const RunArtifacts art = run_experiment(cfg);
    if (!out.empty()) write_artifacts(out, cfg, art);
    log << (art.console.empty() ? art.summary : art.console);
    if (art.status != 0) err << "error: " << art.failure << "\n";
    return art.status;
  } catch (const ConfigError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const CertificateError& e) {
    err << "certificate failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    err << "estimator failure: " << e.what() << "\n";
    return 3;
  }
}

int report_run(const std::filesystem::path& dir, std::ostream& log, std::ostream& err) {
  std::ifstream ms(dir / "manifest.json");
  if (!ms) {
    err << "no manifest.json in " << dir.string() << "\n";
    return 2;
  }
  json manifest;
  try {
    manifest = json::parse(ms);
  } catch (const json::parse_error& e) {
    err << "unreadable manifest: " << e.what() << "\n";
    return 2;
  }
  int missing = 0;
  for (const auto& f : manifest.value("files", json::array())) {
    if (!std::filesystem::exists(dir / f.get<std::string>())) {
      err << "missing artifact " << f.get<std::string>() << "\n";
      ++missing;
    }
  }
  std::ifstream ss(dir / "summary.txt");
  std::ostringstream summary;
  summary << ss.rdbuf();
  log << "kind " << manifest["config"].value("kind", "?") << ", seed " << manifest.value("seed", 0) << ", version "
      << manifest.value("version", "?") << ", status " << manifest.value("status", 0) << "\n"
      << summary.str();
  return missing > 0 ? 2 : 0;
}

}  // namespace hyperwalk
