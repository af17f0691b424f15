#include "hyperwalk/qconvex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include "hyperwalk/geometry_detail.hpp"

namespace hyperwalk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// ---- half-plane subgroup orbits -------------------------------------------

struct OrbitElement {
  Mobius map;
  HPoint point;
  int depth;
};

// Breadth-first enumeration of translate . H . x0 over reduced words in the
// subgroup generators, up to kHalfPlaneOrbitDepth.
std::vector<OrbitElement> enumerate_half_plane_orbit(const ModelSpace& space, const SubgroupOrbit& orbit) {
  std::vector<Mobius> gens;
  for (const Word& g : orbit.generators) {
    gens.push_back(space.isometry(g));
    gens.push_back(space.isometry(g).inverse());
  }
  const Mobius t = space.isometry(orbit.translate);
  const HPoint x0{0.0, 1.0};
  std::vector<OrbitElement> out{{t, t.apply(x0), 0}};
  // (element, index of last generator used) for reduced-word expansion.
  std::vector<std::pair<Mobius, int>> frontier{{Mobius::identity(), -1}};
  for (int depth = 1; depth <= kHalfPlaneOrbitDepth && !gens.empty(); ++depth) {
    std::vector<std::pair<Mobius, int>> next;
    for (const auto& [m, last] : frontier) {
      for (int gi = 0; gi < static_cast<int>(gens.size()); ++gi) {
        if (last >= 0 && (gi ^ 1) == last) continue;
        const Mobius nm = m * gens[static_cast<std::size_t>(gi)];
        next.emplace_back(nm, gi);
        const Mobius full = t * nm;
        out.push_back({full, full.apply(x0), depth});
      }
    }
    frontier = std::move(next);
  }
  return out;
}

double max_generator_displacement(const ModelSpace& space, const SubgroupOrbit& orbit) {
  double m = 0.0;
  const HPoint x0{0.0, 1.0};
  for (const Word& g : orbit.generators) m = std::max(m, hyperbolic_distance(x0, space.isometry(g).apply(x0)));
  return m;
}

std::vector<HPoint> half_plane_orbit_ball(const ModelSpace& space, const SubgroupOrbit& orbit, const HPoint& c,
                                          double radius) {
  const auto elements = enumerate_half_plane_orbit(space, orbit);
  const double reach = max_generator_displacement(space, orbit);
  std::vector<HPoint> pts;
  for (const auto& e : elements) {
    const double d = hyperbolic_distance(c, e.point);
    if (d <= radius + detail::kGeomTol) pts.push_back(e.point);
    if (e.depth == kHalfPlaneOrbitDepth && !orbit.generators.empty() && d <= radius + reach) {
      throw SearchExhausted("half-plane orbit search reached depth " + std::to_string(kHalfPlaneOrbitDepth) +
                            " inside search radius " + std::to_string(radius));
    }
  }
  return pts;
}

Projection project_half_plane_orbit(const ModelSpace& space, const SubgroupOrbit& orbit, double q_const,
                                    const HPoint& y) {
  const auto elements = enumerate_half_plane_orbit(space, orbit);
  double seed = kInf;
  for (const auto& e : elements) {
    if (e.depth <= 1) seed = std::min(seed, hyperbolic_distance(y, e.point));
  }
  const double radius = seed + 2.0 * q_const + 2.0 * space.delta();
  const auto ball = half_plane_orbit_ball(space, orbit, y, radius);
  Projection best{HPoint{}, kInf};
  for (const auto& p : ball) {
    const double d = hyperbolic_distance(y, p);
    if (d < best.distance) best = {p, d};
  }
  return best;
}

// ---- geodesic lines ---------------------------------------------------------

Projection project_to_line(const GeodesicLine& line, const HPoint& y) {
  const Mobius m = detail::line_to_axis(line.from, line.to);
  const HPoint w = m.apply(y);
  const double r = std::hypot(w.re, w.im);
  const HPoint foot = m.inverse().apply(HPoint{0.0, r});
  return {foot, std::asinh(std::abs(w.re) / w.im)};
}

double line_line_distance(const GeodesicLine& a, const GeodesicLine& b) {
  const Mobius m = detail::line_to_axis(a.from, a.to);
  const double u = m.apply_ideal(b.from);
  const double v = m.apply_ideal(b.to);
  auto at_end = [](double x) { return std::isinf(x) || std::abs(x) < 1e-300; };
  if (at_end(u) || at_end(v)) return 0.0;  // asymptotic
  if ((u < 0.0) != (v < 0.0)) return 0.0;  // crossing
  const double au = std::abs(u);
  const double av = std::abs(v);
  return std::acosh((au + av) / std::abs(au - av));
}

// ---- tree orbits ------------------------------------------------------------

struct TreeOrbitView {
  const SubgroupGraph& graph;
  const Word& translate;
};

Projection project_tree_orbit(const TreeOrbitView& o, const Word& y) {
  const Word local = o.translate.inverse() * y;
  int end = 0;
  const std::size_t j = o.graph.readable_prefix(local, &end);
  const double d = static_cast<double>(local.length() - j) + o.graph.distance_to_base(end);
  Word x = local.prefix(j) * o.graph.path_to_base(end);
  return {o.translate * x, d};
}

double distance_tree_orbit(const TreeOrbitView& o, const Word& y) {
  const Word local = o.translate.inverse() * y;
  int end = 0;
  const std::size_t j = o.graph.readable_prefix(local, &end);
  return static_cast<double>(local.length() - j) + o.graph.distance_to_base(end);
}

// d(H.1, u.K.1) for folded graphs of H and K.
double orbit_orbit_distance(const SubgroupGraph& h, const SubgroupGraph& k, const Word& u) {
  int end_h = 0;
  const std::size_t jd = h.readable_prefix(u, &end_h);
  const Word u_inv = u.inverse();
  int end_k = 0;
  const std::size_t je_len = k.readable_prefix(u_inv, &end_k);
  const std::size_t je = u.length() - je_len;  // first index of the geodesic inside hull(E)
  if (jd < je) {
    // Disjoint hulls joined by the bridge u[jd..je].
    return static_cast<double>(h.distance_to_base(end_h)) + static_cast<double>(je - jd) +
           static_cast<double>(k.distance_to_base(end_k));
  }
  // Hulls intersect; c = u.prefix(je) lies in both. Walk the fiber product
  // from c: each pair state is a point z of the intersection, and the best
  // orbit point of E whose entry into hull(D) is z sits along an edge leaving
  // hull(D) but staying in hull(E).
  int sh = 0;
  h.readable_prefix(u.prefix(je), &sh);
  const int sk = end_k;
  const int letters = 2 * h.rank();
  std::set<std::pair<int, int>> seen{{sh, sk}};
  std::queue<std::pair<int, int>> q;
  q.push({sh, sk});
  double best = kInf;
  while (!q.empty()) {
    const auto [a, b] = q.front();
    q.pop();
    double tail = (b == k.base()) ? 0.0 : kInf;
    for (int li = 0; li < letters; ++li) {
      const Letter l = letter_from_index(li);
      const int na = h.follow(a, l);
      const int nb = k.follow(b, l);
      if (nb == SubgroupGraph::kNone) continue;
      if (na == SubgroupGraph::kNone) {
        tail = std::min(tail, 1.0 + k.distance_to_base(nb));
      } else if (seen.insert({na, nb}).second) {
        q.push({na, nb});
      }
    }
    best = std::min(best, h.distance_to_base(a) + tail);
  }
  return best;
}

const HPoint& as_h(const Point& p) { return std::get<HPoint>(p); }
const Word& as_w(const Point& p) { return std::get<Word>(p); }

}  // namespace

QuasiconvexSet QuasiconvexSet::subgroup_orbit(const ModelSpace& space, std::vector<Word> generators, Word translate,
                                              std::optional<double> q_const) {
  QuasiconvexSet s;
  if (space.is_tree()) {
    for (const Word& g : generators) space.validate(g);
    space.validate(translate);
    s.graph_ = std::make_shared<const SubgroupGraph>(space.rank(), generators);
    int q = 0;
    for (int v = 0; v < s.graph_->vertex_count(); ++v) q = std::max(q, s.graph_->distance_to_base(v));
    s.q_const_ = q_const.value_or(static_cast<double>(q));
  } else {
    for (const Word& g : generators) {
      if (g.max_generator() > space.rank()) throw std::invalid_argument("orbit generator uses unknown Mobius generator");
    }
    if (!q_const) throw std::invalid_argument("half-plane subgroup orbits need an explicit q_const");
    s.q_const_ = *q_const;
  }
  s.rep_ = SubgroupOrbit{std::move(generators), std::move(translate)};
  return s;
}

QuasiconvexSet QuasiconvexSet::axis(const ModelSpace& space, const Word& generator, Word translate) {
  return subgroup_orbit(space, {generator}, std::move(translate));
}

QuasiconvexSet QuasiconvexSet::vertex_set(const ModelSpace& space, std::vector<Point> points, double q_const) {
  if (points.empty()) throw std::invalid_argument("explicit vertex set must be non-empty");
  for (const auto& p : points) space.validate(p);
  QuasiconvexSet s;
  s.rep_ = ExplicitVertexSet{std::move(points)};
  s.q_const_ = q_const;
  return s;
}

QuasiconvexSet QuasiconvexSet::geodesic_line(const ModelSpace& space, double from, double to) {
  if (space.is_tree()) throw std::invalid_argument("geodesic lines are only available in the half-plane");
  if (from == to || (std::isinf(from) && std::isinf(to)) || std::isnan(from) || std::isnan(to)) {
    throw std::invalid_argument("geodesic line needs two distinct ideal endpoints");
  }
  QuasiconvexSet s;
  s.rep_ = GeodesicLine{from, to};
  s.q_const_ = 0.0;
  return s;
}

const Word& QuasiconvexSet::translate() const {
  static const Word identity;
  if (const auto* o = std::get_if<SubgroupOrbit>(&rep_)) return o->translate;
  return identity;
}

QuasiconvexSet QuasiconvexSet::translated(const ModelSpace& space, const Word& g) const {
  QuasiconvexSet out = *this;
  std::visit(Overloaded{[&](SubgroupOrbit& o) { o.translate = g * o.translate; },
                        [&](ExplicitVertexSet& v) {
                          for (auto& p : v.points) p = space.act(g, p);
                        },
                        [&](GeodesicLine& l) {
                          const Mobius m = space.isometry(g);
                          l.from = m.apply_ideal(l.from);
                          l.to = m.apply_ideal(l.to);
                        }},
             out.rep_);
  return out;
}

std::string QuasiconvexSet::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{[&](const SubgroupOrbit& o) {
                          os << (o.translate.empty() ? "" : o.translate.str() + ".") << "<";
                          for (std::size_t i = 0; i < o.generators.size(); ++i) {
                            os << (i ? "," : "") << o.generators[i].str();
                          }
                          os << ">";
                        },
                        [&](const ExplicitVertexSet& v) { os << "{" << v.points.size() << " points}"; },
                        [&](const GeodesicLine& l) { os << "geodesic(" << l.from << "," << l.to << ")"; }},
             rep_);
  os << " Q=" << q_const_;
  return os.str();
}

bool contains(const ModelSpace& space, const QuasiconvexSet& set, const Point& p) {
  space.validate(p);
  if (set.is_tree_orbit()) return set.graph()->contains(set.translate().inverse() * as_w(p));
  if (const auto* v = std::get_if<ExplicitVertexSet>(&set.representation())) {
    for (const auto& q : v->points) {
      if (distance(space, p, q) <= detail::kGeomTol) return true;
    }
    return false;
  }
  return distance_to_set(space, set, p) <= detail::kGeomTol;
}

Projection project(const ModelSpace& space, const QuasiconvexSet& set, const Point& y) {
  space.validate(y);
  return std::visit(
      Overloaded{[&](const SubgroupOrbit& o) -> Projection {
                   if (set.is_tree_orbit()) return project_tree_orbit({*set.graph(), o.translate}, as_w(y));
                   return project_half_plane_orbit(space, o, set.q_const(), as_h(y));
                 },
                 [&](const ExplicitVertexSet& v) -> Projection {
                   Projection best{v.points.front(), kInf};
                   for (const auto& p : v.points) {
                     const double d = distance(space, p, y);
                     const bool better = space.is_tree()
                                             ? (d < best.distance || (d == best.distance && as_w(p) < as_w(best.point)))
                                             : d < best.distance;
                     if (better) best = {p, d};
                   }
                   return best;
                 },
                 [&](const GeodesicLine& l) -> Projection { return project_to_line(l, as_h(y)); }},
      set.representation());
}

double distance_to_set(const ModelSpace& space, const QuasiconvexSet& set, const Point& y) {
  if (set.is_tree_orbit()) return distance_tree_orbit({*set.graph(), set.translate()}, as_w(y));
  return project(space, set, y).distance;
}

double set_distance(const ModelSpace& space, const QuasiconvexSet& d, const QuasiconvexSet& e) {
  if (d.is_tree_orbit() && e.is_tree_orbit()) {
    return orbit_orbit_distance(*d.graph(), *e.graph(), d.translate().inverse() * e.translate());
  }
  if (const auto* v = std::get_if<ExplicitVertexSet>(&d.representation())) {
    double best = kInf;
    for (const auto& p : v->points) best = std::min(best, distance_to_set(space, e, p));
    return best;
  }
  if (std::holds_alternative<ExplicitVertexSet>(e.representation())) return set_distance(space, e, d);
  const auto* la = std::get_if<GeodesicLine>(&d.representation());
  const auto* lb = std::get_if<GeodesicLine>(&e.representation());
  if (la != nullptr && lb != nullptr) return line_line_distance(*la, *lb);
  throw std::invalid_argument("set_distance: unsupported pair " + d.describe() + " / " + e.describe());
}

std::vector<Point> members_near(const ModelSpace& space, const QuasiconvexSet& set, const Point& center,
                                double radius, std::size_t max_count, double line_step) {
  space.validate(center);
  std::vector<Point> out;
  auto push = [&](Point p) {
    if (out.size() >= max_count) {
      throw SearchExhausted("more than " + std::to_string(max_count) + " members within radius " +
                            std::to_string(radius));
    }
    out.push_back(std::move(p));
  };
  if (set.is_tree_orbit()) {
    const SubgroupGraph& g = *set.graph();
    const Word& t = set.translate();
    const Word c = t.inverse() * as_w(center);
    // Depth-first over readable reduced words, pruning once a prefix has
    // left the center's word and is already too far.
    Word cur;
    struct Frame {
      int vertex;
      int next_letter;
    };
    std::vector<Frame> stack{{g.base(), 0}};
    if (static_cast<double>(c.length()) <= radius) push(t * cur);
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next_letter >= 2 * g.rank()) {
        stack.pop_back();
        if (!cur.empty()) cur.pop_back();
        continue;
      }
      const Letter l = letter_from_index(f.next_letter++);
      if (!cur.empty() && cur.back() == -l) continue;
      const int nv = g.follow(f.vertex, l);
      if (nv == SubgroupGraph::kNone) continue;
      cur.append(l);
      const std::size_t cp = common_prefix(c, cur);
      const double lower = static_cast<double>(c.length() + cur.length() - 2 * cp);
      if (cp < cur.length() && lower > radius) {
        cur.pop_back();
        continue;
      }
      if (nv == g.base() && lower <= radius) push(t * cur);
      stack.push_back({nv, 0});
    }
    return out;
  }
  std::visit(Overloaded{[&](const SubgroupOrbit& o) {
                          for (const auto& p : half_plane_orbit_ball(space, o, as_h(center), radius)) push(p);
                        },
                        [&](const ExplicitVertexSet& v) {
                          for (const auto& p : v.points) {
                            if (distance(space, p, center) <= radius) push(p);
                          }
                        },
                        [&](const GeodesicLine& l) {
                          const Mobius m = detail::line_to_axis(l.from, l.to);
                          const HPoint w = m.apply(as_h(center));
                          const double h = std::asinh(std::abs(w.re) / w.im);
                          if (h > radius) return;
                          const double s0 = std::log(std::hypot(w.re, w.im));
                          const double span = std::acosh(std::cosh(radius) / std::cosh(h));
                          const Mobius back = m.inverse();
                          const auto steps = static_cast<long>(std::floor(span / line_step));
                          for (long i = -steps; i <= steps; ++i) {
                            push(back.apply(HPoint{0.0, std::exp(s0 + static_cast<double>(i) * line_step)}));
                          }
                        }},
             set.representation());
  return out;
}

}  // namespace hyperwalk
