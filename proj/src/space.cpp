#include "hyperwalk/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "hyperwalk/geometry_detail.hpp"

namespace hyperwalk {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Mobius Mobius::normalized(double a, double b, double c, double d) {
  const double det = a * d - b * c;
  if (!(det > 0.0)) throw std::invalid_argument("Mobius map must have positive determinant");
  const double s = 1.0 / std::sqrt(det);
  return {a * s, b * s, c * s, d * s};
}

Mobius Mobius::translation(double from, double to, double length) {
  if (!std::isfinite(from) || !std::isfinite(to) || from == to) {
    throw std::invalid_argument("translation axis needs two distinct finite endpoints");
  }
  const Mobius to_axis = detail::line_to_axis(from, to);
  const double e = std::exp(length / 2.0);
  const Mobius scale{e, 0.0, 0.0, 1.0 / e};
  return to_axis.inverse() * scale * to_axis;
}

HPoint Mobius::apply(const HPoint& z) const {
  const std::complex<double> w(z.re, z.im);
  const std::complex<double> num = a * w + b;
  const std::complex<double> den = c * w + d;
  const double n2 = std::norm(den);
  // det = 1 gives Im = Im(z) / |cz + d|^2 exactly.
  const double re = (num * std::conj(den)).real() / n2;
  return {re, z.im / n2};
}

double Mobius::apply_ideal(double x) const {
  if (std::isinf(x)) return c == 0.0 ? kInf : a / c;
  const double den = c * x + d;
  if (den == 0.0) return kInf;
  return (a * x + b) / den;
}

Mobius operator*(const Mobius& m, const Mobius& n) {
  return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c,
          m.c * n.b + m.d * n.d};
}

std::string to_string(const Point& p) {
  if (const auto* w = std::get_if<Word>(&p)) return w->str();
  const auto& h = std::get<HPoint>(p);
  std::ostringstream os;
  os.precision(17);
  os << "(" << h.re << "," << h.im << ")";
  return os.str();
}

ModelSpace ModelSpace::free_group_tree(int rank) {
  if (rank < 2 || rank > kMaxRank) throw std::invalid_argument("free group rank must be in [2, 26]");
  ModelSpace s;
  s.kind_ = SpaceKind::FreeGroupTree;
  s.rank_ = rank;
  s.delta_ = 0.0;
  return s;
}

ModelSpace ModelSpace::half_plane(double delta, std::vector<Mobius> generators) {
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be nonnegative");
  if (generators.size() > static_cast<std::size_t>(kMaxRank)) {
    throw std::invalid_argument("too many half-plane generators");
  }
  ModelSpace s;
  s.kind_ = SpaceKind::HalfPlane;
  s.rank_ = static_cast<int>(generators.size());
  s.delta_ = delta;
  s.generators_ = std::move(generators);
  return s;
}

Point ModelSpace::basepoint() const {
  if (is_tree()) return Word{};
  return HPoint{0.0, 1.0};
}

void ModelSpace::validate(const Point& p) const {
  if (is_tree()) {
    const auto* w = std::get_if<Word>(&p);
    if (w == nullptr) throw std::invalid_argument("tree points must be words");
    for (std::size_t i = 0; i < w->length(); ++i) {
      if (std::abs((*w)[i]) > rank_) throw std::invalid_argument("letter exceeds rank in " + w->str());
      if (i > 0 && (*w)[i] == -(*w)[i - 1]) throw std::invalid_argument("non-reduced word " + w->str());
    }
    return;
  }
  const auto* h = std::get_if<HPoint>(&p);
  if (h == nullptr) throw std::invalid_argument("half-plane points must be coordinates");
  if (!(h->im > 0.0) || !std::isfinite(h->re) || !std::isfinite(h->im)) {
    throw std::invalid_argument("half-plane point needs finite coordinates and im > 0");
  }
}

Mobius ModelSpace::isometry(const Word& g) const {
  if (is_tree()) throw std::logic_error("isometry() is only defined for the half-plane");
  Mobius m = Mobius::identity();
  for (Letter l : g.letters()) {
    const int idx = std::abs(l) - 1;
    if (idx >= rank_) throw std::invalid_argument("word uses generator without a Mobius image");
    m = m * (l > 0 ? generators_[static_cast<std::size_t>(idx)] : generators_[static_cast<std::size_t>(idx)].inverse());
  }
  return m;
}

Point ModelSpace::act(const Word& g, const Point& p) const {
  if (is_tree()) return g * std::get<Word>(p);
  return isometry(g).apply(std::get<HPoint>(p));
}

std::string ModelSpace::describe() const {
  std::ostringstream os;
  if (is_tree()) {
    os << "FreeGroupTree(rank=" << rank_ << ")";
  } else {
    os << "HalfPlane(delta=" << delta_ << ", generators=" << generators_.size() << ")";
  }
  return os.str();
}

double hyperbolic_distance(const HPoint& a, const HPoint& b) {
  const double dx = a.re - b.re;
  const double dy = a.im - b.im;
  const double chord = std::sqrt(dx * dx + dy * dy);
  return 2.0 * std::asinh(chord / (2.0 * std::sqrt(a.im * b.im)));
}

double distance(const ModelSpace& space, const Point& a, const Point& b) {
  space.validate(a);
  space.validate(b);
  if (space.is_tree()) return static_cast<double>(word_distance(std::get<Word>(a), std::get<Word>(b)));
  return hyperbolic_distance(std::get<HPoint>(a), std::get<HPoint>(b));
}

double gromov_product(const ModelSpace& space, const Point& base, const Point& y, const Point& z) {
  const double dby = distance(space, base, y);
  const double dbz = distance(space, base, z);
  const double dyz = distance(space, y, z);
  const double gp = 0.5 * (dby + dbz - dyz);
  return std::clamp(gp, 0.0, std::min(dby, dbz));
}

bool verify_four_point(const ModelSpace& space, const std::array<Point, 4>& q, double delta) {
  const double xz = gromov_product(space, q[0], q[1], q[3]);
  const double xy = gromov_product(space, q[0], q[1], q[2]);
  const double yz = gromov_product(space, q[0], q[2], q[3]);
  return xz >= std::min(xy, yz) - delta - detail::kGeomTol;
}

double four_point_defect(const ModelSpace& space, const std::array<Point, 4>& q) {
  const double p12 = gromov_product(space, q[0], q[1], q[2]);
  const double p13 = gromov_product(space, q[0], q[1], q[3]);
  const double p23 = gromov_product(space, q[0], q[2], q[3]);
  return std::max({std::min(p12, p23) - p13, std::min(p12, p13) - p23, std::min(p13, p23) - p12});
}

Point geodesic_point(const ModelSpace& space, const Point& u, const Point& v, double t) {
  if (space.is_tree()) {
    const auto& wu = std::get<Word>(u);
    const auto& wv = std::get<Word>(v);
    const Word path = wu.inverse() * wv;
    const double len = static_cast<double>(path.length());
    const auto steps = static_cast<std::size_t>(std::llround(std::clamp(t, 0.0, len)));
    return wu * path.prefix(steps);
  }
  const auto& hu = std::get<HPoint>(u);
  const auto& hv = std::get<HPoint>(v);
  const double len = hyperbolic_distance(hu, hv);
  const Mobius frame = detail::frame_to_axis(hu, hv);
  const double s = std::clamp(t, 0.0, len);
  return frame.inverse().apply(HPoint{0.0, std::exp(s)});
}

SegmentProjection project_to_segment(const ModelSpace& space, const Point& u, const Point& v,
                                     const Point& p) {
  SegmentProjection out;
  if (space.is_tree()) {
    out.offset = gromov_product(space, u, v, p);
    out.point = geodesic_point(space, u, v, out.offset);
    out.distance = distance(space, out.point, p);
    return out;
  }
  const auto& hu = std::get<HPoint>(u);
  const auto& hv = std::get<HPoint>(v);
  const double len = hyperbolic_distance(hu, hv);
  const Mobius frame = detail::frame_to_axis(hu, hv);
  const HPoint w = frame.apply(std::get<HPoint>(p));
  const double t = std::clamp(std::log(std::hypot(w.re, w.im)), 0.0, len);
  out.offset = t;
  out.point = frame.inverse().apply(HPoint{0.0, std::exp(t)});
  out.distance = hyperbolic_distance(std::get<HPoint>(out.point), std::get<HPoint>(p));
  return out;
}

}  // namespace hyperwalk
