#include "hyperwalk/geometry_detail.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hyperwalk::detail {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Mobius line_to_axis(double p, double q) {
  if (p == q) throw std::invalid_argument("geodesic endpoints must differ");
  if (std::isinf(q)) return Mobius{1.0, -p, 0.0, 1.0};
  if (std::isinf(p)) return Mobius{0.0, -1.0, 1.0, -q};
  // z -> (z - p) / (q - z) when q > p, z -> (z - p) / (z - q) otherwise.
  if (q > p) return Mobius::normalized(1.0, -p, -1.0, q);
  return Mobius::normalized(1.0, -p, 1.0, -q);
}

std::pair<double, double> geodesic_endpoints(const HPoint& u, const HPoint& v) {
  if (u.re == v.re) {
    return v.im >= u.im ? std::pair{u.re, kInf} : std::pair{kInf, u.re};
  }
  const double c = ((v.re * v.re + v.im * v.im) - (u.re * u.re + u.im * u.im)) / (2.0 * (v.re - u.re));
  const double r = std::hypot(u.re - c, u.im);
  return v.re > u.re ? std::pair{c - r, c + r} : std::pair{c + r, c - r};
}

Mobius frame_to_axis(const HPoint& u, const HPoint& v) {
  const auto [from, to] = geodesic_endpoints(u, v);
  const Mobius m = line_to_axis(from, to);
  const HPoint mu = m.apply(u);
  // m(u) lies on the imaginary axis; rescale it to i.
  const double s = 1.0 / std::sqrt(mu.im);
  const Mobius scale{s, 0.0, 0.0, 1.0 / s};
  return scale * m;
}

}  // namespace hyperwalk::detail
