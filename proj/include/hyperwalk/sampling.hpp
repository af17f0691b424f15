#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "hyperwalk/space.hpp"

namespace hyperwalk {

/// How verifiers choose points: an exhaustive ball in the tree, random
/// points in the half-plane.
struct SampleSpec {
  std::size_t count = 1000;
  std::uint64_t seed = 1;
  int tree_radius = 6;
  /// Half-plane points have |re| <= box/2 and im log-uniform in [1/box, box].
  double box = 20.0;
  /// Hyperbolic radius of sample_around in the half-plane.
  double plane_radius = 8.0;
};

/// All reduced words within distance radius of center, in shortlex order of
/// center^-1 w.
std::vector<Word> tree_ball(int rank, const Word& center, int radius);

Word random_reduced_word(std::mt19937_64& gen, int rank, std::size_t length);

HPoint random_half_plane_point(std::mt19937_64& gen, double box);

/// The tree ball of spec.tree_radius around the basepoint, or spec.count
/// random half-plane points.
std::vector<Point> sample_points(const ModelSpace& space, const SampleSpec& spec);

/// Points near `center`: the tree ball of spec.tree_radius around it, or
/// spec.count half-plane points at a uniform distance in [0, plane_radius]
/// from center in a uniform direction.
std::vector<Point> sample_around(const ModelSpace& space, const Point& center, const SampleSpec& spec);

/// A random point: a reduced word of length at most spec.tree_radius, or a
/// random half-plane point.
Point random_point(const ModelSpace& space, std::mt19937_64& gen, const SampleSpec& spec);

}  // namespace hyperwalk
