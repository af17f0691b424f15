#include "hyperwalk/sampling.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "hyperwalk/rng.hpp"

namespace hyperwalk {

std::vector<Word> tree_ball(int rank, const Word& center, int radius) {
  std::vector<Word> layer{Word{}};
  std::vector<Word> out{center};
  for (int r = 1; r <= radius; ++r) {
    std::vector<Word> next;
    for (const Word& w : layer) {
      for (int li = 0; li < 2 * rank; ++li) {
        const Letter l = letter_from_index(li);
        if (!w.empty() && l == -w.back()) continue;
        Word v = w;
        v.append(l);
        out.push_back(center * v);
        next.push_back(std::move(v));
      }
    }
    layer = std::move(next);
  }
  return out;
}

Word random_reduced_word(std::mt19937_64& gen, int rank, std::size_t length) {
  Word w;
  while (w.length() < length) {
    const int choices = w.empty() ? 2 * rank : 2 * rank - 1;
    int pick = static_cast<int>(uniform01(gen) * choices);
    Letter l = letter_from_index(pick);
    if (!w.empty() && letter_index(static_cast<Letter>(-w.back())) <= pick) l = letter_from_index(pick + 1);
    w.append(l);
  }
  return w;
}

HPoint random_half_plane_point(std::mt19937_64& gen, double box) {
  const double re = (uniform01(gen) - 0.5) * box;
  const double lo = -std::log(box);
  const double hi = std::log(box);
  return {re, std::exp(lo + (hi - lo) * uniform01(gen))};
}

std::vector<Point> sample_points(const ModelSpace& space, const SampleSpec& spec) {
  std::vector<Point> out;
  if (space.is_tree()) {
    for (Word& w : tree_ball(space.rank(), Word{}, spec.tree_radius)) out.emplace_back(std::move(w));
    return out;
  }
  auto gen = trial_rng(spec.seed, 0);
  for (std::size_t i = 0; i < spec.count; ++i) out.emplace_back(random_half_plane_point(gen, spec.box));
  return out;
}

std::vector<Point> sample_around(const ModelSpace& space, const Point& center, const SampleSpec& spec) {
  space.validate(center);
  std::vector<Point> out;
  if (space.is_tree()) {
    for (Word& w : tree_ball(space.rank(), std::get<Word>(center), spec.tree_radius)) out.emplace_back(std::move(w));
    return out;
  }
  const HPoint& c = std::get<HPoint>(center);
  auto gen = trial_rng(spec.seed, 0);
  for (std::size_t i = 0; i < spec.count; ++i) {
    // Disc point tanh(rho/2) e^{i theta}, sent to the half-plane by w -> i(1+w)/(1-w).
    const double rho = spec.plane_radius * uniform01(gen);
    const double theta = 2.0 * std::numbers::pi * uniform01(gen);
    const std::complex<double> w = std::polar(std::tanh(0.5 * rho), theta);
    const std::complex<double> p = std::complex<double>(0.0, 1.0) * (1.0 + w) / (1.0 - w);
    out.emplace_back(HPoint{c.re + c.im * p.real(), c.im * std::max(p.imag(), 1e-300)});
  }
  return out;
}

Point random_point(const ModelSpace& space, std::mt19937_64& gen, const SampleSpec& spec) {
  if (space.is_tree()) {
    const auto len = static_cast<std::size_t>(uniform01(gen) * (spec.tree_radius + 1));
    return random_reduced_word(gen, space.rank(), len);
  }
  return random_half_plane_point(gen, spec.box);
}

}  // namespace hyperwalk
