#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "vns/mesh.hpp"
#include "vns/space.hpp"

namespace vns::test {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline std::shared_ptr<const Topology> periodic_box(int n) {
  return make_topology(build_structured_triangle_mesh(n, n, {0, 0, kTwoPi, kTwoPi}), true, true);
}

inline std::shared_ptr<const Topology> unit_square(int n) {
  return make_topology(build_structured_triangle_mesh(n, n, {0, 0, 1, 1}), false, false);
}

inline DiscreteField random_field(SpacePtr V, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector c(V->num_dofs());
  for (auto& x : c) x = dist(rng);
  return DiscreteField(V, c);
}

}  // namespace vns::test
