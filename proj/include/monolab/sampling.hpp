#pragma once

#include "monolab/geometry.hpp"

#include <array>
#include <cstdint>
#include <random>
#include <vector>

namespace monolab {

/// Seeded source of doubles in [0, 1) that does not depend on the standard
/// library's distribution implementations.
class UniformSource {
  public:
    explicit UniformSource(std::uint64_t seed) : rng_(seed) {}
    double next() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * next(); }

  private:
    std::mt19937_64 rng_;
};

/// Unit vectors (t, x, y): both poles plus n - 2 Fibonacci-lattice points
/// rotated about the t-axis by a seeded angle. Requires n >= 2.
std::vector<std::array<double, 3>> sphere_directions(int n, std::uint64_t seed);

Point3 scaled_point(const std::array<double, 3>& dir, double R);

/// n points with R uniform in [r_min, r_max] and uniformly distributed
/// directions.
std::vector<Point3> random_points(int n, double r_min, double r_max, std::uint64_t seed);

/// Geometric sequence from `from` to `to` with n points.
std::vector<double> geometric_radii(double from, double to, int n);

}  // namespace monolab
