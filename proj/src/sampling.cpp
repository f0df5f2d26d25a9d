#include "monolab/sampling.hpp"

#include "monolab/errors.hpp"

#include <cmath>
#include <numbers>

namespace monolab {

std::vector<std::array<double, 3>> sphere_directions(int n, std::uint64_t seed) {
    if (n < 2) throw NumericalError("sphere_directions: need at least the two poles");
    UniformSource src(seed);
    const double spin = 2.0 * std::numbers::pi * src.next();
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    std::vector<std::array<double, 3>> out;
    out.push_back({1.0, 0.0, 0.0});
    out.push_back({-1.0, 0.0, 0.0});
    const int m = n - 2;
    for (int i = 0; i < m; ++i) {
        const double t = 1.0 - 2.0 * (i + 0.5) / m;
        const double r = std::sqrt(std::max(0.0, 1.0 - t * t));
        const double a = spin + golden * i;
        out.push_back({t, r * std::cos(a), r * std::sin(a)});
    }
    return out;
}

Point3 scaled_point(const std::array<double, 3>& dir, double R) {
    return Point3{R * dir[0], cplx(R * dir[1], R * dir[2])};
}

std::vector<Point3> random_points(int n, double r_min, double r_max, std::uint64_t seed) {
    UniformSource src(seed);
    std::vector<Point3> out;
    out.reserve(static_cast<std::size_t>(std::max(n, 0)));
    for (int i = 0; i < n; ++i) {
        const double R = src.uniform(r_min, r_max);
        const double t = src.uniform(-1.0, 1.0);
        const double a = src.uniform(0.0, 2.0 * std::numbers::pi);
        const double r = std::sqrt(std::max(0.0, 1.0 - t * t));
        out.push_back(scaled_point({t, r * std::cos(a), r * std::sin(a)}, R));
    }
    return out;
}

std::vector<double> geometric_radii(double from, double to, int n) {
    if (n < 2 || !(from > 0.0) || !(to > 0.0)) throw NumericalError("geometric_radii: bad arguments");
    std::vector<double> out;
    const double ratio = std::log(to / from) / (n - 1);
    for (int i = 0; i < n; ++i) out.push_back(i == n - 1 ? to : from * std::exp(ratio * i));
    return out;
}

}  // namespace monolab
