#pragma once

#include "monolab/linalg.hpp"

#include <array>
#include <cmath>
#include <string>

namespace monolab {

/// A point (t, w) of R x C, w = x + iy.
struct Point3 {
    double t = 0.0;
    cplx w{0.0, 0.0};

    double x() const { return w.real(); }
    double y() const { return w.imag(); }
    double radius() const { return std::hypot(t, std::abs(w)); }
    std::string str() const;
};

/// A point (u1, u2) of C^2.
struct Point4 {
    cplx u1{0.0, 0.0};
    cplx u2{0.0, 0.0};

    double rho2() const { return std::norm(u1) + std::norm(u2); }
    std::string str() const;
};

double radius(const Point3& p);

/// (u1, u2) -> (|u1|^2 - |u2|^2, 2 u1 u2).
Point3 hopf_project(const Point4& q);

/// A preimage of p on the fiber circle, parametrised by the phase theta.
/// Anchored on u1 for t >= 0 and on u2 for t < 0. Rejects the origin.
Point4 hopf_lift(const Point3& p, double theta);

/// (u1, u2) -> (e^{i theta} u1, e^{-i theta} u2).
Point4 s1_act(double theta, const Point4& q);

/// Real coframe (dt, dx, dy) with orientation dt^dx^dy.
enum class Coframe { dt = 0, dx = 1, dy = 2 };

/// Fixed Hodge star on the flat metric dt^2 + |dw|^2:
///   *dt = dx^dy,  *dx = dy^dt,  *dy = dt^dx.
/// A 2-form basis element is an ordered pair (a, b) meaning a^b.
struct HodgeConvention {
    using TwoForm = std::array<Coframe, 2>;

    static constexpr TwoForm star(Coframe c) {
        switch (c) {
            case Coframe::dt: return {Coframe::dx, Coframe::dy};
            case Coframe::dx: return {Coframe::dy, Coframe::dt};
            case Coframe::dy: return {Coframe::dt, Coframe::dx};
        }
        return {Coframe::dx, Coframe::dy};
    }

    /// Star of a^b as a signed 1-form; sign is +1 or -1.
    static constexpr std::pair<int, Coframe> star(TwoForm f) {
        for (Coframe c : {Coframe::dt, Coframe::dx, Coframe::dy}) {
            const TwoForm s = star(c);
            if (s[0] == f[0] && s[1] == f[1]) return {+1, c};
            if (s[0] == f[1] && s[1] == f[0]) return {-1, c};
        }
        return {0, Coframe::dt};
    }
};

}  // namespace monolab
