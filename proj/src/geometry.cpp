#include "monolab/geometry.hpp"

#include "monolab/errors.hpp"

#include <cstdio>

namespace monolab {

std::string Point3::str() const {
    char buf[128];
    std::snprintf(buf, sizeof buf, "(t=%.6g, w=%.6g%+.6gi)", t, w.real(), w.imag());
    return buf;
}

std::string Point4::str() const {
    char buf[160];
    std::snprintf(buf, sizeof buf, "(u1=%.6g%+.6gi, u2=%.6g%+.6gi)", u1.real(), u1.imag(), u2.real(),
                  u2.imag());
    return buf;
}

double radius(const Point3& p) { return p.radius(); }

Point3 hopf_project(const Point4& q) {
    return Point3{std::norm(q.u1) - std::norm(q.u2), 2.0 * q.u1 * q.u2};
}

Point4 hopf_lift(const Point3& p, double theta) {
    const double R = p.radius();
    if (!(R > 0.0)) {
        throw ModelDomainError("hopf_lift: the fiber over the origin is a single point");
    }
    const cplx phase = std::polar(1.0, theta);
    if (p.t >= 0.0) {
        const cplx u1 = std::sqrt(0.5 * (R + p.t)) * phase;
        return Point4{u1, p.w / (2.0 * u1)};
    }
    const cplx u2 = std::sqrt(0.5 * (R - p.t)) * std::conj(phase);
    return Point4{p.w / (2.0 * u2), u2};
}

Point4 s1_act(double theta, const Point4& q) {
    const cplx phase = std::polar(1.0, theta);
    return Point4{phase * q.u1, std::conj(phase) * q.u2};
}

}  // namespace monolab
