#include "polarkit/stokes.hpp"

#include <cmath>

#include "polarkit/error.hpp"

namespace polarkit {

double intensity_at(const StokesVector& s, double angle_rad) {
    return 0.5 * (s.s0 + s.s1 * std::cos(2.0 * angle_rad) + s.s2 * std::sin(2.0 * angle_rad));
}

IntensityQuad forward_quad(const StokesVector& s) {
    IntensityQuad q;
    q.i0 = 0.5 * (s.s0 + s.s1);
    q.i45 = 0.5 * (s.s0 + s.s2);
    q.i90 = 0.5 * (s.s0 - s.s1);
    q.i135 = 0.5 * (s.s0 - s.s2);
    return q;
}

StokesVector stokes_from_quad(const IntensityQuad& q) {
    StokesVector s;
    s.s0 = 0.5 * (q.i0 + q.i45 + q.i90 + q.i135);
    s.s1 = q.i0 - q.i90;
    s.s2 = q.i45 - q.i135;
    return s;
}

Aop aop(const StokesVector& s) {
    if (s.s1 == 0.0 && s.s2 == 0.0) {
        return {0.0, true};
    }
    return {wrap_aop(0.5 * std::atan2(s.s2, s.s1)), false};
}

Dop dop(const StokesVector& s, double eps_clamp) {
    if (s.s0 == 0.0) {
        throw ZeroIntensityError("dop: total intensity s0 is zero");
    }
    if (s.s0 < 0.0) {
        throw NonPhysicalError("dop: negative total intensity");
    }
    double ratio = std::hypot(s.s1, s.s2) / s.s0;
    if (ratio > 1.0) {
        if (ratio <= 1.0 + eps_clamp) {
            ratio = 1.0; // rounding noise
        } else {
            throw NonPhysicalError("dop: polarized fraction " + std::to_string(ratio) +
                                   " exceeds 1 beyond clamping band");
        }
    }
    return {ratio};
}

StokesVector rotate_frame(const StokesVector& s, double theta_rad) {
    const double c = std::cos(2.0 * theta_rad);
    const double k = std::sin(2.0 * theta_rad);
    return {s.s0, s.s1 * c + s.s2 * k, -s.s1 * k + s.s2 * c};
}

double wrap_aop(double radians) {
    double r = std::remainder(radians, kPi); // (-pi/2, pi/2] up to the seam
    if (r <= -kPi / 2.0) {
        r += kPi;
    }
    if (r > kPi / 2.0) {
        r -= kPi;
    }
    return r;
}

} // namespace polarkit
