#pragma once

#include <array>
#include <cmath>

namespace polarkit {

inline constexpr double kPi = 3.14159265358979323846;

/// Linear Stokes description of a light wave. s0 is the total intensity,
/// s1 the 0/90 degree linear difference, s2 the 45/135 degree one.
struct StokesVector {
    double s0 = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;

    /// True when sqrt(s1^2 + s2^2) <= s0 * (1 + eps) and s0 >= 0.
    bool is_physical(double eps = 1e-9) const {
        return s0 >= 0.0 && std::hypot(s1, s2) <= s0 * (1.0 + eps);
    }
};

/// Intensities behind linear polarizers at 0, 45, 90 and 135 degrees.
struct IntensityQuad {
    double i0 = 0.0;
    double i45 = 0.0;
    double i90 = 0.0;
    double i135 = 0.0;
};

/// Orientation of the polarized component, radians in (-pi/2, pi/2].
/// `degenerate` marks vectors with no polarized part (s1 == s2 == 0),
/// for which the angle is reported as 0.
struct Aop {
    double radians = 0.0;
    bool degenerate = false;
};

/// Fraction of the wave that is polarized, in [0, 1].
struct Dop {
    double ratio = 0.0;
};

/// The four polarizer orientations of a 2x2 micro-polarizer sensor, radians.
inline constexpr std::array<double, 4> kQuadAngles = {
    0.0, kPi / 4.0, kPi / 2.0, 3.0 * kPi / 4.0};

/// Intensity measured behind a linear polarizer at `angle_rad`:
/// (s0 + s1*cos(2a) + s2*sin(2a)) / 2.
double intensity_at(const StokesVector& s, double angle_rad);

/// The four polarizer intensities at 0/45/90/135 degrees. Uses the closed
/// forms (s0 +- s1)/2 and (s0 +- s2)/2, so i0 + i90 and i45 + i135 agree
/// with s0 to rounding.
IntensityQuad forward_quad(const StokesVector& s);

/// Least-squares Stokes recovery from four measurements:
/// s0 = (i0+i45+i90+i135)/2, s1 = i0-i90, s2 = i45-i135.
/// Exact on consistent quads; non-physical results are representable and
/// flagged downstream.
StokesVector stokes_from_quad(const IntensityQuad& q);

/// Angle of polarization, atan2(s2, s1) / 2 mapped into (-pi/2, pi/2].
/// s1 == s2 == 0 yields {0, degenerate=true}.
Aop aop(const StokesVector& s);

/// Degree of polarization, sqrt(s1^2+s2^2)/s0. Ratios inside (1, 1+eps_clamp]
/// clamp to 1. Throws ZeroIntensityError when s0 == 0 and NonPhysicalError
/// when the ratio exceeds the clamping band (or s0 < 0).
Dop dop(const StokesVector& s, double eps_clamp = 1e-6);

/// Stokes vector as seen from a polarizer frame rotated by `theta_rad`:
/// (s1, s2) rotates by -2*theta, s0 is unchanged. Satisfies
/// intensity_at(s, a + theta) == intensity_at(rotate_frame(s, theta), a).
StokesVector rotate_frame(const StokesVector& s, double theta_rad);

/// Map an angle into the AOP range (-pi/2, pi/2] modulo pi.
double wrap_aop(double radians);

} // namespace polarkit
