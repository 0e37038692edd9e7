#pragma once

#include <cmath>
#include <complex>

namespace loewner {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Wrap an angle into (-pi, pi].
inline double wrap_angle(double a) {
    double r = std::remainder(a, kTwoPi);
    if (r <= -kPi) r += kTwoPi;
    return r;
}

// Chordal distance |e^{ia} - e^{ib}|.
inline double chord(double a, double b) {
    return 2.0 * std::abs(std::sin(0.5 * (a - b)));
}

inline cplx unit(double a) { return {std::cos(a), std::sin(a)}; }

// Arc distance on the circle, in [0, pi].
inline double arc_dist(double a, double b) {
    return std::abs(wrap_angle(a - b));
}

}  // namespace loewner
