#include "loewner/slit.hpp"

#include <cmath>
#include <complex>

namespace loewner {

namespace {

constexpr double kSingularGuard = 1e-12;

// sqrt argument A(z) = (1 - 1/z)^2 + 4b/z = (z - e^{i beta})(z - e^{-i beta})/z^2.
// For |z| > 1 the value avoids (-infty, 0], so the principal root is the
// branch with z * sqrt(A) ~ z at infinity.
cplx sqrt_argument(const SlitGeometry& g, cplx z) {
    cplx iz = 1.0 / z;
    cplx one_m = 1.0 - iz;
    return one_m * one_m + 4.0 * g.b * iz;
}

// On the unit circle the generic form cancels near the base points; the
// polar form 4 (b - sin^2(t/2)) e^{-it} with the difference expanded as a
// product of sines is exact to rounding.
cplx sqrt_argument_on_circle(const SlitGeometry& g, double t) {
    double beta = g.half_arc;
    // b - sin^2(t/2) = sin((beta+t)/2) sin((beta-t)/2), exact at both base points.
    double m = 4.0 * std::sin(0.5 * (beta + t)) * std::sin(0.5 * (beta - t));
    return m * unit(-t);
}

cplx S_of(const SlitGeometry& g, cplx z) {
    double r2 = std::norm(z);
    if (std::abs(r2 - 1.0) < 4e-13) {
        double t = std::arg(z);
        return z * std::sqrt(sqrt_argument_on_circle(g, t));
    }
    return z * std::sqrt(sqrt_argument(g, z));
}

void check_exterior(cplx z) {
    if (std::abs(z) < 1.0 - kSingularGuard)
        throw DomainError("slit map: point inside the unit disc");
}

void check_not_singular(const SlitGeometry& g, cplx zr) {
    if (std::abs(zr - unit(g.half_arc)) < kSingularGuard ||
        std::abs(zr - unit(-g.half_arc)) < kSingularGuard)
        throw SingularityError("slit map derivative: evaluation at a base point");
}

// Core map in the unrotated frame: f(z) = e^c (z + 1 + S)^2 / (4z).
cplx core_map(const SlitGeometry& g, cplx z, cplx S) {
    cplx t = z + 1.0 + S;
    return g.exp_c * t * t / (4.0 * z);
}

}  // namespace

SlitGeometry slit_geometry(double capacity) {
    if (!(capacity > 0.0))
        throw DomainError("slit capacity must be positive");
    if (capacity > 1.0)
        throw DomainError("slit capacity must be at most 1");
    SlitGeometry g;
    g.capacity = capacity;
    g.exp_c = std::exp(capacity);
    g.exp_neg_c = std::exp(-capacity);
    g.b = -std::expm1(-capacity);
    double em1 = std::expm1(capacity);  // e^c - 1
    g.length = 2.0 * em1 + 2.0 * std::sqrt(g.exp_c * em1);
    g.half_arc = 2.0 * std::atan(std::sqrt(em1));
    g.cos_beta = 2.0 * g.exp_neg_c - 1.0;
    return g;
}

double capacity_for_length(double length) {
    if (!(length > 0.0))
        throw DomainError("slit length must be positive");
    double c = std::log((length + 2.0) * (length + 2.0) / (4.0 * (length + 1.0)));
    if (c > 1.0)
        throw DomainError("slit length corresponds to capacity above 1");
    return c;
}

cplx slit_map(const RotatedSlit& s, cplx z) {
    check_exterior(z);
    cplx rot = unit(s.angle);
    cplx zr = std::conj(rot) * z;
    cplx S = S_of(s.geom, zr);
    return rot * core_map(s.geom, zr, S);
}

cplx slit_map_boundary(const RotatedSlit& s, double theta) {
    double rel = wrap_angle(theta - s.angle);
    cplx zr = unit(rel);
    cplx S = zr * std::sqrt(sqrt_argument_on_circle(s.geom, rel));
    return unit(s.angle) * core_map(s.geom, zr, S);
}

cplx slit_map_deriv(const RotatedSlit& s, cplx z) {
    check_exterior(z);
    cplx zr = std::conj(unit(s.angle)) * z;
    check_not_singular(s.geom, zr);
    cplx S = S_of(s.geom, zr);
    cplx f = core_map(s.geom, zr, S);
    return f * (zr - 1.0) / (zr * S);
}

SlitJet slit_map_jet(const RotatedSlit& s, cplx z) {
    check_exterior(z);
    cplx rot = unit(s.angle);
    cplx zr = std::conj(rot) * z;
    check_not_singular(s.geom, zr);
    cplx S = S_of(s.geom, zr);
    cplx f = core_map(s.geom, zr, S);
    cplx fp = f * (zr - 1.0) / (zr * S);
    // f'' = f/(zS) + f' (f'/f - 1/z - (z - cos beta)/S^2); the 1/(z-1) tip
    // factor has been folded into the first term so the tip is regular.
    cplx fpp = f / (zr * S) +
               fp * (fp / f - 1.0 / zr - (zr - s.geom.cos_beta) / (S * S));
    return SlitJet{rot * f, fp, std::conj(rot) * fpp};
}

cplx slit_map_second_deriv_at_tip(const RotatedSlit& s) {
    double v = (1.0 + s.geom.length) / (2.0 * std::sqrt(s.geom.b));
    return std::conj(unit(s.angle)) * v;
}

cplx slit_map_inverse(const RotatedSlit& s, cplx w) {
    const SlitGeometry& g = s.geom;
    cplx rot = unit(s.angle);
    cplx wr = std::conj(rot) * w;
    if (std::abs(wr) < 1.0 - kSingularGuard)
        throw DomainError("slit inverse: point inside the unit disc");
    // Reject points on (or hugging) the open slit (1, 1+d].
    if (std::abs(wr.imag()) < kSingularGuard && wr.real() > 1.0 + kSingularGuard &&
        wr.real() <= 1.0 + g.length + kSingularGuard)
        throw DomainError("slit inverse: point on the slit");
    cplx iw = 1.0 / wr;
    cplx one_m = 1.0 - iw;
    cplx A = one_m * one_m - 4.0 * (g.exp_c - 1.0) * iw;
    cplx St = wr * std::sqrt(A);
    cplx t = wr + 1.0 + St;
    cplx z = g.exp_neg_c * t * t / (4.0 * wr);
    return rot * z;
}

double circle_preimage_rel(const SlitGeometry& g, double psi) {
    psi = wrap_angle(psi);
    double sgn = (psi >= 0.0) ? 1.0 : -1.0;
    double sh = std::sin(0.5 * psi);
    double y = std::sqrt(g.b + g.exp_neg_c * sh * sh);
    double x = std::exp(-0.5 * g.capacity) * std::cos(0.5 * psi);
    return 2.0 * std::atan2(sgn * y, x);
}

double circle_image_rel(const SlitGeometry& g, double phi) {
    phi = wrap_angle(phi);
    double sh = std::sin(0.5 * phi);
    double m = sh * sh - g.b;
    if (m < 0.0) {
        if (m > -1e-15) m = 0.0;
        else throw DomainError("circle image: angle inside the base arc");
    }
    double sgn = (phi >= 0.0) ? 1.0 : -1.0;
    return 2.0 * std::atan2(sgn * std::sqrt(m), std::cos(0.5 * phi));
}

double distance_estimate_check(const SlitGeometry& g, cplx w) {
    cplx base = unit(g.half_arc);
    double dist = std::abs(w - base);
    if (dist == 0.0)
        throw DomainError("distance estimate: zero distance to the base point");
    if (dist > 0.5 * g.half_arc)
        throw DomainError("distance estimate: point too far from the base point");
    if (std::abs(w) < 1.0 - kSingularGuard)
        throw DomainError("distance estimate: point inside the unit disc");
    RotatedSlit s{g, 0.0};
    double num = std::abs(slit_map(s, w) - 1.0);
    double den = 2.0 * std::pow(g.exp_c - 1.0, 0.25) * std::sqrt(dist);
    return num / den;
}

}  // namespace loewner
