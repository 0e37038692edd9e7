#pragma once

#include "loewner/angles.hpp"
#include "loewner/errors.hpp"

namespace loewner {

// Geometry of the single-slit building block: the conformal map f from the
// exterior disc onto the exterior disc minus the radial segment (1, 1+d],
// normalized f(z) ~ e^c z at infinity.  All derived constants are closed
// forms of the log-capacity c.
struct SlitGeometry {
    double capacity;   // log-capacity c, in (0, 1]
    double length;     // slit length d, (d+2)^2/(d+1) = 4 e^c
    double half_arc;   // beta: f(e^{i beta}) = 1, base half-arc of the preimage
    double b;          // 1 - e^{-c}; sin^2(beta/2) = b
    double exp_c;      // e^c
    double exp_neg_c;  // e^{-c}
    double cos_beta;   // 2 e^{-c} - 1
};

SlitGeometry slit_geometry(double capacity);

// Inverse of c -> d(c): the capacity whose slit has the given length.
double capacity_for_length(double length);

// Slit attached at angle theta: f_theta(z) = e^{i theta} f(e^{-i theta} z).
struct RotatedSlit {
    SlitGeometry geom;
    double angle;  // wrapped into (-pi, pi]
};

inline RotatedSlit rotated_slit(double angle, double capacity) {
    return RotatedSlit{slit_geometry(capacity), wrap_angle(angle)};
}

// Value together with first and second complex derivatives.
struct SlitJet {
    cplx value;
    cplx first;
    cplx second;
};

cplx slit_map(const RotatedSlit& s, cplx z);

// On-circle evaluation parametrized by angle.  Addressing boundary points by
// angle keeps the square-root branch points exact: called with the geometry's
// own half_arc it returns the base image to rounding, which no evaluation
// from a rounded complex point can do.
cplx slit_map_boundary(const RotatedSlit& s, double theta);

// f'(z) = f(z) (z-1) / (z S(z)) with S(z) = z sqrt((1-1/z)^2 + 4b/z), the
// square-root branch continuous on the exterior disc and ~ z at infinity.
cplx slit_map_deriv(const RotatedSlit& s, cplx z);

SlitJet slit_map_jet(const RotatedSlit& s, cplx z);

// f''(e^{i theta}) = e^{-i theta} (1+d) / (2 sqrt(1 - e^{-c})).
cplx slit_map_second_deriv_at_tip(const RotatedSlit& s);

// Inverse map on the exterior disc minus the closed slit.
cplx slit_map_inverse(const RotatedSlit& s, cplx w);

// Circle-to-circle inverse in relative angles: given the image angle psi
// (relative to the attachment angle), returns the preimage angle phi with
// sin^2(phi/2) = b + e^{-c} sin^2(psi/2) and sign(phi) = sign(psi).
// The base point psi = 0 resolves to +beta.
double circle_preimage_rel(const SlitGeometry& g, double psi);

// Forward circle map for |phi| >= beta (relative angles).
double circle_image_rel(const SlitGeometry& g, double phi);

// Ratio |f(w) - 1| / (2 (e^c - 1)^{1/4} |w - e^{i beta}|^{1/2});
// approaches 1 as w -> e^{i beta}.  Unrotated frame.
double distance_estimate_check(const SlitGeometry& g, cplx w);

}  // namespace loewner
