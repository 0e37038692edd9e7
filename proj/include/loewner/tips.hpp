#pragma once

#include <vector>

#include "loewner/chain.hpp"
#include "loewner/rng.hpp"

namespace loewner {

struct TipArm {
    double preimage_angle;  // phi_j: exact zero of Phi'
    cplx second_deriv;      // Phi''(e^{i phi_j}), complex
    cplx tip_image;         // physical location of the arm tip
};

// Per-arm tip data maintained exactly under particle attachment.  Preimage
// angles stay exact zeros of Phi'; second derivatives are updated by the
// closed-form chain-rule factors rather than recomputed from scratch.
struct TipState {
    std::vector<TipArm> arms;
    std::vector<double> weights;  // last computed multinomial weights

    int arm_count() const { return static_cast<int>(arms.size()); }
    double min_spacing() const;  // minimum chordal spacing between preimages
    int nearest_arm(double theta) const;
};

TipState initial_tip_state(const InitialConfig& init);

// p_j proportional to |Phi''(x_j)|^{-eta}, computed in log space.
std::vector<double> multinomial_weights(const TipState& state, double eta);

// Append the event (theta, capacity) to the chain and update every arm:
//   - arm `grown` adopts the new particle's tip: preimage theta,
//     Phi_new'' = f''(e^{i theta}) * Phi_old'(e^{i theta}(1+d));
//   - every other arm l: preimage f^{-1}(x_l) by the circle-inverse closed
//     form and second_deriv multiplied by f'(new preimage)^2.
// Throws GeometryError when another tip preimage falls inside (or hugs)
// the new particle's base arc.
void apply_event(ConformalChain& chain, TipState& state, double theta,
                 double capacity, int grown);

// Multinomial growth step: the event angle is arm j's exact tip preimage.
void attach_at_tip(ConformalChain& chain, TipState& state, int arm,
                   double capacity);

struct TipSnapshot {
    double t;
    std::vector<double> angles;
    std::vector<double> weights;
    std::vector<double> abs_second;
};

struct MultinomialTrajectory {
    double eta = 0.0;
    double capacity = 0.0;
    double horizon = 0.0;
    std::vector<int> arms_chosen;
    std::vector<double> driving_angles;
    std::vector<TipSnapshot> snaps;  // snaps[n] = state after n events
    ConformalChain chain;
    TipState state;
};

MultinomialTrajectory multinomial_run(std::shared_ptr<const InitialConfig> init,
                                      double eta, double capacity, double horizon,
                                      Rng& rng);

// Residuals of the boundary growth-rate identities at tip preimages, probed
// by attaching a particle of capacity h and finite-differencing the chain.
struct GrowthIdentityResult {
    double exterior_residual;   // |dPhi/h - Phi' V| / |Phi' V| at fixed points
    double other_tip_residual;  // |dPhi/h| at a non-grown tip preimage
    double grown_tip_residual;  // |dPhi/h - 2 x^2 Phi''| near the grown tip
    double m1_residual;         // |dPhi'/h - (3 x Phi'' + x^2 Phi''')| near it
    double third_deriv_residual;  // |Phi''' + 3 conj(x) Phi''| / |Phi''|
};

GrowthIdentityResult growth_identity_check(const ConformalChain& chain,
                                           const TipState& state, int grown_arm,
                                           double h);

// Number of discrete steps covering a horizon at a given capacity.
std::size_t step_count(double horizon, double capacity);

}  // namespace loewner
