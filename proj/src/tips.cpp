#include "loewner/tips.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace loewner {

namespace {
constexpr double kBaseArcGuard = 1e-3;  // refusal band around base-arc endpoints
}

double TipState::min_spacing() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < arms.size(); ++i)
        for (std::size_t j = i + 1; j < arms.size(); ++j)
            m = std::min(m, chord(arms[i].preimage_angle, arms[j].preimage_angle));
    return m;
}

int TipState::nearest_arm(double theta) const {
    int best = -1;
    double bestd = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < arms.size(); ++j) {
        double d = chord(theta, arms[j].preimage_angle);
        if (d < bestd) {
            bestd = d;
            best = static_cast<int>(j);
        }
    }
    return best;
}

TipState initial_tip_state(const InitialConfig& init) {
    TipState s;
    for (const auto& seed : init.tips)
        s.arms.push_back(TipArm{seed.preimage_angle, seed.second_deriv, seed.tip_image});
    s.weights.assign(s.arms.size(), 1.0 / static_cast<double>(s.arms.size()));
    return s;
}

std::vector<double> multinomial_weights(const TipState& state, double eta) {
    const std::size_t k = state.arms.size();
    std::vector<double> logw(k);
    for (std::size_t j = 0; j < k; ++j) {
        double a = std::abs(state.arms[j].second_deriv);
        if (!(a > 0.0))
            throw NumericError("multinomial weights: vanishing tip second derivative");
        logw[j] = -eta * std::log(a);
    }
    double mx = *std::max_element(logw.begin(), logw.end());
    double sum = 0.0;
    std::vector<double> w(k);
    for (std::size_t j = 0; j < k; ++j) {
        w[j] = std::exp(logw[j] - mx);
        sum += w[j];
    }
    for (auto& x : w) x /= sum;
    return w;
}

void apply_event(ConformalChain& chain, TipState& state, double theta,
                 double capacity, int grown) {
    if (grown < 0 || grown >= state.arm_count())
        throw DomainError("apply_event: invalid arm index");
    SlitGeometry g = slit_geometry(capacity);
    double th = wrap_angle(theta);

    // Refuse updates when a non-grown preimage sits inside the new particle's
    // base arc or within the guard band of its endpoints.
    for (int l = 0; l < state.arm_count(); ++l) {
        if (l == grown) continue;
        double rel = std::abs(wrap_angle(state.arms[l].preimage_angle - th));
        if (rel < g.half_arc * (1.0 + kBaseArcGuard))
            throw GeometryError("tip preimage inside the base arc of a new particle");
    }

    RotatedSlit s{g, th};
    // Jet of the old chain at the new particle's tip image preimage point.
    cplx w = unit(th) * (1.0 + g.length);
    ChainJet jet = chain.evaluate_with_derivs(w);

    chain.append(AttachmentEvent{th, capacity});

    for (int l = 0; l < state.arm_count(); ++l) {
        if (l == grown) continue;
        TipArm& arm = state.arms[l];
        double rel = wrap_angle(arm.preimage_angle - th);
        double newrel = circle_preimage_rel(g, rel);
        double newang = wrap_angle(th + newrel);
        cplx fp = slit_map_deriv(s, unit(newang));
        arm.preimage_angle = newang;
        arm.second_deriv *= fp * fp;
    }
    TipArm& ga = state.arms[grown];
    ga.preimage_angle = th;
    ga.second_deriv = slit_map_second_deriv_at_tip(s) * jet.first;
    ga.tip_image = jet.value;
}

void attach_at_tip(ConformalChain& chain, TipState& state, int arm,
                   double capacity) {
    if (arm < 0 || arm >= state.arm_count())
        throw DomainError("attach_at_tip: invalid arm index");
    apply_event(chain, state, state.arms[arm].preimage_angle, capacity, arm);
}

std::size_t step_count(double horizon, double capacity) {
    if (!(horizon > 0.0) || !(capacity > 0.0))
        throw DomainError("horizon and capacity must be positive");
    double q = horizon / capacity;
    double r = std::round(q);
    if (std::abs(q - r) < 1e-9) return static_cast<std::size_t>(r);
    return static_cast<std::size_t>(std::ceil(q));
}

namespace {

TipSnapshot snapshot(const TipState& state, double t, double eta) {
    TipSnapshot s;
    s.t = t;
    for (const auto& a : state.arms) {
        s.angles.push_back(a.preimage_angle);
        s.abs_second.push_back(std::abs(a.second_deriv));
    }
    s.weights = multinomial_weights(state, eta);
    return s;
}

int draw_categorical(const std::vector<double>& w, Rng& rng) {
    double u = rng.uniform01();
    double acc = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        acc += w[j];
        if (u < acc) return static_cast<int>(j);
    }
    return static_cast<int>(w.size()) - 1;
}

}  // namespace

MultinomialTrajectory multinomial_run(std::shared_ptr<const InitialConfig> init,
                                      double eta, double capacity, double horizon,
                                      Rng& rng) {
    ConformalChain chain(init);
    TipState state = initial_tip_state(*init);
    std::size_t n = step_count(horizon, capacity);
    MultinomialTrajectory tr{eta, capacity, horizon, {}, {}, {}, chain, state};
    tr.snaps.push_back(snapshot(tr.state, 0.0, eta));
    for (std::size_t m = 0; m < n; ++m) {
        tr.state.weights = multinomial_weights(tr.state, eta);
        int arm = draw_categorical(tr.state.weights, rng);
        double theta = tr.state.arms[arm].preimage_angle;
        attach_at_tip(tr.chain, tr.state, arm, capacity);
        tr.arms_chosen.push_back(arm);
        tr.driving_angles.push_back(theta);
        tr.snaps.push_back(snapshot(tr.state, (m + 1) * capacity, eta));
    }
    return tr;
}

GrowthIdentityResult growth_identity_check(const ConformalChain& chain,
                                           const TipState& state, int grown_arm,
                                           double h) {
    if (!(h > 0.0 && h < 1e-3))
        throw DomainError("growth step h must lie in (0, 1e-3)");
    GrowthIdentityResult r{};
    const TipArm& ga = state.arms[grown_arm];
    double th = ga.preimage_angle;
    RotatedSlit fs{slit_geometry(h), th};
    cplx xi = unit(th);

    // Residual of (Phi(f_h(z)) - Phi(z))/h against Phi'(z) z (z+xi)/(z-xi)
    // at fixed exterior points.
    double worst = 0.0;
    const cplx probes[] = {cplx(1.7, 0.4), cplx(-0.3, 1.9), cplx(0.1, -1.4)};
    for (cplx z : probes) {
        cplx inc = (chain.evaluate(slit_map(fs, z)) - chain.evaluate(z)) / h;
        ChainJet j = chain.evaluate_with_derivs(z);
        cplx gen = j.first * z * (z + xi) / (z - xi);
        worst = std::max(worst, std::abs(inc - gen) / std::abs(gen));
    }
    r.exterior_residual = worst;

    // At a non-grown tip preimage the increment must vanish.
    double other = 0.0;
    for (int l = 0; l < state.arm_count(); ++l) {
        if (l == grown_arm) continue;
        cplx x = unit(state.arms[l].preimage_angle);
        cplx inc = (chain.evaluate(slit_map(fs, x)) - chain.evaluate(x)) / h;
        other = std::max(other, std::abs(inc));
    }
    r.other_tip_residual = other;

    // Approaching the grown tip along z = x (1 + h^{1/4}), the increment
    // tends to 2 x^2 Phi''(x).
    {
        double rho = std::pow(h, 0.25);
        cplx z = xi * (1.0 + rho);
        cplx inc = (chain.evaluate(slit_map(fs, z)) - chain.evaluate(z)) / h;
        cplx target = 2.0 * xi * xi * ga.second_deriv;
        r.grown_tip_residual = std::abs(inc - target) / std::abs(target);
    }

    // Third derivative by a one-sided second-order stencil along the ray.
    double fd = 1e-4;
    ChainJet j0 = chain.evaluate_with_derivs(xi);
    ChainJet j1 = chain.evaluate_with_derivs(xi * (1.0 + fd));
    ChainJet j2 = chain.evaluate_with_derivs(xi * (1.0 + 2.0 * fd));
    cplx third =
        (-3.0 * j0.second + 4.0 * j1.second - j2.second) / (2.0 * fd * xi);
    r.third_deriv_residual =
        std::abs(third + 3.0 * std::conj(xi) * j0.second) / std::abs(j0.second);

    // m = 1: derivative of the increment against 3 x Phi'' + x^2 Phi'''.
    {
        double rho = std::pow(h, 0.25);
        cplx z = xi * (1.0 + rho);
        SlitJet fj = slit_map_jet(fs, z);
        ChainJet jz = chain.evaluate_with_derivs(z);
        ChainJet jfz = chain.evaluate_with_derivs(fj.value);
        cplx inc = (jfz.first * fj.first - jz.first) / h;
        cplx target = 3.0 * xi * ga.second_deriv + xi * xi * third;
        r.m1_residual = std::abs(inc - target) /
                        std::max(1.0, std::abs(3.0 * xi * ga.second_deriv));
    }
    return r;
}

}  // namespace loewner
