#include <algorithm>
#include <cmath>
#include <memory>

#include "loewner/chain.hpp"
#include "loewner/tips.hpp"

namespace loewner {

namespace {

constexpr std::size_t kMicroEventBudget = 500000;

bool is_symmetric(const std::vector<ArmSpec>& arms) {
    const std::size_t k = arms.size();
    if (k < 2) return false;
    for (const auto& a : arms)
        if (std::abs(a.length - arms[0].length) >
            1e-12 * std::max(1.0, arms[0].length))
            return false;
    std::vector<double> ang;
    for (const auto& a : arms) ang.push_back(wrap_angle(a.angle));
    std::sort(ang.begin(), ang.end());
    double gap = kTwoPi / static_cast<double>(k);
    for (std::size_t i = 0; i < k; ++i) {
        double g = (i + 1 < k) ? ang[i + 1] - ang[i] : ang[0] + kTwoPi - ang[k - 1];
        if (std::abs(g - gap) > 1e-12) return false;
    }
    return true;
}

void fill_tips_from_state(InitialConfig& ic, const TipState& st) {
    ic.tips.clear();
    for (const auto& a : st.arms)
        ic.tips.push_back(TipSeed{a.preimage_angle, a.second_deriv, a.tip_image});
}

InitialConfig build_symmetric(const std::vector<ArmSpec>& arms) {
    const int k = static_cast<int>(arms.size());
    double len = arms[0].length;
    double d0 = std::pow(1.0 + len, static_cast<double>(k)) - 1.0;
    double c0;
    try {
        c0 = capacity_for_length(d0);
    } catch (const DomainError&) {
        throw ConstructionError(
            "symmetric configuration needs pre-root capacity above 1; "
            "use shorter arms or fewer of them");
    }
    auto ic = std::make_shared<InitialConfig>();
    ic->arms = arms;
    ic->symmetric_exact = true;
    ic->fold = k;
    ic->fold_rotation = wrap_angle(arms[0].angle);
    ic->root_geom = slit_geometry(c0);
    ic->capacity = c0 / static_cast<double>(k);

    ConformalChain chain(ic);
    InitialConfig out = *ic;
    for (int j = 0; j < k; ++j) {
        double ang = wrap_angle(out.fold_rotation + kTwoPi * j / k);
        ChainJet jet = chain.evaluate_with_derivs(unit(ang));
        out.tips.push_back(TipSeed{ang, jet.second, jet.value});
    }
    return out;
}

InitialConfig build_micro(const std::vector<ArmSpec>& arms, double micro_capacity,
                          double tolerance) {
    if (!(micro_capacity > 0.0 && micro_capacity <= 0.25))
        throw DomainError("micro capacity must lie in (0, 0.25]");
    if (!(tolerance > 1e-14))
        throw DomainError("tolerance too small for micro growth");

    auto boot = std::make_shared<InitialConfig>();
    ConformalChain chain(boot);
    TipState st;

    // Seed one micro slit per arm at the circle preimage of its base angle.
    for (std::size_t j = 0; j < arms.size(); ++j) {
        double alpha = (chain.size() == 0)
                           ? wrap_angle(arms[j].angle)
                           : chain.circle_preimage(arms[j].angle);
        st.arms.push_back(TipArm{alpha, cplx(0.0), cplx(0.0)});
        try {
            apply_event(chain, st, alpha, micro_capacity, static_cast<int>(j));
        } catch (const GeometryError&) {
            throw ConstructionError(
                "arm base angles too close for the requested micro capacity");
        }
        if (std::abs(st.arms[j].tip_image) > 1.0 + arms[j].length + tolerance)
            throw ConstructionError(
                "the seed slit already overshoots an arm target; use a "
                "smaller micro capacity");
    }

    // Greedily extend the arm with the largest remaining radius deficit.
    for (std::size_t iter = 0; iter < kMicroEventBudget; ++iter) {
        int worst = -1;
        double worst_def = tolerance;
        for (std::size_t j = 0; j < arms.size(); ++j) {
            double def = (1.0 + arms[j].length) - std::abs(st.arms[j].tip_image);
            if (def > worst_def) {
                worst_def = def;
                worst = static_cast<int>(j);
            }
        }
        if (worst < 0) break;
        attach_at_tip(chain, st, worst, micro_capacity);
        double r = std::abs(st.arms[worst].tip_image);
        if (r > 1.0 + arms[worst].length + tolerance)
            throw ConstructionError(
                "micro growth overshot the target length; use a smaller "
                "micro capacity");
        if (iter + 1 == kMicroEventBudget)
            throw ConstructionError("micro growth exceeded its event budget");
    }

    InitialConfig out;
    out.arms = arms;
    out.realization = chain.events();
    out.capacity = chain.cumulative_capacity();
    out.micro_capacity = micro_capacity;
    out.tolerance = tolerance;
    fill_tips_from_state(out, st);
    return out;
}

}  // namespace

InitialConfig build_initial(const std::vector<ArmSpec>& arms,
                            double micro_capacity, double tolerance) {
    if (arms.empty()) throw DomainError("initial configuration needs at least one arm");
    for (const auto& a : arms)
        if (!(a.length > 0.0)) throw DomainError("arm lengths must be positive");
    for (std::size_t i = 0; i < arms.size(); ++i)
        for (std::size_t j = i + 1; j < arms.size(); ++j)
            if (chord(arms[i].angle, arms[j].angle) < 1e-9)
                throw DomainError("arm angles must be pairwise distinct");

    if (arms.size() == 1) {
        // A single straight slit is exact: one event of the right capacity.
        double c0 = capacity_for_length(arms[0].length);
        InitialConfig out;
        out.arms = arms;
        out.realization = {AttachmentEvent{wrap_angle(arms[0].angle), c0}};
        out.capacity = c0;
        auto ic = std::make_shared<InitialConfig>(out);
        ConformalChain chain(ic);
        ChainJet jet = chain.evaluate_with_derivs(unit(out.realization[0].angle));
        out.tips = {TipSeed{out.realization[0].angle, jet.second, jet.value}};
        return out;
    }
    if (is_symmetric(arms)) return build_symmetric(arms);
    return build_micro(arms, micro_capacity, tolerance);
}

}  // namespace loewner
