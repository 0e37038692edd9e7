#pragma once

#include <memory>
#include <vector>

#include "loewner/slit.hpp"

namespace loewner {

struct AttachmentEvent {
    double angle;     // wrapped into (-pi, pi]
    double capacity;  // in (0, 1)
};

struct ArmSpec {
    double angle;   // base angle of the arm
    double length;  // target slit length
};

// Realized per-arm tip data produced by build_initial and consumed by the
// tip-tracking machinery.
struct TipSeed {
    double preimage_angle;
    cplx second_deriv;  // Phi_0'' at the tip preimage
    cplx tip_image;     // location of the arm tip in the physical plane
};

// Initial cluster: k slits with prescribed base angles and lengths.
// Exact k-fold symmetric configurations are realized by the root trick
// Phi_0(z) = (f^{c0}(z^k))^{1/k}; anything else is approximated by greedy
// micro-slit growth at exact tip preimages.
struct InitialConfig {
    std::vector<ArmSpec> arms;

    bool symmetric_exact = false;
    int fold = 1;                // k of the root trick (when symmetric_exact)
    double fold_rotation = 0.0;  // rotation placing the first arm
    SlitGeometry root_geom{};    // geometry of the pre-root map f^{c0}

    std::vector<AttachmentEvent> realization;  // micro-event prefix
    std::vector<TipSeed> tips;
    double capacity = 0.0;  // log-capacity of Phi_0

    double micro_capacity = 0.0;
    double tolerance = 0.0;
};

InitialConfig build_initial(const std::vector<ArmSpec>& arms,
                            double micro_capacity, double tolerance);

// Map value, first and second derivative of a composed chain, with the
// derivative magnitude also carried as a log so products over long chains
// never overflow.
struct ChainJet {
    cplx value;
    cplx first;
    double log_abs_first;
    cplx second;
};

struct Polyline {
    int event_index;  // -1 for initial-configuration arms
    std::vector<cplx> points;
};

// Phi_n = Phi_0 . f_1 . f_2 . ... . f_n, evaluated innermost-first (f_n is
// applied to the argument first).  Appending never mutates shared state:
// a chain value is copied cheaply and extended by its single writer.
class ConformalChain {
public:
    explicit ConformalChain(std::shared_ptr<const InitialConfig> initial);

    void append(const AttachmentEvent& e);

    const InitialConfig& initial() const { return *initial_; }
    std::shared_ptr<const InitialConfig> initial_ptr() const { return initial_; }
    const std::vector<AttachmentEvent>& events() const { return events_; }
    std::size_t size() const { return events_.size(); }
    double cumulative_capacity() const { return cumulative_capacity_; }

    cplx evaluate(cplx z) const;
    ChainJet evaluate_with_derivs(cplx z) const;

    // Circle boundary-correspondence inverse, composed from the closed-form
    // per-event circle inverses.  Only supported for event-realized initial
    // configurations (the greedy constructor is its one caller).
    double circle_preimage(double psi) const;

    // One polyline per attached particle: t -> Phi_{m-1}(e^{i theta_m}(1 + t d_m)).
    std::vector<Polyline> trace_cluster(int points_per_particle) const;

private:
    std::shared_ptr<const InitialConfig> initial_;
    std::vector<AttachmentEvent> events_;
    std::vector<SlitGeometry> geoms_;  // cached per event
    double cumulative_capacity_ = 0.0;

    friend struct ChainEvaluator;
};

}  // namespace loewner
