#include "loewner/chain.hpp"

#include <cmath>
#include <complex>
#include <limits>

namespace loewner {

namespace {

cplx int_pow(cplx z, int k) {
    cplx r = 1.0;
    cplx base = z;
    for (int e = k; e > 0; e >>= 1) {
        if (e & 1) r *= base;
        base *= base;
    }
    return r;
}

struct RootJet {
    cplx value, first, second;
};

// Root-trick initial map Phi_0(z) = rot * (f^{c0}((z/rot)^k))^{1/k}, with the
// k-th root branch fixed by Phi_0(z) ~ e^{c0/k} z at infinity.  The branch is
// realized through log(f(w)/w), whose argument stays within the base half-arc
// and in particular off the cut of the principal logarithm.
RootJet root_map_jet(const InitialConfig& ic, cplx z, bool with_derivs) {
    cplx rot = unit(ic.fold_rotation);
    cplx zr = std::conj(rot) * z;
    int k = ic.fold;
    cplx w = int_pow(zr, k);
    RotatedSlit s{ic.root_geom, 0.0};
    RootJet out;
    if (!with_derivs) {
        cplx f = slit_map(s, w);
        out.value = rot * zr * std::exp(std::log(f / w) / static_cast<double>(k));
        return out;
    }
    SlitJet j = slit_map_jet(s, w);
    double kd = static_cast<double>(k);
    cplx val = zr * std::exp(std::log(j.value / w) / kd);
    cplx ratio = j.first / j.value;           // f'/f at w
    cplx zk1 = int_pow(zr, k - 1);            // z^{k-1}
    cplx A = zk1 * ratio;                     // Phi' / Phi
    cplx Aprime = (kd - 1.0) * A / zr +
                  kd * zk1 * zk1 * (j.second / j.value - ratio * ratio);
    out.value = rot * val;
    out.first = val * A;
    out.second = std::conj(rot) * val * (A * A + Aprime);
    return out;
}

}  // namespace

ConformalChain::ConformalChain(std::shared_ptr<const InitialConfig> initial)
    : initial_(std::move(initial)) {
    cumulative_capacity_ = initial_->capacity;
    geoms_.reserve(initial_->realization.size());
    for (const auto& e : initial_->realization) geoms_.push_back(slit_geometry(e.capacity));
}

void ConformalChain::append(const AttachmentEvent& e) {
    if (!(e.capacity > 0.0 && e.capacity < 1.0))
        throw DomainError("attachment capacity must lie in (0, 1)");
    AttachmentEvent w{wrap_angle(e.angle), e.capacity};
    events_.push_back(w);
    geoms_.push_back(slit_geometry(w.capacity));
    cumulative_capacity_ += w.capacity;
}

// Shared walk over the composition.  Maps are applied innermost-first: the
// newest event, then back to the first event, then the realization prefix,
// then the symmetric root map if there is one.
struct ChainEvaluator {
    static cplx value(const ConformalChain& c, cplx z, std::size_t prefix_events) {
        const auto& init = *c.initial_;
        std::size_t n_real = init.realization.size();
        std::size_t total = n_real + c.events_.size();
        if (prefix_events > total) prefix_events = total;
        for (std::size_t m = prefix_events; m-- > 0;) {
            const AttachmentEvent& e =
                (m < n_real) ? init.realization[m] : c.events_[m - n_real];
            const SlitGeometry& g = c.geoms_[m];
            try {
                z = slit_map(RotatedSlit{g, e.angle}, z);
            } catch (const SingularityError&) {
                throw SingularityError("singularity while composing chain",
                                       static_cast<int>(m));
            } catch (const DomainError&) {
                throw SingularityError("left the exterior disc while composing chain",
                                       static_cast<int>(m));
            }
        }
        if (init.symmetric_exact) z = root_map_jet(init, z, false).value;
        return z;
    }

    static ChainJet jet(const ConformalChain& c, cplx z) {
        const auto& init = *c.initial_;
        std::size_t n_real = init.realization.size();
        std::size_t total = n_real + c.events_.size();
        cplx p = z;
        cplx a1 = 1.0;   // first derivative  * e^{-s}
        cplx a2 = 0.0;   // second derivative * e^{-2s}
        double s = 0.0;  // log scale
        auto renorm = [&]() {
            double m = std::abs(a1);
            if (m == 0.0) {
                m = std::sqrt(std::abs(a2));
                if (m > 1e4 || (m < 1e-4 && m > 0.0)) {
                    a2 /= m * m;
                    s += std::log(m);
                }
                return;
            }
            if (m > 1e4 || m < 1e-4) {
                a1 /= m;
                a2 /= m * m;
                s += std::log(m);
            }
        };
        auto apply = [&](const SlitJet& j) {
            a2 = j.second * a1 * a1 + j.first * a2;
            a1 = j.first * a1;
            p = j.value;
            renorm();
        };
        for (std::size_t m = total; m-- > 0;) {
            const AttachmentEvent& e =
                (m < n_real) ? init.realization[m] : c.events_[m - n_real];
            const SlitGeometry& g = c.geoms_[m];
            try {
                apply(slit_map_jet(RotatedSlit{g, e.angle}, p));
            } catch (const SingularityError&) {
                throw SingularityError("singularity while composing chain",
                                       static_cast<int>(m));
            } catch (const DomainError&) {
                throw SingularityError("left the exterior disc while composing chain",
                                       static_cast<int>(m));
            }
        }
        if (init.symmetric_exact) {
            RootJet r = root_map_jet(init, p, true);
            apply(SlitJet{r.value, r.first, r.second});
        }
        ChainJet out;
        out.value = p;
        double m1 = std::abs(a1);
        out.log_abs_first =
            (m1 == 0.0) ? -std::numeric_limits<double>::infinity() : s + std::log(m1);
        double es = std::exp(s);
        out.first = a1 * es;
        out.second = a2 * es * es;
        return out;
    }
};

cplx ConformalChain::evaluate(cplx z) const {
    return ChainEvaluator::value(*this, z,
                                 initial_->realization.size() + events_.size());
}

ChainJet ConformalChain::evaluate_with_derivs(cplx z) const {
    return ChainEvaluator::jet(*this, z);
}

double ConformalChain::circle_preimage(double psi) const {
    const auto& init = *initial_;
    if (init.symmetric_exact)
        throw DomainError("circle preimage unsupported for root-trick initial maps");
    double a = wrap_angle(psi);
    std::size_t n_real = init.realization.size();
    std::size_t total = n_real + events_.size();
    // Invert outermost-first: Phi = f_1 . ... . f_n, so peel f_1 first.
    for (std::size_t m = 0; m < total; ++m) {
        const AttachmentEvent& e =
            (m < n_real) ? init.realization[m] : events_[m - n_real];
        const SlitGeometry& g = geoms_[m];
        double rel = wrap_angle(a - e.angle);
        a = wrap_angle(e.angle + circle_preimage_rel(g, rel));
    }
    return a;
}

std::vector<Polyline> ConformalChain::trace_cluster(int points_per_particle) const {
    if (points_per_particle < 2)
        throw DomainError("trace_cluster needs at least two points per particle");
    const auto& init = *initial_;
    std::vector<Polyline> out;
    if (init.symmetric_exact) {
        // Root-trick arms are exact radial segments.
        double tip_radius = std::pow(1.0 + init.root_geom.length,
                                     1.0 / static_cast<double>(init.fold));
        for (int j = 0; j < init.fold; ++j) {
            double ang = init.fold_rotation + kTwoPi * j / init.fold;
            Polyline pl;
            pl.event_index = -1;
            for (int i = 0; i < points_per_particle; ++i) {
                double t = static_cast<double>(i) / (points_per_particle - 1);
                pl.points.push_back(unit(ang) * (1.0 + t * (tip_radius - 1.0)));
            }
            out.push_back(std::move(pl));
        }
    }
    std::size_t n_real = init.realization.size();
    std::size_t total = n_real + events_.size();
    for (std::size_t m = 0; m < total; ++m) {
        const AttachmentEvent& e =
            (m < n_real) ? init.realization[m] : events_[m - n_real];
        const SlitGeometry& g = geoms_[m];
        Polyline pl;
        pl.event_index = static_cast<int>(m);
        for (int i = 0; i < points_per_particle; ++i) {
            double t = static_cast<double>(i) / (points_per_particle - 1);
            cplx z = unit(e.angle) * (1.0 + t * g.length);
            pl.points.push_back(ChainEvaluator::value(*this, z, m));
        }
        out.push_back(std::move(pl));
    }
    return out;
}

}  // namespace loewner
