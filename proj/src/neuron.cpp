#include "nwr/neuron.hpp"

#include <cmath>
#include <utility>

namespace nwr {

namespace {

struct VU {
    double v;
    double u;
};

inline VU deriv(const IzhikevichParams& p, double v, double u, double i_ext) {
    return {0.04 * v * v + 5.0 * v + 140.0 - u + i_ext, p.a * (p.b * v - u)};
}

inline VU rk4(const IzhikevichParams& p, double v, double u, double i_ext, double h) {
    if (h <= 0.0) return {v, u};
    const VU k1 = deriv(p, v, u, i_ext);
    const VU k2 = deriv(p, v + 0.5 * h * k1.v, u + 0.5 * h * k1.u, i_ext);
    const VU k3 = deriv(p, v + 0.5 * h * k2.v, u + 0.5 * h * k2.u, i_ext);
    const VU k4 = deriv(p, v + h * k3.v, u + h * k3.u, i_ext);
    return {v + h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v),
            u + h / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u)};
}

} // namespace

bool IzhikevichNeuron::step(double i_ext, double dt_ms) {
    if (!(dt_ms > 0.0) || dt_ms > 1.0)
        throw std::invalid_argument("izhikevich step: dt must be in (0, 1] ms");
    if (!std::isfinite(v_) || !std::isfinite(u_) || !std::isfinite(i_ext))
        throw IntegrationFault("izhikevich step: non-finite state or input");

    // Peak already reached on a previous step (or state constructed there):
    // reset without integrating, so the step leaves v == c exactly and u
    // raised by exactly d.
    if (v_ >= kSpikeThreshold) {
        v_ = p_.c;
        u_ += p_.d;
        spike_offset_ = 0.0;
        return true;
    }

    const VU next = rk4(p_, v_, u_, i_ext, dt_ms);
    if (next.v < kSpikeThreshold) {
        v_ = next.v;
        u_ = next.u;
        return false;
    }

    // The membrane crossed the peak inside this step. Locate the crossing by
    // bisection on the step fraction, reset there, and integrate the rest of
    // the step from the reset state.
    double lo = 0.0;
    double hi = dt_ms;
    for (int i = 0; i < 48; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (rk4(p_, v_, u_, i_ext, mid).v >= kSpikeThreshold)
            hi = mid;
        else
            lo = mid;
    }
    const VU at_peak = rk4(p_, v_, u_, i_ext, hi);
    spike_offset_ = hi;
    v_ = p_.c;
    u_ = at_peak.u + p_.d;

    const VU rest = rk4(p_, v_, u_, i_ext, dt_ms - hi);
    // A second crossing within a sub-millisecond remainder is not reachable
    // from the reset potential at physiological currents; clamp defensively.
    v_ = rest.v >= kSpikeThreshold ? p_.c : rest.v;
    u_ = rest.u;
    return true;
}

bool LifNeuron::step(double dt_ms) {
    if (!(dt_ms > 0.0))
        throw std::invalid_argument("lif step: dt must be positive");
    if (!std::isfinite(v_))
        throw IntegrationFault("lif step: non-finite membrane potential");

    if (firing_enabled_ && v_ >= p_.v_th) {
        v_ = p_.v_rest;
        return true;
    }
    v_ = p_.v_rest + (v_ - p_.v_rest) * std::exp(-dt_ms / p_.tau_m);
    return false;
}

void LifNeuron::receive_spike(double jump_mv) {
    if (!std::isfinite(jump_mv))
        throw IntegrationFault("lif receive_spike: non-finite jump");
    v_ += jump_mv;
}

} // namespace nwr
