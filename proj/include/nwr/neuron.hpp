#pragma once

#include <stdexcept>
#include <string>

namespace nwr {

/// Raised when a neuron state or input goes non-finite during integration.
class IntegrationFault : public std::runtime_error {
public:
    explicit IntegrationFault(const std::string& what) : std::runtime_error(what) {}
};

/// Parameters of the Izhikevich two-variable neuron model
///
///   dv/dt = 0.04 v^2 + 5 v + 140 - u + I
///   du/dt = a (b v - u)
///   if v >= 30 mV: v <- c, u <- u + d
///
/// The default set is the intrinsically bursting (IB) regime used for the
/// heat-sensitive sensory neurons and the interneuron.
struct IzhikevichParams {
    double a = 0.02;  // recovery time scale
    double b = 0.2;   // recovery coupling to v
    double c = -55.0; // after-spike reset of v (mV)
    double d = 4.0;   // after-spike increment of u

    static IzhikevichParams intrinsically_bursting() { return {0.02, 0.2, -55.0, 4.0}; }
};

/// Izhikevich neuron advanced on a fixed grid with a classical RK4 stage per
/// step. The spike peak is located inside the step by bisection so that spike
/// times converge under step-size refinement; the reported crossing offset is
/// the time of the peak relative to the step start.
class IzhikevichNeuron {
public:
    static constexpr double kSpikeThreshold = 30.0; // mV peak cutoff

    IzhikevichNeuron() : IzhikevichNeuron(IzhikevichParams{}) {}
    explicit IzhikevichNeuron(const IzhikevichParams& p, double v0 = -65.0)
        : p_(p), v_(v0), u_(p.b * v0) {}

    /// Advance by dt milliseconds under external current i_ext.
    /// Returns true when the neuron spiked during this step.
    /// Pre: 0 < dt <= 1 ms. Throws IntegrationFault on non-finite state/input.
    bool step(double i_ext, double dt_ms);

    /// Time of the most recent spike relative to the start of the step that
    /// reported it, in [0, dt]. Only meaningful right after step() == true.
    double spike_offset_ms() const { return spike_offset_; }

    double v() const { return v_; }
    double u() const { return u_; }
    const IzhikevichParams& params() const { return p_; }

    void set_state(double v, double u) { v_ = v; u_ = u; }
    void reset(double v0 = -65.0) { v_ = v0; u_ = p_.b * v0; }

private:
    IzhikevichParams p_;
    double v_;
    double u_;
    double spike_offset_ = 0.0;
};

/// Leaky integrate-and-fire neuron
///
///   dv_m/dt = (v_0 - v_m) / tau_m
///   if firing enabled and v_m >= v_th at the start of a step:
///     spike, v_m <- v_0
///
/// Firing is disabled during learning so the membrane can be read out as a
/// continuous activation.
struct LifParams {
    double v_rest = -70.0; // mV
    double tau_m = 50.0;   // ms
    double v_th = -45.0;   // mV, firing threshold
};

class LifNeuron {
public:
    LifNeuron() : LifNeuron(LifParams{}) {}
    explicit LifNeuron(const LifParams& p, bool firing_enabled = true)
        : p_(p), v_(p.v_rest), firing_enabled_(firing_enabled) {}

    /// Advance by dt ms. The threshold test happens at step entry; a spiking
    /// step ends exactly at the resting potential. Pre: dt > 0.
    bool step(double dt_ms);

    /// Instantaneous increment of the membrane potential by an incoming
    /// spike. No threshold test here; it happens on the next step.
    void receive_spike(double jump_mv);

    double v() const { return v_; }
    bool firing_enabled() const { return firing_enabled_; }
    void set_firing_enabled(bool enabled) { firing_enabled_ = enabled; }
    const LifParams& params() const { return p_; }

    void reset() { v_ = p_.v_rest; }

private:
    LifParams p_;
    double v_;
    bool firing_enabled_;
};

} // namespace nwr
