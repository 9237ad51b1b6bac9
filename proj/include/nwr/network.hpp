#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "nwr/neuron.hpp"
#include "nwr/sensory.hpp"

namespace nwr {

class CalibrationError : public std::runtime_error {
public:
    explicit CalibrationError(const std::string& what) : std::runtime_error(what) {}
};

/// The three plastic sensory-to-interneuron weights, indexed like
/// SensoryPopulation (0 -> 38 degC, 1 -> 43 degC, 2 -> 50 degC).
struct SynapseSet {
    std::array<double, SensoryPopulation::kCount> weights{0.25, 0.25, 0.25};
    double s_max = 1.0;

    void clamp();
};

/// Latency-to-strength decoder:  g_s = beta^((dt_min - dt) / k).
/// dt_min and k come from calibration on ideal stimuli.
struct ReflexDecoder {
    double dt_min_ms = 0.0;
    double k_ms = 0.0;
    double beta = 1.268;

    /// Pre: delta_t >= dt_min; throws CalibrationError otherwise.
    double decode(double delta_t_ms) const;

    /// Decode with the latency floored at dt_min, so pairs tighter than the
    /// calibration anchor saturate at strength 1.
    double decode_saturating(double delta_t_ms) const;
};

struct ReflexEvent {
    enum class Kind { MotorSpike, ReflexStrength };
    double t_ms = 0.0;
    Kind kind = Kind::MotorSpike;
    double g_s = 0.0; // valid for ReflexStrength
    std::string source = "neuromorphic";
};

/// Construction parameters of the reflex arc (everything except the learned
/// weights).
struct NetworkParams {
    double i_max = 8.0;          // shared sensory drive ceiling, also scales synaptic increments
    double t_max_c = 52.0;
    double tau_i_ms = 80.0;      // interneuron synaptic current decay
    double epsilon = 1.0;        // descending-control gain
    double jump_mv = 30.0;       // interneuron -> motor increment
    LifParams motor{};           // v_rest -70, tau_m 50, v_th (see config)
    bool motor_firing_enabled = true;
};

/// Sensory population -> interneuron -> motor neuron, plus the latency
/// decoder. One instance is a sequential state machine; independent copies
/// may run in parallel.
class ReflexNetwork {
public:
    struct StepResult {
        std::array<bool, SensoryPopulation::kCount> sensory_spiked{};
        std::array<double, SensoryPopulation::kCount> sensory_offset_ms{};
        bool interneuron_spiked = false;
        double interneuron_offset_ms = 0.0;
        bool motor_spiked = false;
    };

    ReflexNetwork(const NetworkParams& params, const SynapseSet& weights);

    /// One fixed-timestep update of all layers under the held temperature
    /// sample. Emitted events are appended to events().
    StepResult step(double t_sample_c, double dt_ms);

    /// Run a whole sampled trace with zero-order hold between samples.
    void run_samples(const std::vector<double>& samples_c, double sample_period_ms,
                     double dt_ms);

    void set_descending_control(double epsilon);
    void set_decoder(const ReflexDecoder& dec) { decoder_ = dec; }
    const std::optional<ReflexDecoder>& decoder() const { return decoder_; }

    const std::vector<ReflexEvent>& events() const { return events_; }
    std::vector<ReflexEvent> take_events();

    double now_ms() const { return t_ms_; }
    double interneuron_current() const { return i_syn_; }
    const IzhikevichNeuron& interneuron() const { return interneuron_; }
    const LifNeuron& motor() const { return motor_; }
    LifNeuron& motor() { return motor_; }
    const SensoryPopulation& sensory() const { return sensory_; }
    const SynapseSet& weights() const { return weights_; }
    SynapseSet& weights() { return weights_; }
    const NetworkParams& params() const { return params_; }

    /// Fresh dynamic state (neurons, currents, clock, events); weights and
    /// decoder are kept.
    void reset();

private:
    NetworkParams params_;
    SensoryPopulation sensory_;
    IzhikevichNeuron interneuron_;
    double i_syn_ = 0.0; // interneuron input current, non-negative
    LifNeuron motor_;
    SynapseSet weights_;
    std::optional<ReflexDecoder> decoder_;

    double t_ms_ = 0.0;
    std::vector<ReflexEvent> events_;
    double pending_motor_time_ms_ = 0.0;
    bool pending_motor_ = false;
    int motor_spike_count_ = 0;
    double last_motor_spike_ms_ = 0.0;

    friend class Trainer;
};

/// Motor spike times (refined, ms) produced by a fresh network instance under
/// an ideal stimulus; used by calibration and the experiment sweeps.
/// settle_ms of baseline precedes the stimulus, tail_ms follows it.
std::vector<double> ideal_response_motor_times(const NetworkParams& params,
                                               const SynapseSet& weights,
                                               double magnitude_c, double dt_ms,
                                               double stim_ms = 100.0,
                                               double settle_ms = 300.0,
                                               double tail_ms = 500.0,
                                               double baseline_c = 35.0);

/// Sweep ideal stimuli 40..52 degC (0.5 steps), take each point's first
/// motor-pair latency, anchor dt_min at the sweep minimum, and least-squares
/// fit k so the decoded curve has slope ln(beta) per degC.
/// Throws CalibrationError when any point above 46 degC yields fewer than two
/// motor spikes (or when no latency spread exists).
ReflexDecoder calibrate_decoder(const NetworkParams& params, const SynapseSet& weights,
                                double dt_ms, double beta = 1.268);

} // namespace nwr
