#include "nwr/network.hpp"

#include <algorithm>
#include <cmath>

namespace nwr {

void SynapseSet::clamp() {
    for (auto& w : weights) w = std::clamp(w, 0.0, s_max);
}

double ReflexDecoder::decode(double delta_t_ms) const {
    if (delta_t_ms < dt_min_ms)
        throw CalibrationError("decode: latency below calibrated minimum");
    return std::pow(beta, (dt_min_ms - delta_t_ms) / k_ms);
}

double ReflexDecoder::decode_saturating(double delta_t_ms) const {
    return decode(std::max(delta_t_ms, dt_min_ms));
}

ReflexNetwork::ReflexNetwork(const NetworkParams& params, const SynapseSet& weights)
    : params_(params),
      sensory_(params.i_max, params.t_max_c),
      interneuron_(IzhikevichParams::intrinsically_bursting()),
      motor_(params.motor, params.motor_firing_enabled),
      weights_(weights) {
    if (!(params.epsilon >= 0.0))
        throw std::invalid_argument("network: epsilon must be non-negative");
    weights_.clamp();
}

ReflexNetwork::StepResult ReflexNetwork::step(double t_sample_c, double dt_ms) {
    StepResult r;

    // Layer order fixes a one-step synaptic latency: each layer integrates
    // the input it had at the start of the step.
    const auto sens = sensory_.step(t_sample_c, dt_ms);
    r.sensory_spiked = sens.spiked;
    r.sensory_offset_ms = sens.spike_offset_ms;

    r.interneuron_spiked = interneuron_.step(i_syn_, dt_ms);
    if (r.interneuron_spiked) r.interneuron_offset_ms = interneuron_.spike_offset_ms();

    i_syn_ *= std::exp(-dt_ms / params_.tau_i_ms);
    for (int a = 0; a < SensoryPopulation::kCount; ++a) {
        if (sens.spiked[a])
            i_syn_ += params_.epsilon * weights_.weights[a] * params_.i_max;
    }

    r.motor_spiked = motor_.step(dt_ms);
    if (r.motor_spiked) {
        const double t_spike = pending_motor_ ? pending_motor_time_ms_ : t_ms_;
        pending_motor_ = false;
        events_.push_back({t_spike, ReflexEvent::Kind::MotorSpike, 0.0, "neuromorphic"});
        ++motor_spike_count_;
        if (motor_spike_count_ % 2 == 0 && decoder_.has_value()) {
            const double delta_t = t_spike - last_motor_spike_ms_;
            events_.push_back({t_ms_ + dt_ms, ReflexEvent::Kind::ReflexStrength,
                               decoder_->decode_saturating(delta_t), "neuromorphic"});
        }
        last_motor_spike_ms_ = t_spike;
    }

    if (r.interneuron_spiked) {
        motor_.receive_spike(params_.jump_mv);
        if (motor_.firing_enabled() && motor_.v() >= params_.motor.v_th && !pending_motor_) {
            pending_motor_ = true;
            pending_motor_time_ms_ = t_ms_ + r.interneuron_offset_ms;
        }
    }

    t_ms_ += dt_ms;
    return r;
}

void ReflexNetwork::run_samples(const std::vector<double>& samples_c,
                                double sample_period_ms, double dt_ms) {
    const auto steps_per_sample =
        static_cast<std::size_t>(std::llround(sample_period_ms / dt_ms));
    for (const double t_c : samples_c)
        for (std::size_t k = 0; k < steps_per_sample; ++k) step(t_c, dt_ms);
}

void ReflexNetwork::set_descending_control(double epsilon) {
    if (!(epsilon >= 0.0))
        throw std::invalid_argument("descending control: epsilon must be non-negative");
    params_.epsilon = epsilon;
}

std::vector<ReflexEvent> ReflexNetwork::take_events() {
    std::vector<ReflexEvent> out;
    out.swap(events_);
    return out;
}

void ReflexNetwork::reset() {
    sensory_.reset();
    interneuron_.reset();
    i_syn_ = 0.0;
    motor_.reset();
    t_ms_ = 0.0;
    events_.clear();
    pending_motor_ = false;
    pending_motor_time_ms_ = 0.0;
    motor_spike_count_ = 0;
    last_motor_spike_ms_ = 0.0;
}

std::vector<double> ideal_response_motor_times(const NetworkParams& params,
                                               const SynapseSet& weights,
                                               double magnitude_c, double dt_ms,
                                               double stim_ms, double settle_ms,
                                               double tail_ms, double baseline_c) {
    ReflexNetwork net(params, weights);
    const auto run_phase = [&](double t_c, double duration_ms) {
        const auto n = static_cast<std::size_t>(std::llround(duration_ms / dt_ms));
        for (std::size_t k = 0; k < n; ++k) net.step(t_c, dt_ms);
    };
    run_phase(baseline_c, settle_ms);
    const double stim_begin = net.now_ms();
    run_phase(magnitude_c, stim_ms);
    run_phase(baseline_c, tail_ms);

    std::vector<double> times;
    for (const auto& e : net.events())
        if (e.kind == ReflexEvent::Kind::MotorSpike && e.t_ms >= stim_begin)
            times.push_back(e.t_ms - stim_begin);
    return times;
}

ReflexDecoder calibrate_decoder(const NetworkParams& params, const SynapseSet& weights,
                                double dt_ms, double beta) {
    struct Point {
        double t_c;
        double first_pair_dt;
    };
    std::vector<Point> points;
    for (double t_c = 40.0; t_c <= 52.0 + 1e-9; t_c += 0.5) {
        const auto spikes = ideal_response_motor_times(params, weights, t_c, dt_ms);
        if (spikes.size() >= 2) {
            points.push_back({t_c, spikes[1] - spikes[0]});
        } else if (t_c > 46.0) {
            throw CalibrationError("calibration: fewer than two motor spikes at " +
                                   std::to_string(t_c) + " degC");
        }
    }
    if (points.size() < 2)
        throw CalibrationError("calibration: not enough responsive sweep points");

    double dt_min = points.front().first_pair_dt;
    for (const auto& p : points) dt_min = std::min(dt_min, p.first_pair_dt);

    // ln g_s = (dt_min - dt)/k * ln(beta) should match (T - T_max) * ln(beta),
    // i.e. (dt_min - dt)/k = T - 52. Least squares over the responsive points.
    double sum_yy = 0.0;
    double sum_xy = 0.0;
    for (const auto& p : points) {
        const double y = dt_min - p.first_pair_dt; // <= 0
        const double x = p.t_c - 52.0;             // <= 0
        sum_yy += y * y;
        sum_xy += x * y;
    }
    if (!(sum_xy > 0.0))
        throw CalibrationError("calibration: no usable latency spread across the sweep");
    const double k = sum_yy / sum_xy;
    if (!(k > 0.0) || !std::isfinite(k))
        throw CalibrationError("calibration: non-positive latency scale");

    return ReflexDecoder{dt_min, k, beta};
}

} // namespace nwr
