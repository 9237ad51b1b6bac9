#include "nwr/learning.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace nwr {

namespace {

// Uniform double in [0, 1) from the top 53 bits of the generator output;
// keeps weight files bit-reproducible across library versions.
double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

} // namespace

double stdp_window(const StdpParams& p, double delta_t_ms) {
    if (!std::isfinite(delta_t_ms))
        throw std::invalid_argument("stdp window: delta_t must be finite");
    if (delta_t_ms < 0.0) return p.a_plus * std::exp(delta_t_ms / p.tau_plus_ms);
    return p.a_minus * std::exp(-delta_t_ms / p.tau_minus_ms);
}

void eligibility_on_pair(LearningState& state, const StdpParams& p, int synapse,
                         double delta_t_ms) {
    if (synapse < 0 || synapse >= SensoryPopulation::kCount)
        throw std::out_of_range("eligibility: unknown synapse index");
    state.eligibility[static_cast<std::size_t>(synapse)] += stdp_window(p, delta_t_ms);
}

void learning_step(LearningState& state, SynapseSet& weights, double dt_ms) {
    if (!(dt_ms > 0.0)) throw std::invalid_argument("learning step: dt must be positive");
    state.dopamine *= std::exp(-dt_ms / state.tau_c_ms);
    const double e_decay = std::exp(-dt_ms / state.tau_e_ms);
    for (int a = 0; a < SensoryPopulation::kCount; ++a) {
        state.eligibility[a] *= e_decay;
        weights.weights[a] += dt_ms * state.dopamine * state.eligibility[a] / state.tau_s_ms;
    }
    weights.clamp();
}

double ReflexTarget::normalized_strength(double t_c) const {
    if (!std::isfinite(t_c))
        throw std::invalid_argument("reflex target: temperature must be finite");
    return std::pow(beta, t_c - t_max_c);
}

double normalize_membrane(double v_m_mv, double v_rest_mv, double k_m_mv) {
    return (v_m_mv - v_rest_mv) / k_m_mv;
}

Trainer::Trainer(const NetworkParams& net_params, const TrainerConfig& cfg)
    : net_params_(net_params), cfg_(cfg) {
    net_params_.motor_firing_enabled = false;
    if (!(cfg.stim_ms > 0.0) || !(cfg.cooling_ms > 0.0))
        throw std::invalid_argument("trainer: phase durations must be positive");
}

std::pair<double, double> Trainer::run_episode(ReflexNetwork& net, LearningState& state,
                                               double intensity_c) {
    if (net.motor().firing_enabled())
        throw std::logic_error("run_episode: motor neuron must not fire during learning");

    const double dt = cfg_.dt_ms;
    const StdpParams& stdp = cfg_.stdp;
    const double pre_decay = std::exp(-dt / stdp.tau_plus_ms);
    const double post_decay = std::exp(-dt / stdp.tau_minus_ms);
    const double v_rest = net.params().motor.v_rest;

    double activation_peak = 0.0;

    const auto phase = [&](double t_c, double duration_ms, bool stimulation) {
        const auto n = static_cast<std::size_t>(std::llround(duration_ms / dt));
        for (std::size_t k = 0; k < n; ++k) {
            state.post_trace *= post_decay;
            for (auto& x : state.pre_trace) x *= pre_decay;

            const auto r = net.step(t_c, dt);

            // Post first: a pre spike in the same step pairs against the new
            // post trace, so simultaneous pairs land on the depression branch
            // (dt = 0 belongs to it).
            if (r.interneuron_spiked) {
                for (int a = 0; a < SensoryPopulation::kCount; ++a)
                    state.eligibility[a] += stdp.a_plus * state.pre_trace[a];
                state.post_trace += 1.0;
            }
            for (int a = 0; a < SensoryPopulation::kCount; ++a) {
                if (r.sensory_spiked[a]) {
                    state.eligibility[a] += stdp.a_minus * state.post_trace;
                    state.pre_trace[a] += 1.0;
                }
            }

            learning_step(state, net.weights(), dt);

            if (stimulation)
                activation_peak = std::max(
                    activation_peak, normalize_membrane(net.motor().v(), v_rest, cfg_.k_m_mv));
        }
    };

    phase(intensity_c, cfg_.stim_ms, true);
    const double reward =
        ReflexTarget{}.normalized_strength(intensity_c) - activation_peak;
    state.dopamine += reward;
    phase(cfg_.cooling_c, cfg_.cooling_ms, false);

    return {reward, activation_peak};
}

TrainingLog Trainer::train(SynapseSet& out_weights) {
    if (cfg_.episodes < 1) throw std::invalid_argument("train: episodes must be >= 1");

    std::mt19937_64 gen(cfg_.rng_seed);

    SynapseSet init;
    for (auto& w : init.weights)
        w = cfg_.init_weight + cfg_.init_weight_jitter * (2.0 * uniform01(gen) - 1.0);
    init.clamp();

    ReflexNetwork net(net_params_, init);
    LearningState state;
    state.tau_c_ms = cfg_.tau_c_ms;
    state.tau_e_ms = cfg_.tau_e_ms;
    state.tau_s_ms = cfg_.tau_s_ms;

    TrainingLog log;
    log.episodes.reserve(static_cast<std::size_t>(cfg_.episodes));
    for (int ep = 0; ep < cfg_.episodes; ++ep) {
        const double intensity =
            cfg_.intensity_min_c + (cfg_.intensity_max_c - cfg_.intensity_min_c) * uniform01(gen);
        const auto [reward, activation] = run_episode(net, state, intensity);
        log.episodes.push_back({ep, intensity, activation, reward, net.weights().weights});
    }

    // Divergence guard: a weight stuck on a bound through most of the final
    // quarter indicates the operating point escaped the trainable region.
    const std::size_t total = log.episodes.size();
    const std::size_t quarter_begin = total - total / 4;
    const double s_max = net.weights().s_max;
    for (int a = 0; a < SensoryPopulation::kCount; ++a) {
        std::size_t pinned = 0;
        for (std::size_t i = quarter_begin; i < total; ++i) {
            const double w = log.episodes[i].weights[a];
            if (w <= 1e-9 || w >= s_max - 1e-9) ++pinned;
        }
        if (2 * pinned > total - quarter_begin) {
            log.converged = false;
            log.note = "weight " + std::to_string(a) + " pinned to a bound over the final quarter";
        }
    }

    out_weights = net.weights();
    return log;
}

double measure_activation(const NetworkParams& params, const SynapseSet& weights,
                          double intensity_c, double k_m_mv, double dt_ms,
                          double stim_ms, double settle_ms, double baseline_c) {
    NetworkParams p = params;
    p.motor_firing_enabled = false;
    ReflexNetwork net(p, weights);
    const auto run = [&](double t_c, double duration_ms) {
        const auto n = static_cast<std::size_t>(std::llround(duration_ms / dt_ms));
        for (std::size_t k = 0; k < n; ++k) net.step(t_c, dt_ms);
    };
    run(baseline_c, settle_ms);
    double peak = 0.0;
    const auto n = static_cast<std::size_t>(std::llround(stim_ms / dt_ms));
    for (std::size_t k = 0; k < n; ++k) {
        net.step(intensity_c, dt_ms);
        peak = std::max(peak,
                        normalize_membrane(net.motor().v(), p.motor.v_rest, k_m_mv));
    }
    return peak;
}

} // namespace nwr
