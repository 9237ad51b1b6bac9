#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "nwr/network.hpp"

namespace nwr {

/// Spike-timing window F(dt), dt = t_pre - t_post:
///   A+ exp(dt / tau+)   for dt < 0   (pre before post, potentiation)
///   A- exp(-dt / tau-)  for dt >= 0  (post before pre, depression)
struct StdpParams {
    double a_plus = 0.01;
    double a_minus = -0.0105;
    double tau_plus_ms = 20.0;
    double tau_minus_ms = 20.0;
};

double stdp_window(const StdpParams& p, double delta_t_ms);

/// Per-synapse eligibility traces plus the shared dopamine level, with the
/// pre/post exponential accumulators that realize all-to-all pairing.
struct LearningState {
    std::array<double, SensoryPopulation::kCount> eligibility{};
    double dopamine = 0.0;

    double tau_c_ms = 200.0;
    double tau_e_ms = 500.0;
    double tau_s_ms = 1000.0;

    std::array<double, SensoryPopulation::kCount> pre_trace{};
    double post_trace = 0.0;
};

/// Accumulate one explicit pre/post pair into a synapse's eligibility.
/// Throws std::out_of_range on a bad synapse index.
void eligibility_on_pair(LearningState& state, const StdpParams& p, int synapse,
                         double delta_t_ms);

/// Decay dopamine and eligibility by dt and integrate the weights:
///   ds/dt = C * e / tau_s, clamped to [0, s_max].
void learning_step(LearningState& state, SynapseSet& weights, double dt_ms);

/// Normalized target reflex strength |rho| = beta^(T - T_max); equals 1 at
/// the saturation temperature.
struct ReflexTarget {
    double beta = 1.268;
    double t_max_c = 52.0;

    double normalized_strength(double t_c) const;
};

/// Map the firing-disabled motor membrane onto [0, 1]:
/// (v_m - v_rest) / K_m, with K_m the peak-response scale.
double normalize_membrane(double v_m_mv, double v_rest_mv, double k_m_mv);

struct TrainerConfig {
    int episodes = 1500;
    double intensity_min_c = 38.0;
    double intensity_max_c = 52.0;
    double stim_ms = 100.0;
    double cooling_ms = 2000.0;
    double cooling_c = 35.0;
    double k_m_mv = 140.0;
    std::uint64_t rng_seed = 1;
    double dt_ms = 0.1;
    StdpParams stdp{};
    double tau_c_ms = 200.0;
    double tau_e_ms = 500.0;
    double tau_s_ms = 1000.0;
    double init_weight = 0.25;
    double init_weight_jitter = 0.05;
};

struct EpisodeRecord {
    int episode;
    double intensity_c;
    double activation;
    double reward;
    std::array<double, SensoryPopulation::kCount> weights;
};

struct TrainingLog {
    std::vector<EpisodeRecord> episodes;
    bool converged = true;
    std::string note;
};

class Trainer {
public:
    Trainer(const NetworkParams& net_params, const TrainerConfig& cfg);

    /// One stimulation phase plus cooling phase on a firing-disabled network.
    /// Returns (injected reward, peak normalized activation). Throws
    /// std::logic_error when the motor neuron can fire.
    std::pair<double, double> run_episode(ReflexNetwork& net, LearningState& state,
                                          double intensity_c);

    /// Full training loop from seeded initial weights. The network is owned
    /// by the call; the final weights land in out_weights.
    TrainingLog train(SynapseSet& out_weights);

    const TrainerConfig& config() const { return cfg_; }

private:
    NetworkParams net_params_;
    TrainerConfig cfg_;
};

/// Peak normalized motor activation of a fresh firing-disabled network under
/// an ideal stimulus (the quantity trained toward |rho|).
double measure_activation(const NetworkParams& params, const SynapseSet& weights,
                          double intensity_c, double k_m_mv, double dt_ms,
                          double stim_ms = 100.0, double settle_ms = 300.0,
                          double baseline_c = 35.0);

} // namespace nwr
