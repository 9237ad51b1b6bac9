#pragma once

#include <array>
#include <vector>

#include "nwr/neuron.hpp"

namespace nwr {

/// Half-Gaussian temperature tuning of a heat-sensitive sensory neuron.
/// The drive saturates at the response ceiling temperature:
///
///   I(T) = I_max * exp(-(T_max - T)^2 / (2 sigma^2))   for T <  T_max
///   I(T) = I_max                                       for T >= T_max
///
/// with sigma = T_max - T_a, so every neuron receives the same drive
/// e^(-1/2) * I_max at its own preferred temperature T_a.
struct TuningCurve {
    double t_preferred_c;  // T_a
    double t_max_c = 52.0; // saturation temperature
    double i_max = 10.0;   // maximal input current (model units)

    double sigma_c() const { return t_max_c - t_preferred_c; }

    /// Input current for temperature t_c. Pre: t_c finite.
    double current(double t_c) const;
};

/// The three heat-sensitive sensory neurons with preferred temperatures
/// 38, 43 and 50 degC, each an intrinsically bursting Izhikevich unit driven
/// through its tuning curve. Index 0 -> 38, 1 -> 43, 2 -> 50 (the neuron
/// recruited last as intensity grows).
class SensoryPopulation {
public:
    static constexpr int kCount = 3;

    struct StepResult {
        std::array<bool, kCount> spiked{};
        std::array<double, kCount> spike_offset_ms{};
    };

    explicit SensoryPopulation(double i_max = 10.0, double t_max_c = 52.0);
    SensoryPopulation(const std::array<double, kCount>& preferred_c, double i_max,
                      double t_max_c);

    /// Step every neuron under the drive for temperature t_c.
    StepResult step(double t_c, double dt_ms);

    const TuningCurve& curve(int i) const { return curves_[i]; }
    const IzhikevichNeuron& neuron(int i) const { return neurons_[i]; }
    double preferred_c(int i) const { return curves_[i].t_preferred_c; }

    void reset();

private:
    std::array<TuningCurve, kCount> curves_;
    std::array<IzhikevichNeuron, kCount> neurons_;
};

} // namespace nwr
