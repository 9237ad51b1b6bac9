#include "nwr/sensory.hpp"

#include <cmath>
#include <stdexcept>

namespace nwr {

double TuningCurve::current(double t_c) const {
    if (!std::isfinite(t_c))
        throw std::invalid_argument("tuning current: temperature must be finite");
    if (t_c >= t_max_c) return i_max;
    const double z = (t_max_c - t_c) / sigma_c();
    return i_max * std::exp(-0.5 * z * z);
}

SensoryPopulation::SensoryPopulation(double i_max, double t_max_c)
    : SensoryPopulation({38.0, 43.0, 50.0}, i_max, t_max_c) {}

SensoryPopulation::SensoryPopulation(const std::array<double, kCount>& preferred_c,
                                     double i_max, double t_max_c) {
    for (int i = 0; i < kCount; ++i) {
        if (!(preferred_c[i] < t_max_c))
            throw std::invalid_argument("sensory population: T_a must be below T_max");
        curves_[i] = TuningCurve{preferred_c[i], t_max_c, i_max};
        neurons_[i] = IzhikevichNeuron(IzhikevichParams::intrinsically_bursting());
    }
}

SensoryPopulation::StepResult SensoryPopulation::step(double t_c, double dt_ms) {
    StepResult r;
    for (int i = 0; i < kCount; ++i) {
        r.spiked[i] = neurons_[i].step(curves_[i].current(t_c), dt_ms);
        r.spike_offset_ms[i] = r.spiked[i] ? neurons_[i].spike_offset_ms() : 0.0;
    }
    return r;
}

void SensoryPopulation::reset() {
    for (auto& n : neurons_) n.reset();
}

} // namespace nwr
