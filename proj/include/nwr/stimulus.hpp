#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nwr {

/// Raised for unreadable, malformed or non-physical stimulus data.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Uniformly sampled temperature-versus-time series. Physical bounds
/// [0, 120] degC are enforced at construction.
struct StimulusTrace {
    double sample_rate_hz = 100.0;
    double t_start_s = 0.0;
    std::vector<double> samples_c;

    double duration_ms() const {
        return 1000.0 * static_cast<double>(samples_c.size()) / sample_rate_hz;
    }
    double sample_period_ms() const { return 1000.0 / sample_rate_hz; }

    /// Validates rate, bounds and non-emptiness; throws DataError.
    void validate() const;
};

/// Rectangular ideal stimulus: baseline everywhere except [t0, t0 + ts),
/// where the temperature equals the magnitude. The onset sample is hot
/// (inclusive-onset step convention).
struct IdealStimulus {
    double magnitude_c;        // T_s
    double onset_ms = 0.0;     // t_0
    double duration_ms = 100.0;// t_s
    double baseline_c = 35.0;
};

/// Sample an ideal stimulus at the given rate over total_ms.
/// Pre: total_ms >= onset + duration.
StimulusTrace render_ideal(const IdealStimulus& s, double rate_hz, double total_ms);

/// A train of `count` rectangular pulses with onset-to-onset spacing
/// period_ms. Pre: period_ms >= pulse_ms, count >= 1.
StimulusTrace render_pulse_train(double peak_c, double baseline_c, double pulse_ms,
                                 double period_ms, int count, double rate_hz);

/// Load a `t_s,temp_C` CSV (optionally gzip-compressed, by .gz suffix).
/// Timestamps must be strictly increasing; if they deviate from the uniform
/// expected_rate grid by more than 1% anywhere, the trace is linearly
/// resampled onto that grid. Distinct DataErrors for missing files,
/// non-monotone timestamps and non-numeric fields.
StimulusTrace load_trace(const std::string& path, double expected_rate_hz);

/// Write a trace as a `t_s,temp_C` CSV (gzip-compressed when the path ends
/// in .gz).
void save_trace(const StimulusTrace& trace, const std::string& path);

} // namespace nwr
