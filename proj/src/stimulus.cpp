#include "nwr/stimulus.hpp"

#include <zlib.h>

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace nwr {

namespace {

constexpr double kMinTempC = 0.0;
constexpr double kMaxTempC = 120.0;

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

double parse_field(const std::string& field, const std::string& path, std::size_t line_no) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    while (first != last && (*first == ' ' || *first == '\t')) ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw DataError(path + ":" + std::to_string(line_no) + ": non-numeric field '" +
                        field + "'");
    return value;
}

std::string read_whole_file(const std::string& path) {
    if (ends_with(path, ".gz")) {
        gzFile gz = gzopen(path.c_str(), "rb");
        if (!gz) throw DataError("cannot open stimulus file: " + path);
        std::string out;
        char buf[1 << 15];
        int n = 0;
        while ((n = gzread(gz, buf, sizeof buf)) > 0) out.append(buf, static_cast<size_t>(n));
        const bool bad = n < 0;
        gzclose(gz);
        if (bad) throw DataError("gzip read error: " + path);
        return out;
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open stimulus file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

void StimulusTrace::validate() const {
    if (!(sample_rate_hz > 0.0)) throw DataError("trace: sample rate must be positive");
    if (samples_c.empty()) throw DataError("trace: at least one sample required");
    for (double s : samples_c) {
        if (!std::isfinite(s)) throw DataError("trace: non-finite sample");
        if (s < kMinTempC || s > kMaxTempC)
            throw DataError("trace: sample outside physical bounds [0, 120] degC");
    }
}

StimulusTrace render_ideal(const IdealStimulus& s, double rate_hz, double total_ms) {
    if (!(s.duration_ms > 0.0)) throw DataError("ideal stimulus: duration must be positive");
    if (!(s.magnitude_c > s.baseline_c))
        throw DataError("ideal stimulus: magnitude must exceed baseline");
    if (total_ms < s.onset_ms + s.duration_ms)
        throw DataError("ideal stimulus: total duration shorter than onset + duration");

    StimulusTrace trace;
    trace.sample_rate_hz = rate_hz;
    const double period_ms = 1000.0 / rate_hz;
    const auto n = static_cast<std::size_t>(std::llround(total_ms / period_ms));
    trace.samples_c.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * period_ms;
        const bool hot = t >= s.onset_ms && t < s.onset_ms + s.duration_ms;
        trace.samples_c.push_back(hot ? s.magnitude_c : s.baseline_c);
    }
    trace.validate();
    return trace;
}

StimulusTrace render_pulse_train(double peak_c, double baseline_c, double pulse_ms,
                                 double period_ms, int count, double rate_hz) {
    if (count < 1) throw DataError("pulse train: count must be >= 1");
    if (!(period_ms >= pulse_ms)) throw DataError("pulse train: period shorter than pulse");
    if (!(pulse_ms > 0.0)) throw DataError("pulse train: pulse width must be positive");
    if (!(peak_c > baseline_c)) throw DataError("pulse train: peak must exceed baseline");

    const double total_ms = static_cast<double>(count - 1) * period_ms + pulse_ms;
    StimulusTrace trace;
    trace.sample_rate_hz = rate_hz;
    const double sample_ms = 1000.0 / rate_hz;
    const auto n = static_cast<std::size_t>(std::llround(total_ms / sample_ms));
    trace.samples_c.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * sample_ms;
        bool hot = false;
        for (int p = 0; p < count; ++p) {
            const double onset = static_cast<double>(p) * period_ms;
            if (t >= onset && t < onset + pulse_ms) {
                hot = true;
                break;
            }
        }
        trace.samples_c.push_back(hot ? peak_c : baseline_c);
    }
    trace.validate();
    return trace;
}

StimulusTrace load_trace(const std::string& path, double expected_rate_hz) {
    if (!(expected_rate_hz > 0.0)) throw DataError("load_trace: expected rate must be positive");
    const std::string content = read_whole_file(path);

    std::vector<double> times_s;
    std::vector<double> temps_c;
    std::istringstream lines(content);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1 && line.rfind("t_s", 0) == 0) continue; // header
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw DataError(path + ":" + std::to_string(line_no) + ": expected 't_s,temp_C'");
        times_s.push_back(parse_field(line.substr(0, comma), path, line_no));
        temps_c.push_back(parse_field(line.substr(comma + 1), path, line_no));
    }
    if (times_s.empty()) throw DataError(path + ": no samples");

    for (std::size_t i = 1; i < times_s.size(); ++i)
        if (!(times_s[i] > times_s[i - 1]))
            throw DataError(path + ": non-monotone timestamps at row " + std::to_string(i + 1));

    const double period_s = 1.0 / expected_rate_hz;
    bool uniform = true;
    for (std::size_t i = 0; i < times_s.size(); ++i) {
        const double expected = times_s[0] + static_cast<double>(i) * period_s;
        if (std::abs(times_s[i] - expected) > 0.01 * period_s) {
            uniform = false;
            break;
        }
    }

    StimulusTrace trace;
    trace.sample_rate_hz = expected_rate_hz;
    trace.t_start_s = times_s[0];
    if (uniform) {
        trace.samples_c = std::move(temps_c);
    } else {
        // Linear resampling onto the uniform grid spanning the recording.
        const double t_end = times_s.back();
        std::size_t src = 0;
        for (double t = times_s[0]; t <= t_end + 1e-12; t += period_s) {
            while (src + 1 < times_s.size() && times_s[src + 1] < t) ++src;
            if (src + 1 >= times_s.size()) {
                trace.samples_c.push_back(temps_c.back());
                continue;
            }
            const double t0 = times_s[src], t1 = times_s[src + 1];
            const double w = (t - t0) / (t1 - t0);
            trace.samples_c.push_back(temps_c[src] * (1.0 - w) + temps_c[src + 1] * w);
        }
    }
    trace.validate();
    return trace;
}

void save_trace(const StimulusTrace& trace, const std::string& path) {
    trace.validate();
    std::ostringstream out;
    out << "t_s,temp_C\n";
    const double period_s = 1.0 / trace.sample_rate_hz;
    out.precision(10);
    for (std::size_t i = 0; i < trace.samples_c.size(); ++i) {
        out << (trace.t_start_s + static_cast<double>(i) * period_s) << ','
            << trace.samples_c[i] << '\n';
    }
    const std::string text = out.str();

    if (ends_with(path, ".gz")) {
        gzFile gz = gzopen(path.c_str(), "wb");
        if (!gz) throw DataError("cannot write stimulus file: " + path);
        const int written = gzwrite(gz, text.data(), static_cast<unsigned>(text.size()));
        gzclose(gz);
        if (written != static_cast<int>(text.size()))
            throw DataError("gzip write error: " + path);
        return;
    }
    std::ofstream out_file(path, std::ios::binary);
    if (!out_file) throw DataError("cannot write stimulus file: " + path);
    out_file << text;
}

} // namespace nwr
