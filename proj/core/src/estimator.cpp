#include "skylabel/estimator.hpp"

#include "skylabel/errors.hpp"
#include "skylabel/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace skylabel {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ToneEstimate correlate(std::span<const std::complex<double>> window, double offset_hz,
                       double sample_rate_hz) {
    const double w = -kTwoPi * offset_hz / sample_rate_hz;
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t n = 0; n < window.size(); ++n) {
        const double ph = w * double(n);
        acc += window[n] * std::complex<double>(std::cos(ph), std::sin(ph));
    }
    acc /= double(window.size());
    return ToneEstimate{wrap_phase(std::arg(acc)), std::abs(acc)};
}

} // namespace

void validate(const EstimatorConfig& cfg) {
    if (!(cfg.integration_seconds > 0.0) || !std::isfinite(cfg.integration_seconds))
        throw ConfigError("integration_seconds must be finite and > 0");
    if (!(cfg.epoch_spacing_seconds > 0.0) || !std::isfinite(cfg.epoch_spacing_seconds))
        throw ConfigError("epoch_spacing_seconds must be finite and > 0");
    const double separation = std::abs(cfg.tone_offsets_hz[1] - cfg.tone_offsets_hz[0]);
    if (cfg.integration_seconds * separation < 2.0)
        throw ConfigError("integration window too short: integration_seconds * tone separation "
                          "must be >= 2 to suppress adjacent-tone leakage");
}

ToneEstimate estimate_tone(const IqBuffer& buf, double offset_hz, const EstimatorConfig& cfg) {
    if (!(cfg.integration_seconds > 0.0) || !std::isfinite(cfg.integration_seconds))
        throw ConfigError("integration_seconds must be finite and > 0");
    if (!(buf.sample_rate_hz > 0.0))
        throw InvalidInput("IQ buffer sample rate must be > 0");
    const std::size_t window =
        std::size_t(std::llround(cfg.integration_seconds * buf.sample_rate_hz));
    if (window == 0)
        throw ConfigError("integration window shorter than one sample");
    if (buf.samples.size() < window)
        throw InsufficientData("buffer holds " + std::to_string(buf.samples.size()) +
                               " samples, integration window needs " + std::to_string(window));
    return correlate(std::span(buf.samples).first(window), offset_hz, buf.sample_rate_hz);
}

EstimationResult phase_series_from_iq(std::span<const IqBuffer> stream,
                                      const EstimatorConfig& cfg) {
    validate(cfg);
    if (stream.empty())
        throw InsufficientData("IQ stream is empty");
    const double fs = stream.front().sample_rate_hz;
    for (const IqBuffer& b : stream) {
        if (b.samples.empty())
            throw InvalidInput("IQ stream contains an empty buffer");
        if (b.sample_rate_hz != fs)
            throw ConfigError("IQ stream mixes sample rates");
    }

    // Group the stream into contiguous runs; an epoch is estimable only if
    // one run covers its whole integration window.
    struct Run {
        UtcTime start;
        std::vector<std::complex<double>> samples;
    };
    const auto sample_ms = [&](std::size_t count) {
        return std::chrono::milliseconds(std::llround(double(count) / fs * 1000.0));
    };
    std::vector<Run> runs;
    for (const IqBuffer& b : stream) {
        if (!runs.empty()) {
            const UtcTime expected = runs.back().start + sample_ms(runs.back().samples.size());
            const auto gap = std::chrono::duration<double>(b.start_epoch_utc - expected).count();
            if (std::abs(gap) < 0.5 / fs) {
                runs.back().samples.insert(runs.back().samples.end(), b.samples.begin(),
                                           b.samples.end());
                continue;
            }
            if (gap < 0.0)
                throw ConfigError("IQ stream buffers overlap at " +
                                  format_iso8601(b.start_epoch_utc));
        }
        runs.push_back(Run{b.start_epoch_utc, b.samples});
    }

    const std::size_t window = std::size_t(std::llround(cfg.integration_seconds * fs));
    const auto spacing =
        std::chrono::milliseconds(std::llround(cfg.epoch_spacing_seconds * 1000.0));
    const UtcTime t0 = runs.front().start;
    const UtcTime stream_end = runs.back().start + sample_ms(runs.back().samples.size());

    EstimationResult result;
    for (std::size_t c = 0; c < 2; ++c)
        result.series.push_back(PhaseSeries{kCwChannelNames[c], {}});

    for (UtcTime t = t0; t + std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::duration<double>(cfg.integration_seconds)) <=
                         stream_end;
         t += spacing) {
        const Run* covering = nullptr;
        std::size_t first = 0;
        for (const Run& r : runs) {
            const double off = std::chrono::duration<double>(t - r.start).count() * fs;
            const std::size_t idx = std::size_t(std::llround(off));
            if (off > -0.5 && idx + window <= r.samples.size()) {
                covering = &r;
                first = idx;
                break;
            }
        }
        if (covering == nullptr) {
            result.missing_epochs.push_back(t);
            continue;
        }
        for (std::size_t c = 0; c < 2; ++c) {
            const ToneEstimate est =
                correlate(std::span(covering->samples).subspan(first, window),
                          cfg.tone_offsets_hz[c], fs);
            result.series[c].samples.push_back(PhaseSample{t, est.phase_rad, est.amplitude});
        }
    }
    return result;
}

} // namespace skylabel
