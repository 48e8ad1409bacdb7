#pragma once

#include "skylabel/phase_data.hpp"
#include "skylabel/signal.hpp"

#include <array>
#include <span>
#include <vector>

namespace skylabel {

struct EstimatorConfig {
    std::array<double, 2> tone_offsets_hz{-450.0, 450.0}; ///< CW1, CW2
    double integration_seconds = 1.0;
    double epoch_spacing_seconds = 60.0;
};

/// Throws ConfigError unless integration_seconds * (minimum tone
/// separation) >= 2, i.e. adjacent-tone leakage is suppressed.
void validate(const EstimatorConfig& cfg);

struct ToneEstimate {
    double phase_rad = 0.0; ///< referenced to the window start
    double amplitude = 0.0;
};

/// Single-bin correlation over the first integration window of `buf`:
/// multiply by the conjugate reference exponential at offset_hz, average,
/// take argument and modulus. Exact for a clean tone at offset_hz.
ToneEstimate estimate_tone(const IqBuffer& buf, double offset_hz, const EstimatorConfig& cfg);

struct EstimationResult {
    std::vector<PhaseSeries> series;     ///< one per tone; missing epochs absent
    std::vector<UtcTime> missing_epochs; ///< grid epochs without full coverage
};

/// Walks the stream on the epoch grid (stream start + k * spacing) and
/// estimates every tone wherever a full integration window of contiguous
/// samples exists. Gaps produce per-epoch missing markers, never a global
/// failure.
EstimationResult phase_series_from_iq(std::span<const IqBuffer> stream,
                                      const EstimatorConfig& cfg);

} // namespace skylabel
