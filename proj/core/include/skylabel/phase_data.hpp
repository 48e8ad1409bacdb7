#pragma once

#include "skylabel/time.hpp"

#include <optional>
#include <string>
#include <vector>

namespace skylabel {

/// One timestamped CW-tone phase measurement.
struct PhaseSample {
    UtcTime epoch_utc{};
    double phase_rad = 0.0;
    std::optional<double> amplitude{};
};

/// Time-ordered measurements of a single channel (e.g. CW1, CW2).
struct PhaseSeries {
    std::string channel;
    std::vector<PhaseSample> samples;
};

/// Throws InvalidInput unless epochs are strictly increasing and all phases
/// finite.
void validate(const PhaseSeries& s);

} // namespace skylabel
