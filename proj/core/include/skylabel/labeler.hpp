#pragma once

#include "skylabel/geo.hpp"
#include "skylabel/phase_data.hpp"
#include "skylabel/solar.hpp"

#include <span>
#include <vector>

namespace skylabel {

/// Default Z-score decision threshold.
inline constexpr double kDefaultZThreshold = 4.5;

/// Mean / sample standard deviation of a three-day daytime phase pool.
struct DaytimeStats {
    double mu_rad = 0.0;
    double sigma_rad = 0.0;
    std::size_t n = 0;
};

/// Per-epoch verdict together with the statistics that produced it.
struct LabelRecord {
    UtcTime epoch_utc{};
    std::string channel;
    double phase_rad = 0.0; ///< the (preprocessed) phase the Z-score used
    double z_score = 0.0;
    bool is_skywave = false;
    DaytimeStats stats{};
};

enum class Detrend { None, Linear };

struct PreprocessOptions {
    bool unwrap = true;
    Detrend detrend = Detrend::None;
};

/// Unwraps (successive differences brought into (-pi, pi] by adding
/// multiples of 2 pi) and optionally removes a least-squares linear trend.
/// When `detrend_fit_windows` is non-empty the trend is fitted on the
/// samples inside those windows only (the daytime pool) and subtracted from
/// every sample; otherwise it is fitted on the whole series.
PhaseSeries preprocess_phase(const PhaseSeries& series, const PreprocessOptions& opts,
                             std::span<const DaytimeWindow> detrend_fit_windows = {});

/// Phase values whose epochs fall inside any window ([start, end),
/// inclusive start, exclusive end), in their original order. Throws
/// InsufficientData when the pool is empty.
std::vector<double> daytime_pool(const PhaseSeries& series,
                                 std::span<const DaytimeWindow> windows);

/// Mean and sample (n-1) standard deviation. Requires at least two values.
DaytimeStats pool_stats(std::span<const double> pool);

/// |phi - mu| / sigma. For sigma = 0: zero when phi equals mu, +infinity
/// otherwise.
double z_score(double phi_rad, const DaytimeStats& stats);

/// True iff z_score(phi, stats) >= threshold (inclusive).
bool label_epoch(double phi_rad, const DaytimeStats& stats,
                 double threshold = kDefaultZThreshold);

/// Algorithm: pools daytime phases over [date-1, date+1], computes the
/// three-day statistics once, and emits one LabelRecord for every sample
/// whose epoch falls on `date` in the station-local zone of the policy.
/// Throws InsufficientData naming any daytime window the series does not
/// cover.
std::vector<LabelRecord> label_series(const PhaseSeries& series, const GeoPoint& p,
                                      CivilDate date, const WindowPolicy& policy,
                                      double threshold = kDefaultZThreshold,
                                      const PreprocessOptions& opts = {});

/// Convenience OR across channels: one record per epoch with channel
/// "combined", the maximum Z-score, and the verdict OR. Epochs present in
/// only some channels are combined over the channels that have them.
std::vector<LabelRecord> combined_or_labels(
    const std::vector<std::vector<LabelRecord>>& per_channel);

} // namespace skylabel
