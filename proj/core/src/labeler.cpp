#include "skylabel/labeler.hpp"

#include "skylabel/errors.hpp"
#include "skylabel/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>

namespace skylabel {

void validate(const PhaseSeries& s) {
    for (std::size_t i = 0; i < s.samples.size(); ++i) {
        if (!std::isfinite(s.samples[i].phase_rad))
            throw InvalidInput("phase series '" + s.channel + "' contains a non-finite phase");
        if (i > 0 && s.samples[i].epoch_utc <= s.samples[i - 1].epoch_utc)
            throw InvalidInput("phase series '" + s.channel +
                               "' epochs are not strictly increasing at " +
                               format_iso8601(s.samples[i].epoch_utc));
    }
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool in_window(UtcTime t, const DaytimeWindow& w) {
    return t >= w.start_utc && t < w.end_utc;
}

bool in_any_window(UtcTime t, std::span<const DaytimeWindow> windows) {
    return std::any_of(windows.begin(), windows.end(),
                       [&](const DaytimeWindow& w) { return in_window(t, w); });
}

double seconds_since(UtcTime t, UtcTime origin) {
    return std::chrono::duration<double>(t - origin).count();
}

} // namespace

PhaseSeries preprocess_phase(const PhaseSeries& series, const PreprocessOptions& opts,
                             std::span<const DaytimeWindow> detrend_fit_windows) {
    if (series.samples.empty())
        throw InsufficientData("cannot preprocess an empty phase series");
    validate(series);

    PhaseSeries out = series;

    if (opts.unwrap) {
        double accum = 0.0;
        for (std::size_t i = 1; i < out.samples.size(); ++i) {
            const double raw = series.samples[i].phase_rad - series.samples[i - 1].phase_rad;
            double step = std::remainder(raw, kTwoPi);
            if (step <= -std::numbers::pi)
                step += kTwoPi;
            accum += step - raw;
            out.samples[i].phase_rad = series.samples[i].phase_rad + accum;
        }
    }

    if (opts.detrend == Detrend::Linear) {
        // Least squares on the fit domain, subtracted from every sample.
        const UtcTime origin = out.samples.front().epoch_utc;
        double st = 0.0, sp = 0.0;
        std::size_t n = 0;
        for (const PhaseSample& s : out.samples) {
            if (!detrend_fit_windows.empty() && !in_any_window(s.epoch_utc, detrend_fit_windows))
                continue;
            st += seconds_since(s.epoch_utc, origin);
            sp += s.phase_rad;
            ++n;
        }
        if (n == 0)
            throw InsufficientData("linear detrend has no samples in its fit windows");
        const double tbar = st / double(n);
        const double pbar = sp / double(n);
        double stt = 0.0, stp = 0.0;
        for (const PhaseSample& s : out.samples) {
            if (!detrend_fit_windows.empty() && !in_any_window(s.epoch_utc, detrend_fit_windows))
                continue;
            const double dt = seconds_since(s.epoch_utc, origin) - tbar;
            stt += dt * dt;
            stp += dt * (s.phase_rad - pbar);
        }
        const double slope = stt > 0.0 ? stp / stt : 0.0;
        for (PhaseSample& s : out.samples) {
            const double t = seconds_since(s.epoch_utc, origin);
            s.phase_rad -= pbar + slope * (t - tbar);
        }
    }

    return out;
}

std::vector<double> daytime_pool(const PhaseSeries& series,
                                 std::span<const DaytimeWindow> windows) {
    std::vector<double> pool;
    for (const PhaseSample& s : series.samples) {
        if (in_any_window(s.epoch_utc, windows))
            pool.push_back(s.phase_rad);
    }
    if (pool.empty())
        throw InsufficientData("no samples of channel '" + series.channel +
                               "' fall inside the daytime windows");
    return pool;
}

DaytimeStats pool_stats(std::span<const double> pool) {
    if (pool.size() < 2)
        throw InsufficientData("daytime pool needs at least 2 samples, got " +
                               std::to_string(pool.size()));
    double sum = 0.0;
    for (double v : pool)
        sum += v;
    const double mu = sum / double(pool.size());
    double ss = 0.0;
    for (double v : pool)
        ss += (v - mu) * (v - mu);
    DaytimeStats st;
    st.mu_rad = mu;
    st.sigma_rad = std::sqrt(ss / double(pool.size() - 1));
    st.n = pool.size();
    return st;
}

double z_score(double phi_rad, const DaytimeStats& stats) {
    const double dev = std::abs(phi_rad - stats.mu_rad);
    if (stats.sigma_rad == 0.0)
        return dev == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return dev / stats.sigma_rad;
}

bool label_epoch(double phi_rad, const DaytimeStats& stats, double threshold) {
    if (!(threshold > 0.0))
        throw InvalidInput("Z-score threshold must be > 0");
    return z_score(phi_rad, stats) >= threshold;
}

std::vector<LabelRecord> label_series(const PhaseSeries& series, const GeoPoint& p,
                                      CivilDate date, const WindowPolicy& policy,
                                      double threshold, const PreprocessOptions& opts) {
    if (!(threshold > 0.0))
        throw InvalidInput("Z-score threshold must be > 0");

    const std::array<DaytimeWindow, 3> windows = three_day_windows(p, date, policy);

    std::string uncovered;
    for (int i = 0; i < 3; ++i) {
        const bool covered = std::any_of(
            series.samples.begin(), series.samples.end(),
            [&](const PhaseSample& s) { return in_window(s.epoch_utc, windows[i]); });
        if (!covered) {
            if (!uncovered.empty())
                uncovered += ", ";
            uncovered += format_date(shift_date(date, i - 1)) + " [" +
                         format_iso8601(windows[i].start_utc) + ", " +
                         format_iso8601(windows[i].end_utc) + ")";
        }
    }
    if (!uncovered.empty())
        throw InsufficientData("phase series '" + series.channel +
                               "' has no samples in daytime window(s): " + uncovered);

    const PhaseSeries prepped = preprocess_phase(series, opts, windows);
    const std::vector<double> pool = daytime_pool(prepped, windows);
    const DaytimeStats stats = pool_stats(pool);

    std::vector<LabelRecord> records;
    for (const PhaseSample& s : prepped.samples) {
        if (local_civil_date(s.epoch_utc, policy.utc_offset_hours) != date)
            continue;
        LabelRecord r;
        r.epoch_utc = s.epoch_utc;
        r.channel = prepped.channel;
        r.phase_rad = s.phase_rad;
        r.z_score = z_score(s.phase_rad, stats);
        r.is_skywave = r.z_score >= threshold;
        r.stats = stats;
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<LabelRecord> combined_or_labels(
    const std::vector<std::vector<LabelRecord>>& per_channel) {
    std::map<UtcTime, LabelRecord> merged;
    for (const auto& records : per_channel) {
        for (const LabelRecord& r : records) {
            auto [it, fresh] = merged.try_emplace(r.epoch_utc, r);
            if (!fresh) {
                const bool verdict = it->second.is_skywave || r.is_skywave;
                if (r.z_score > it->second.z_score)
                    it->second = r;
                it->second.is_skywave = verdict;
            }
        }
    }
    std::vector<LabelRecord> out;
    out.reserve(merged.size());
    for (auto& [epoch, r] : merged) {
        r.channel = "combined";
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace skylabel
