#include "skylabel/errors.hpp"
#include "skylabel/labeler.hpp"
#include "skylabel/propagation.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

using namespace skylabel;
using namespace std::chrono;

namespace {

constexpr double kPi = std::numbers::pi;
const GeoPoint kDaesan{37.00, 126.35};

PhaseSeries series_from(std::vector<double> phases, UtcTime t0 = {},
                        seconds step = seconds{60}) {
    PhaseSeries s;
    s.channel = "CW1";
    for (std::size_t i = 0; i < phases.size(); ++i)
        s.samples.push_back({t0 + step * i, phases[i], std::nullopt});
    return s;
}

DaytimeWindow window(UtcTime start, UtcTime end) { return DaytimeWindow{start, end}; }

} // namespace

TEST_CASE("unwrap recovers a wrapped ramp") {
    const std::vector<double> truth{0.0, 3.0, 6.0, 9.0};
    std::vector<double> wrapped;
    for (double v : truth)
        wrapped.push_back(wrap_phase(v));
    const PhaseSeries out = preprocess_phase(series_from(wrapped), {});
    REQUIRE(out.samples.size() == truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i)
        CHECK(out.samples[i].phase_rad == doctest::Approx(truth[i]).epsilon(1e-12));
}

TEST_CASE("unwrap recovers any series with sub-pi steps") {
    std::mt19937_64 rng(1618);
    std::uniform_real_distribution<double> step(-3.0, 3.0); // |step| < pi
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> truth{0.25 * step(rng)};
        for (int i = 0; i < 300; ++i)
            truth.push_back(truth.back() + step(rng));
        std::vector<double> wrapped;
        for (double v : truth)
            wrapped.push_back(wrap_phase(v));
        const PhaseSeries out = preprocess_phase(series_from(wrapped), {});
        for (std::size_t i = 0; i < truth.size(); ++i)
            CHECK(out.samples[i].phase_rad ==
                  doctest::Approx(truth[i] - truth[0] + wrapped[0]).epsilon(1e-9));
    }
}

TEST_CASE("preprocess leaves constants and unwrap=false inputs unchanged") {
    const PhaseSeries constant = series_from({1.1, 1.1, 1.1, 1.1});
    const PhaseSeries out = preprocess_phase(constant, {});
    for (std::size_t i = 0; i < out.samples.size(); ++i)
        CHECK(out.samples[i].phase_rad == 1.1);

    const PhaseSeries jumpy = series_from({0.0, 3.0, -0.2832, 2.7168});
    PreprocessOptions off;
    off.unwrap = false;
    const PhaseSeries same = preprocess_phase(jumpy, off);
    for (std::size_t i = 0; i < same.samples.size(); ++i)
        CHECK(same.samples[i].phase_rad == jumpy.samples[i].phase_rad);
}

TEST_CASE("linear detrend removes a clock ramp") {
    // 2 mrad/min ramp plus offset, no wrap events
    std::vector<double> phases;
    for (int i = 0; i < 200; ++i)
        phases.push_back(0.4 + 2e-3 * i);
    PreprocessOptions opts;
    opts.detrend = Detrend::Linear;
    const PhaseSeries out = preprocess_phase(series_from(phases), opts);
    for (const PhaseSample& s : out.samples)
        CHECK(std::abs(s.phase_rad) < 1e-9);
}

TEST_CASE("linear detrend fits on the given windows only") {
    // flat inside the fit window, steep ramp outside; the fitted line must
    // come from the flat part
    const UtcTime t0 = parse_iso8601("2023-02-11T00:00:00Z");
    std::vector<double> phases;
    for (int i = 0; i < 100; ++i)
        phases.push_back(1.0); // fit region
    for (int i = 0; i < 100; ++i)
        phases.push_back(50.0); // night outlier region, excluded from the fit
    PhaseSeries s = series_from(phases, t0);

    const DaytimeWindow fit = window(t0, t0 + minutes{100});
    PreprocessOptions opts;
    opts.unwrap = false;
    opts.detrend = Detrend::Linear;
    const PhaseSeries out = preprocess_phase(s, opts, std::span(&fit, 1));
    for (int i = 0; i < 100; ++i)
        CHECK(out.samples[std::size_t(i)].phase_rad == doctest::Approx(0.0));
    for (int i = 100; i < 200; ++i)
        CHECK(out.samples[std::size_t(i)].phase_rad == doctest::Approx(49.0));
}

TEST_CASE("daytime pool: boundary convention and counting") {
    const UtcTime t0 = parse_iso8601("2023-02-11T00:00:00Z");
    PhaseSeries s = series_from({1.0, 2.0, 3.0}, t0, minutes{30});
    // window [t0, t0+60min): sample at start included, at end excluded
    const DaytimeWindow w = window(t0, t0 + minutes{60});
    const auto pool = daytime_pool(s, std::span(&w, 1));
    REQUIRE(pool.size() == 2);
    CHECK(pool[0] == 1.0);
    CHECK(pool[1] == 2.0);

    SUBCASE("all samples at night is an error") {
        const DaytimeWindow night = window(t0 + hours{20}, t0 + hours{22});
        CHECK_THROWS_AS(daytime_pool(s, std::span(&night, 1)), InsufficientData);
    }

    SUBCASE("1/min series over 3 days with 8 h windows pools 1440 values") {
        std::vector<double> phases(3 * 24 * 60, 0.0);
        const PhaseSeries big = series_from(phases, t0);
        std::array<DaytimeWindow, 3> windows;
        for (int d = 0; d < 3; ++d)
            windows[d] = window(t0 + hours{24 * d + 8}, t0 + hours{24 * d + 16});
        CHECK(daytime_pool(big, windows).size() == 1440);
    }
}

TEST_CASE("pool statistics: mean and sample standard deviation") {
    const std::vector<double> pool{1.0, 2.0, 3.0, 4.0, 5.0};
    const DaytimeStats st = pool_stats(pool);
    CHECK(st.mu_rad == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(st.sigma_rad == doctest::Approx(std::sqrt(2.5)).epsilon(1e-15));
    CHECK(st.n == 5);

    const std::vector<double> constant{0.7, 0.7, 0.7, 0.7};
    const DaytimeStats cs = pool_stats(constant);
    CHECK(cs.mu_rad == doctest::Approx(0.7));
    CHECK(cs.sigma_rad == 0.0);

    const std::vector<double> pair{-1.5, 1.5};
    const DaytimeStats ps = pool_stats(pair);
    CHECK(ps.mu_rad == doctest::Approx(0.0));
    CHECK(ps.sigma_rad == doctest::Approx(1.5 * std::sqrt(2.0)).epsilon(1e-15));

    const std::vector<double> lone{1.0};
    CHECK_THROWS_AS(pool_stats(lone), InsufficientData);
}

TEST_CASE("z-score values and the sigma = 0 limit") {
    const std::vector<double> pool{1.0, 2.0, 3.0, 4.0, 5.0};
    const DaytimeStats st = pool_stats(pool);
    CHECK(z_score(3.0, st) == 0.0);
    CHECK(z_score(11.0, st) == doctest::Approx(8.0 / std::sqrt(2.5)).epsilon(1e-12));
    CHECK(z_score(5.0, st) == doctest::Approx(2.0 / std::sqrt(2.5)).epsilon(1e-12));

    const DaytimeStats flat{0.7, 0.0, 10};
    CHECK(z_score(0.7, flat) == 0.0);
    CHECK(std::isinf(z_score(0.8, flat)));
    CHECK(label_epoch(0.8, flat));
    CHECK_FALSE(label_epoch(0.7, flat));
}

TEST_CASE("labels at and around the 4.5 threshold") {
    const std::vector<double> pool{1.0, 2.0, 3.0, 4.0, 5.0};
    const DaytimeStats st = pool_stats(pool);
    CHECK(label_epoch(11.0, st));       // S ~ 5.06
    CHECK_FALSE(label_epoch(5.0, st));  // S ~ 1.26

    // mu = 0, sigma = 2 exactly, probe 9 -> S = 4.5 exactly: inclusive
    const std::vector<double> exact{-2.0, 0.0, 2.0};
    const DaytimeStats es = pool_stats(exact);
    REQUIRE(es.sigma_rad == 2.0);
    CHECK(z_score(9.0, es) == 4.5);
    CHECK(label_epoch(9.0, es));
    CHECK_FALSE(label_epoch(std::nextafter(9.0, 0.0), es));
}

TEST_CASE("labeler matches the brute-force oracle on random pools") {
    std::mt19937_64 rng(20230212);
    std::uniform_int_distribution<std::size_t> pool_size(2, 3000);
    std::uniform_real_distribution<double> scale(1e-6, 1e4);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> probe_pull(-8.0, 8.0);

    // constant pools use exactly summable values so that sigma is exactly
    // zero on any evaluation order
    const double exact_consts[] = {-2.0, -0.5, 0.0, 0.5, 1.0, 3.0};
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = pool_size(rng);
        const double s = scale(rng);
        const bool constant = trial % 17 == 0;
        const double base =
            constant ? exact_consts[std::size_t(trial) % std::size(exact_consts)]
                     : unit(rng) * 100.0;
        std::vector<double> pool(n);
        for (double& v : pool)
            v = constant ? base : base + s * unit(rng);
        const DaytimeStats st = pool_stats(pool);
        const oracle::BruteStats ref = oracle::brute_stats(pool);

        for (int p = 0; p < 5; ++p) {
            const double probe = base + s * probe_pull(rng);
            const double z = z_score(probe, st);
            const double zr = oracle::brute_z(probe, ref);
            if (std::isinf(zr))
                CHECK(std::isinf(z));
            else if (zr > 0.0)
                CHECK(z == doctest::Approx(zr).epsilon(1e-12));
            CHECK(label_epoch(probe, st) == oracle::brute_label(probe, ref, 4.5));
        }
    }
}

TEST_CASE("labels are invariant under affine data transforms") {
    std::mt19937_64 rng(5150);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::uniform_real_distribution<double> coeff(0.1, 10.0);

    std::vector<double> pool(500);
    for (double& v : pool)
        v = noise(rng);
    std::vector<double> probes(50);
    for (double& v : probes)
        v = 6.0 * noise(rng);

    for (int rep = 0; rep < 20; ++rep) {
        const double a = (rep % 2 ? -1.0 : 1.0) * coeff(rng);
        const double b = 20.0 * noise(rng);
        std::vector<double> mapped(pool.size());
        for (std::size_t i = 0; i < pool.size(); ++i)
            mapped[i] = a * pool[i] + b;
        const DaytimeStats st = pool_stats(pool);
        const DaytimeStats mt = pool_stats(mapped);
        for (double probe : probes)
            CHECK(label_epoch(probe, st) == label_epoch(a * probe + b, mt));
    }
}

TEST_CASE("verdict is monotone in the deviation from the mean") {
    const std::vector<double> pool{0.0, 1.0, 2.0, 3.0};
    const DaytimeStats st = pool_stats(pool);
    bool seen_true = false;
    for (double dev = 0.0; dev < 12.0; dev += 0.05) {
        const bool hi = label_epoch(st.mu_rad + dev, st);
        const bool lo = label_epoch(st.mu_rad - dev, st);
        CHECK(hi == lo);
        if (seen_true)
            CHECK(hi);
        seen_true = seen_true || hi;
    }
    CHECK(seen_true);
}

namespace {

/// 1/min series spanning the three local days around `date` at UTC+9.
PhaseSeries three_day_series(CivilDate date, std::mt19937_64& rng, double sigma) {
    std::normal_distribution<double> noise(0.0, sigma);
    const UtcTime t0 = local_midnight_utc(shift_date(date, -1), 9);
    PhaseSeries s;
    s.channel = "CW1";
    for (int i = 0; i < 3 * 24 * 60; ++i)
        s.samples.push_back({t0 + minutes{i}, noise(rng), std::nullopt});
    return s;
}

} // namespace

TEST_CASE("label_series: labels exactly the target-date epochs") {
    std::mt19937_64 rng(808);
    const CivilDate date = parse_date("2023-02-12");
    const PhaseSeries s = three_day_series(date, rng, 0.01);

    WindowPolicy policy;
    policy.utc_offset_hours = 9;
    const auto records = label_series(s, kDaesan, date, policy);

    std::size_t expected = 0;
    for (const PhaseSample& smp : s.samples)
        if (local_civil_date(smp.epoch_utc, 9) == date)
            ++expected;
    CHECK(records.size() == expected);
    CHECK(records.size() == 24 * 60);
    for (const LabelRecord& r : records) {
        CHECK(local_civil_date(r.epoch_utc, 9) == date);
        CHECK(r.channel == "CW1");
        CHECK(r.stats.n == records.front().stats.n); // single three-day stats
    }
}

TEST_CASE("label_series: a 10-sigma nighttime step is flagged") {
    std::mt19937_64 rng(809);
    const CivilDate date = parse_date("2023-02-12");
    const double sigma = 0.01;
    PhaseSeries s = three_day_series(date, rng, sigma);

    // inject the step between 22:00 and 23:00 local on the target date
    const UtcTime step_lo = local_midnight_utc(date, 9) + hours{22};
    const UtcTime step_hi = step_lo + hours{1};
    std::size_t stepped = 0;
    for (PhaseSample& smp : s.samples) {
        if (smp.epoch_utc >= step_lo && smp.epoch_utc < step_hi) {
            smp.phase_rad += 10.0 * sigma;
            ++stepped;
        }
    }
    REQUIRE(stepped == 60);

    WindowPolicy policy;
    policy.utc_offset_hours = 9;
    const auto records = label_series(s, kDaesan, date, policy);

    std::size_t flagged_in_step = 0, flagged_elsewhere = 0;
    for (const LabelRecord& r : records) {
        const bool in_step = r.epoch_utc >= step_lo && r.epoch_utc < step_hi;
        if (r.is_skywave)
            (in_step ? flagged_in_step : flagged_elsewhere)++;
    }
    CHECK(flagged_in_step == 60);
    CHECK(double(flagged_elsewhere) / double(records.size()) <= 1e-3);
}

TEST_CASE("label_series: constant series labels everything false with S = 0") {
    const CivilDate date = parse_date("2023-02-12");
    const UtcTime t0 = local_midnight_utc(shift_date(date, -1), 9);
    PhaseSeries s;
    s.channel = "CW2";
    for (int i = 0; i < 3 * 24 * 60; ++i)
        s.samples.push_back({t0 + minutes{i}, 0.25, std::nullopt});

    WindowPolicy policy;
    policy.utc_offset_hours = 9;
    const auto records = label_series(s, kDaesan, date, policy);
    CHECK(!records.empty());
    for (const LabelRecord& r : records) {
        CHECK_FALSE(r.is_skywave);
        CHECK(r.z_score == 0.0);
    }
}

TEST_CASE("label_series: names the uncovered windows") {
    const CivilDate date = parse_date("2023-02-12");
    // samples only on the target date: the flanking windows are uncovered
    const UtcTime t0 = local_midnight_utc(date, 9);
    PhaseSeries s;
    s.channel = "CW1";
    for (int i = 0; i < 24 * 60; ++i)
        s.samples.push_back({t0 + minutes{i}, 0.0, std::nullopt});

    WindowPolicy policy;
    policy.utc_offset_hours = 9;
    try {
        label_series(s, kDaesan, date, policy);
        FAIL("expected InsufficientData");
    } catch (const InsufficientData& e) {
        // both flanking dates are named; the covered middle date is not
        const std::string msg = e.what();
        CHECK(msg.find("2023-02-11 [") != std::string::npos);
        CHECK(msg.find("2023-02-13 [") != std::string::npos);
        CHECK(msg.find("2023-02-12 [") == std::string::npos);
    }
}

TEST_CASE("combined OR labels take the worst channel per epoch") {
    const UtcTime t0 = parse_iso8601("2023-02-12T10:00:00Z");
    const DaytimeStats st{0.0, 1.0, 100};
    std::vector<LabelRecord> cw1{
        {t0, "CW1", 1.0, 1.0, false, st},
        {t0 + minutes{1}, "CW1", 5.0, 5.0, true, st},
    };
    std::vector<LabelRecord> cw2{
        {t0, "CW2", 6.0, 6.0, true, st},
        {t0 + minutes{1}, "CW2", 0.5, 0.5, false, st},
        {t0 + minutes{2}, "CW2", 0.1, 0.1, false, st},
    };
    const auto combined = combined_or_labels({cw1, cw2});
    REQUIRE(combined.size() == 3);
    CHECK(combined[0].channel == "combined");
    CHECK(combined[0].z_score == 6.0);
    CHECK(combined[0].is_skywave);
    CHECK(combined[1].z_score == 5.0);
    CHECK(combined[1].is_skywave);
    CHECK_FALSE(combined[2].is_skywave);
}
