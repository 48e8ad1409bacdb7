#include "skylabel/errors.hpp"
#include "skylabel/estimator.hpp"
#include "skylabel/propagation.hpp"
#include "skylabel/signal.hpp"

#include <doctest.h>

#include <chrono>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

using namespace skylabel;
using namespace std::chrono;

namespace {

constexpr double kPi = std::numbers::pi;

IqBuffer tone_buffer(std::size_t n, double fs, double offset_hz, double amp, double phase,
                     UtcTime t0 = {}) {
    IqBuffer b;
    b.sample_rate_hz = fs;
    b.start_epoch_utc = t0;
    b.samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double ph = 2.0 * kPi * offset_hz * double(i) / fs + phase;
        b.samples.emplace_back(amp * std::cos(ph), amp * std::sin(ph));
    }
    return b;
}

} // namespace

TEST_CASE("estimate_tone: exact on clean tones") {
    EstimatorConfig cfg;
    const IqBuffer zero_phase = tone_buffer(4000, 4000.0, -450.0, 1.0, 0.0);
    const ToneEstimate e0 = estimate_tone(zero_phase, -450.0, cfg);
    CHECK(std::abs(e0.phase_rad) <= 1e-6);
    CHECK(e0.amplitude == doctest::Approx(1.0).epsilon(1e-9));

    const IqBuffer shifted = tone_buffer(4000, 4000.0, 450.0, 0.5, 1.234);
    const ToneEstimate e1 = estimate_tone(shifted, 450.0, cfg);
    CHECK(e1.phase_rad == doctest::Approx(1.234).epsilon(1e-6));
    CHECK(e1.amplitude == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("estimate_tone: near-zero amplitude where no tone exists") {
    EstimatorConfig cfg;
    const IqBuffer tone = tone_buffer(4000, 4000.0, -450.0, 1.0, 0.4);
    const ToneEstimate e = estimate_tone(tone, 450.0, cfg); // 900 Hz away
    CHECK(e.amplitude <= 1e-9);
}

TEST_CASE("estimate_tone: window underrun is an error") {
    EstimatorConfig cfg;
    cfg.integration_seconds = 2.0;
    const IqBuffer shorty = tone_buffer(4000, 4000.0, 450.0, 1.0, 0.0);
    CHECK_THROWS_AS(estimate_tone(shorty, 450.0, cfg), InsufficientData);
}

TEST_CASE("estimate_tone: MSK at equal power leaks less than 5 mrad") {
    // tone on the 450 Hz null of a 200 bps MSK spectrum
    const auto bits = random_bits(1234, 400);
    IqBuffer msk = msk_baseband(bits, 200.0, 4000.0, 1.0);
    const IqBuffer both = add_cw_tones(msk, {450.0, -450.0}, {1.0, 0.0}, {0.7, 0.0});

    EstimatorConfig cfg;
    const ToneEstimate e = estimate_tone(both, 450.0, cfg);
    CHECK(std::abs(wrap_phase(e.phase_rad - 0.7)) <= 5e-3);
    CHECK(e.amplitude == doctest::Approx(1.0).epsilon(5e-3));
}

TEST_CASE("estimator config: leakage guard") {
    EstimatorConfig cfg;
    cfg.tone_offsets_hz = {-0.4, 0.4};
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg.tone_offsets_hz = {-450.0, 450.0};
    CHECK_NOTHROW(validate(cfg));
}

TEST_CASE("phase estimates are rotation-equivariant, amplitudes scale-equivariant") {
    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    std::uniform_real_distribution<double> gain(0.1, 10.0);
    EstimatorConfig cfg;

    const auto bits = random_bits(5, 200);
    IqBuffer base = msk_baseband(bits, 200.0, 4000.0, 0.5);
    base = add_cw_tones(base, {-450.0, 450.0}, {1.0, 0.7}, {0.3, -1.1});

    for (int trial = 0; trial < 25; ++trial) {
        const double theta = angle(rng);
        const double g = gain(rng);
        IqBuffer rotated = base;
        const std::complex<double> r{std::cos(theta), std::sin(theta)};
        for (auto& s : rotated.samples)
            s *= g * r;

        for (double off : {-450.0, 450.0}) {
            const ToneEstimate e0 = estimate_tone(base, off, cfg);
            const ToneEstimate e1 = estimate_tone(rotated, off, cfg);
            CHECK(std::abs(wrap_phase(e1.phase_rad - e0.phase_rad - theta)) <= 1e-9);
            CHECK(e1.amplitude == doctest::Approx(g * e0.amplitude).epsilon(1e-9));
        }
    }
}

TEST_CASE("phase noise at 20 dB integration SNR matches theory") {
    // SNR_linear = A^2 W / (2 sigma^2) = 100 -> phase std 1/sqrt(2 SNR)
    const double fs = 4000.0;
    const std::size_t window = 4000;
    const double snr = 100.0;
    const double noise_sigma = std::sqrt(double(window) / (2.0 * snr));
    const double theory = 1.0 / std::sqrt(2.0 * snr);

    EstimatorConfig cfg;
    std::vector<double> errors;
    for (std::uint64_t trial = 0; trial < 1000; ++trial) {
        IqBuffer buf = tone_buffer(window, fs, 450.0, 1.0, 0.25);
        for (std::size_t n = 0; n < window; ++n) {
            buf.samples[n] += noise_sigma * std::complex<double>(
                                                gaussian_at(9000, trial, 2 * n),
                                                gaussian_at(9000, trial, 2 * n + 1));
        }
        const ToneEstimate e = estimate_tone(buf, 450.0, cfg);
        errors.push_back(wrap_phase(e.phase_rad - 0.25));
    }
    double mu = 0.0;
    for (double v : errors)
        mu += v;
    mu /= double(errors.size());
    double ss = 0.0;
    for (double v : errors)
        ss += (v - mu) * (v - mu);
    const double sd = std::sqrt(ss / double(errors.size() - 1));
    CHECK(sd <= 1.1 * theory);
    CHECK(sd >= 0.8 * theory);
}

TEST_CASE("phase_series_from_iq: counting, gaps, channel names") {
    EstimatorConfig cfg;
    const UtcTime t0 = parse_iso8601("2023-02-11T00:00:00Z");

    SUBCASE("3-minute clean stream gives 3 samples per tone") {
        const IqBuffer buf = tone_buffer(180 * 4000, 4000.0, 450.0, 1.0, 0.0, t0);
        const EstimationResult r = phase_series_from_iq(std::span(&buf, 1), cfg);
        REQUIRE(r.series.size() == 2);
        CHECK(r.series[0].channel == "CW1");
        CHECK(r.series[1].channel == "CW2");
        CHECK(r.series[0].samples.size() == 3);
        CHECK(r.series[1].samples.size() == 3);
        CHECK(r.missing_epochs.empty());
        CHECK(r.series[0].samples[1].epoch_utc == t0 + minutes{1});
    }

    SUBCASE("a one-epoch gap is marked missing, nothing else") {
        // buffers [0, 60s) and [120s, 180s): epoch 60s has no coverage
        std::vector<IqBuffer> stream;
        stream.push_back(tone_buffer(60 * 4000, 4000.0, 450.0, 1.0, 0.0, t0));
        stream.push_back(
            tone_buffer(60 * 4000, 4000.0, 450.0, 1.0, 0.0, t0 + seconds{120}));
        const EstimationResult r = phase_series_from_iq(stream, cfg);
        REQUIRE(r.missing_epochs.size() == 1);
        CHECK(r.missing_epochs[0] == t0 + seconds{60});
        CHECK(r.series[0].samples.size() == 2);
        CHECK(r.series[0].samples[0].epoch_utc == t0);
        CHECK(r.series[0].samples[1].epoch_utc == t0 + seconds{120});
    }

    SUBCASE("overlapping buffers are rejected") {
        std::vector<IqBuffer> stream;
        stream.push_back(tone_buffer(60 * 4000, 4000.0, 450.0, 1.0, 0.0, t0));
        stream.push_back(tone_buffer(60 * 4000, 4000.0, 450.0, 1.0, 0.0, t0 + seconds{30}));
        CHECK_THROWS_AS(phase_series_from_iq(stream, cfg), ConfigError);
    }

    SUBCASE("contiguous buffers are stitched across the boundary") {
        // 90 s + 91 s contiguous: epochs 0, 60, 120 all estimable; the 60 s
        // window starts in the first buffer and ends in the second
        std::vector<IqBuffer> stream;
        stream.push_back(tone_buffer(90 * 4000, 4000.0, 450.0, 1.0, 0.0, t0));
        stream.push_back(tone_buffer(91 * 4000, 4000.0, 450.0, 1.0, 0.0, t0 + seconds{90}));
        EstimatorConfig wide = cfg;
        wide.integration_seconds = 40.0;
        const EstimationResult r = phase_series_from_iq(stream, wide);
        CHECK(r.missing_epochs.empty());
        CHECK(r.series[0].samples.size() == 3);
    }
}

TEST_CASE("phase_series_from_iq reproduces the two-path phase shift") {
    const double fs = 4000.0;
    const double carrier = 318'000.0;
    const double alpha = 0.45;
    const double td = 290e-6;
    const UtcTime t0 = parse_iso8601("2023-02-11T00:00:00Z");

    IqBuffer in = tone_buffer(12000, fs, 450.0, 1.0, 0.6, t0);
    const IqBuffer out = apply_two_path(in, alpha, td, carrier);

    // drop the first second so the delayed path is in steady state
    const auto steady = [&](const IqBuffer& b) {
        IqBuffer s;
        s.sample_rate_hz = fs;
        s.start_epoch_utc = t0 + seconds{1};
        s.samples.assign(b.samples.begin() + 4000, b.samples.end());
        return s;
    };
    EstimatorConfig cfg;
    const IqBuffer sin_ = steady(in);
    const IqBuffer sout = steady(out);
    const EstimationResult rin = phase_series_from_iq(std::span(&sin_, 1), cfg);
    const EstimationResult rout = phase_series_from_iq(std::span(&sout, 1), cfg);

    const CompositeTone expect = combine_two_path({carrier + 450.0, 1.0, 0.0}, {alpha, td});
    const double shift = wrap_phase(rout.series[1].samples[0].phase_rad -
                                    rin.series[1].samples[0].phase_rad);
    CHECK(std::abs(wrap_phase(shift - expect.beta_rad)) <= 1e-3);
}
