#include "skylabel/signal.hpp"

#include "skylabel/errors.hpp"
#include "skylabel/labeler.hpp"
#include "skylabel/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <thread>

namespace skylabel {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

// Domain-separation constants for the counter-based random streams.
constexpr std::uint64_t kStreamBits = 0x42495453;
constexpr std::uint64_t kStreamPhaseNoise = 0x50484153; // + channel index
constexpr std::uint64_t kStreamAmpNoise = 0x414d504c;   // + channel index
constexpr std::uint64_t kStreamIqNoise = 0x49514e5a;
constexpr std::uint64_t kStreamHeight = 0x48474854;

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t keyed(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return mix64(seed ^ mix64(stream ^ mix64(counter)));
}

double uniform01(std::uint64_t bits) {
    // 53-bit mantissa, strictly inside (0, 1)
    return (double(bits >> 11) + 0.5) * 0x1p-53;
}

double epoch_seconds(UtcTime t) {
    return std::chrono::duration<double>(t.time_since_epoch()).count();
}

// Slow pseudo-random wander of the reflection height: a seeded sum of
// sinusoids with periods between 10 minutes and 3 hours, evaluable at any
// instant without sequential state.
class HeightWander {
public:
    HeightWander(std::uint64_t seed, double sigma_m) : sigma_(sigma_m) {
        for (std::size_t k = 0; k < kComponents; ++k) {
            const double u = uniform01(keyed(seed, kStreamHeight, 2 * k));
            const double v = uniform01(keyed(seed, kStreamHeight, 2 * k + 1));
            const double period_s = 600.0 * std::pow(10800.0 / 600.0, u);
            omega_[k] = kTwoPi / period_s;
            phase_[k] = kTwoPi * v;
        }
    }

    double at(UtcTime t) const {
        if (sigma_ == 0.0)
            return 0.0;
        const double ts = epoch_seconds(t);
        double s = 0.0;
        for (std::size_t k = 0; k < kComponents; ++k)
            s += std::sin(omega_[k] * ts + phase_[k]);
        return sigma_ * std::sqrt(2.0 / double(kComponents)) * s;
    }

private:
    static constexpr std::size_t kComponents = 8;
    double sigma_;
    double omega_[kComponents];
    double phase_[kComponents];
};

int samples_per_bit(double bitrate_bps, double sample_rate_hz) {
    if (!(bitrate_bps > 0.0) || !std::isfinite(bitrate_bps))
        throw ConfigError("bit rate must be finite and > 0");
    if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz))
        throw ConfigError("sample rate must be finite and > 0");
    const double ratio = sample_rate_hz / bitrate_bps;
    const long spb = std::lround(ratio);
    if (spb < 1 || std::abs(ratio - double(spb)) > 1e-9 * ratio)
        throw ConfigError("sample rate must be an integer multiple of the bit rate (got " +
                          std::to_string(ratio) + " samples per bit)");
    return int(spb);
}

// Windowed-sinc fractional delay. Accuracy in the CW band is what the
// two-path tests lean on, so the kernel is generously sized.
constexpr int kDelayHalfTaps = 48;
constexpr double kDelayKaiserBeta = 14.0;

std::vector<std::complex<double>> fractional_delay(const std::vector<std::complex<double>>& x,
                                                   double delay_samples) {
    const double m_f = std::floor(delay_samples);
    const long m = long(m_f);
    const double mu = delay_samples - m_f;

    double taps[2 * kDelayHalfTaps + 1];
    const double i0b = std::cyl_bessel_i(0.0, kDelayKaiserBeta);
    const double span = double(kDelayHalfTaps + 1);
    double gain = 0.0;
    for (int k = -kDelayHalfTaps; k <= kDelayHalfTaps; ++k) {
        const double u = double(k) - mu;
        const double sinc = u == 0.0 ? 1.0 : std::sin(kPi * u) / (kPi * u);
        const double w = std::cyl_bessel_i(0.0, kDelayKaiserBeta *
                                                    std::sqrt(std::max(0.0, 1.0 - (u / span) * (u / span)))) /
                         i0b;
        taps[k + kDelayHalfTaps] = sinc * w;
        gain += taps[k + kDelayHalfTaps];
    }
    for (double& t : taps)
        t /= gain;

    const long n = long(x.size());
    std::vector<std::complex<double>> y(x.size());
    for (long i = 0; i < n; ++i) {
        std::complex<double> acc{0.0, 0.0};
        for (int k = -kDelayHalfTaps; k <= kDelayHalfTaps; ++k) {
            const long j = i - m - k;
            if (j >= 0 && j < n)
                acc += taps[k + kDelayHalfTaps] * x[std::size_t(j)];
        }
        y[std::size_t(i)] = acc;
    }
    return y;
}

void validate_buffer(const IqBuffer& buf) {
    if (buf.samples.empty())
        throw InvalidInput("IQ buffer is empty");
    if (!(buf.sample_rate_hz > 0.0) || !std::isfinite(buf.sample_rate_hz))
        throw InvalidInput("IQ buffer sample rate must be finite and > 0");
}

std::map<CivilDate, SolarEvents> solar_events_by_date(const GeoPoint& p, CivilDate first,
                                                      int count) {
    std::map<CivilDate, SolarEvents> by_date;
    for (int i = 0; i < count; ++i) {
        const CivilDate d = shift_date(first, i);
        by_date.emplace(d, solar_events(p, d));
    }
    return by_date;
}

} // namespace

void validate(const SimConfig& cfg) {
    if (!(cfg.carrier_hz > 0.0) || !std::isfinite(cfg.carrier_hz))
        throw ConfigError("carrier_hz must be finite and > 0");
    if (cfg.cw_offsets_hz[0] == cfg.cw_offsets_hz[1])
        throw ConfigError("cw_offsets_hz must be distinct");
    for (double off : cfg.cw_offsets_hz) {
        if (!std::isfinite(off) || std::abs(off) >= cfg.sample_rate_hz / 2.0)
            throw ConfigError("cw offset " + std::to_string(off) +
                              " Hz is outside the Nyquist band");
    }
    for (double a : cfg.cw_amplitudes) {
        if (!(a > 0.0) || !std::isfinite(a))
            throw ConfigError("cw_amplitudes must be finite and > 0");
    }
    samples_per_bit(cfg.msk_bitrate_bps, cfg.sample_rate_hz);
    const double occupied =
        2.0 * (std::max(std::abs(cfg.cw_offsets_hz[0]), std::abs(cfg.cw_offsets_hz[1])) +
               0.75 * cfg.msk_bitrate_bps);
    if (!(cfg.sample_rate_hz > occupied))
        throw ConfigError("sample_rate_hz must exceed the occupied band " +
                          std::to_string(occupied) + " Hz");
    if (!(cfg.msk_amplitude >= 0.0) || !std::isfinite(cfg.msk_amplitude))
        throw ConfigError("msk_amplitude must be finite and >= 0");
    validate(cfg.tx);
    validate(cfg.rx);
    if (!(cfg.iono_height_m >= 0.0) || !std::isfinite(cfg.iono_height_m))
        throw ConfigError("iono_height_m must be finite and >= 0");
    if (!(cfg.iono_height_sigma_m >= 0.0) || !std::isfinite(cfg.iono_height_sigma_m))
        throw ConfigError("iono_height_sigma_m must be finite and >= 0");
    if (!(cfg.alpha_night >= 0.0 && cfg.alpha_night <= 1.0))
        throw ConfigError("alpha_night must lie in [0, 1]");
    if (!(cfg.transition_minutes > 0.0) || !std::isfinite(cfg.transition_minutes))
        throw ConfigError("transition_minutes must be finite and > 0");
    if (!(cfg.noise_sigma >= 0.0) || !std::isfinite(cfg.noise_sigma))
        throw ConfigError("noise_sigma must be finite and >= 0");
    if (!(cfg.epoch_spacing_s >= 1e-3) || !std::isfinite(cfg.epoch_spacing_s))
        throw ConfigError("epoch_spacing_s must be >= 0.001");
    if (cfg.utc_offset_hours < -14 || cfg.utc_offset_hours > 14)
        throw ConfigError("utc_offset_hours must lie in [-14, +14]");
}

std::vector<std::uint8_t> random_bits(std::uint64_t seed, std::size_t count) {
    std::vector<std::uint8_t> bits(count);
    for (std::size_t i = 0; i < count; ++i)
        bits[i] = std::uint8_t(keyed(seed, kStreamBits, i) & 1u);
    return bits;
}

double gaussian_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    const std::uint64_t k1 = keyed(seed, stream, counter);
    const std::uint64_t k2 = mix64(k1);
    const double u1 = uniform01(k1);
    const double u2 = uniform01(k2);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

IqBuffer msk_baseband(const std::vector<std::uint8_t>& bits, double bitrate_bps,
                      double sample_rate_hz, double amplitude, UtcTime start_epoch) {
    const int spb = samples_per_bit(bitrate_bps, sample_rate_hz);
    if (bits.empty())
        throw ConfigError("MSK bit stream is empty");

    IqBuffer out;
    out.sample_rate_hz = sample_rate_hz;
    out.start_epoch_utc = start_epoch;
    out.samples.reserve(bits.size() * std::size_t(spb));

    // +-pi/2 phase advance per bit, linear within the bit: instantaneous
    // frequency is exactly +-bitrate/4.
    double phase = 0.0;
    for (std::uint8_t bit : bits) {
        const double dphi = (bit ? 1.0 : -1.0) * (kPi / 2.0) / double(spb);
        for (int i = 0; i < spb; ++i) {
            const double ph = phase + dphi * double(i);
            out.samples.emplace_back(amplitude * std::cos(ph), amplitude * std::sin(ph));
        }
        phase = wrap_phase(phase + dphi * double(spb));
    }
    return out;
}

bool cw_null_check(double bitrate_bps, double offset_hz) {
    if (!(bitrate_bps > 0.0) || !std::isfinite(bitrate_bps))
        throw InvalidInput("bit rate must be finite and > 0");
    if (!std::isfinite(offset_hz))
        throw InvalidInput("offset must be finite");
    const double f = std::abs(offset_hz);
    const long k = std::lround((f / bitrate_bps - 0.75) / 0.5);
    if (k < 0)
        return false;
    const double f_null = (0.75 + 0.5 * double(k)) * bitrate_bps;
    return std::abs(f - f_null) <= 1e-6 * f;
}

IqBuffer add_cw_tones(const IqBuffer& buf, const std::array<double, 2>& offsets_hz,
                      const std::array<double, 2>& amplitudes,
                      const std::array<double, 2>& phases_rad) {
    validate_buffer(buf);
    for (double off : offsets_hz) {
        if (!std::isfinite(off) || std::abs(off) >= buf.sample_rate_hz / 2.0)
            throw ConfigError("cw offset " + std::to_string(off) +
                              " Hz is outside the Nyquist band at fs = " +
                              std::to_string(buf.sample_rate_hz));
    }

    IqBuffer out = buf;
    for (std::size_t c = 0; c < 2; ++c) {
        if (amplitudes[c] == 0.0)
            continue;
        const double w = kTwoPi * offsets_hz[c] / buf.sample_rate_hz;
        for (std::size_t n = 0; n < out.samples.size(); ++n) {
            const double ph = w * double(n) + phases_rad[c];
            out.samples[n] += amplitudes[c] * std::complex<double>(std::cos(ph), std::sin(ph));
        }
    }
    return out;
}

double diurnal_alpha(UtcTime t, const SolarEvents& ev, double alpha_night,
                     std::chrono::seconds transition) {
    if (!(alpha_night >= 0.0 && alpha_night <= 1.0))
        throw InvalidInput("alpha_night must lie in [0, 1]");
    if (transition.count() <= 0)
        throw InvalidInput("transition duration must be > 0");

    const double T = double(transition.count());
    const auto ramp01 = [](double u) {
        u = std::clamp(u, 0.0, 1.0);
        return 0.5 * (1.0 - std::cos(kPi * u));
    };
    const double u_rise =
        (std::chrono::duration<double>(t - ev.sunrise_utc).count() + T / 2.0) / T;
    const double u_set =
        (std::chrono::duration<double>(t - ev.sunset_utc).count() + T / 2.0) / T;
    const double before_sunrise = 1.0 - ramp01(u_rise); // 1 in the night, 0 by day
    const double after_sunset = ramp01(u_set);          // 0 by day, 1 in the night
    return alpha_night * std::max(before_sunrise, after_sunset);
}

IqBuffer apply_two_path(const IqBuffer& buf, double alpha, double delay_s, double carrier_hz) {
    validate_buffer(buf);
    validate(TwoPathChannel{alpha, delay_s});
    if (!(carrier_hz > 0.0) || !std::isfinite(carrier_hz))
        throw InvalidInput("carrier frequency must be finite and > 0");

    if (alpha == 0.0)
        return buf;

    const double delay_samples = delay_s * buf.sample_rate_hz;
    if (delay_samples >= double(buf.samples.size()))
        throw ConfigError("two-path delay of " + std::to_string(delay_samples) +
                          " samples exceeds the buffer length");

    const std::vector<std::complex<double>> delayed = fractional_delay(buf.samples, delay_samples);
    const double rot_phase = -kTwoPi * carrier_hz * delay_s;
    const std::complex<double> rot{std::cos(rot_phase), std::sin(rot_phase)};

    IqBuffer out = buf;
    for (std::size_t n = 0; n < out.samples.size(); ++n)
        out.samples[n] += alpha * delayed[n] * rot;
    return out;
}

CampaignResult synthesize_campaign(const SimConfig& cfg, CivilDate start_date, int days,
                                   int threads) {
    validate(cfg);
    if (days < 3)
        throw ConfigError("a campaign needs at least 3 days: the labeler pools the flanking days");
    if (threads < 1)
        throw ConfigError("thread count must be >= 1");

    const double distance_m = great_circle_distance(cfg.tx, cfg.rx);
    const UtcTime t0 = local_midnight_utc(start_date, cfg.utc_offset_hours);
    const auto spacing = std::chrono::milliseconds(std::llround(cfg.epoch_spacing_s * 1000.0));
    const std::size_t n_epochs =
        std::size_t(std::llround(double(days) * 86400.0 * 1000.0)) / std::size_t(spacing.count());

    const auto events = solar_events_by_date(cfg.rx, shift_date(start_date, -1), days + 2);
    const HeightWander wander(cfg.seed, cfg.iono_height_sigma_m);
    const auto transition =
        std::chrono::seconds(std::llround(cfg.transition_minutes * 60.0));

    CampaignResult result;
    result.truth.resize(n_epochs);
    for (std::size_t c = 0; c < 2; ++c) {
        result.phases.push_back(PhaseSeries{kCwChannelNames[c], {}});
        result.phases[c].samples.resize(n_epochs);
    }

    const auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const UtcTime t = t0 + spacing * i;
            const SolarEvents& ev =
                events.at(local_civil_date(t, cfg.utc_offset_hours));
            const double alpha = diurnal_alpha(t, ev, cfg.alpha_night, transition);
            const double h = std::max(0.0, cfg.iono_height_m + wander.at(t));
            const double td = skywave_excess_delay(PathGeometry{distance_m, h});

            TruthRecord& tr = result.truth[i];
            tr.epoch_utc = t;
            tr.alpha = alpha;
            tr.delay_s = td;
            for (std::size_t c = 0; c < 2; ++c) {
                const CwTone tone{cfg.carrier_hz + cfg.cw_offsets_hz[c], cfg.cw_amplitudes[c],
                                  0.0};
                const CompositeTone comp = combine_two_path(tone, TwoPathChannel{alpha, td});
                tr.eta[c] = comp.eta;
                tr.beta_rad[c] = comp.beta_rad;

                const double sigma_phase = cfg.noise_sigma / cfg.cw_amplitudes[c];
                const double phase = wrap_phase(
                    comp.beta_rad +
                    sigma_phase * gaussian_at(cfg.seed, kStreamPhaseNoise + c, i));
                const double amp = std::max(
                    0.0, comp.eta * cfg.cw_amplitudes[c] +
                             cfg.noise_sigma * gaussian_at(cfg.seed, kStreamAmpNoise + c, i));
                result.phases[c].samples[i] = PhaseSample{t, phase, amp};
            }
        }
    };

    if (threads == 1) {
        worker(0, n_epochs);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n_epochs + std::size_t(threads) - 1) / std::size_t(threads);
        for (int k = 0; k < threads; ++k) {
            const std::size_t begin = std::min(n_epochs, std::size_t(k) * chunk);
            const std::size_t end = std::min(n_epochs, begin + chunk);
            if (begin < end)
                pool.emplace_back(worker, begin, end);
        }
        for (std::thread& th : pool)
            th.join();
    }
    return result;
}

IqBuffer synthesize_iq(const SimConfig& cfg, UtcTime start_epoch, double duration_s) {
    validate(cfg);
    if (!(duration_s > 0.0) || !std::isfinite(duration_s))
        throw ConfigError("IQ duration must be finite and > 0");

    const int spb = samples_per_bit(cfg.msk_bitrate_bps, cfg.sample_rate_hz);
    const std::size_t n = std::size_t(std::llround(duration_s * cfg.sample_rate_hz));
    const std::size_t n_bits = (n + std::size_t(spb) - 1) / std::size_t(spb);

    IqBuffer x = msk_baseband(random_bits(cfg.seed, n_bits), cfg.msk_bitrate_bps,
                              cfg.sample_rate_hz, cfg.msk_amplitude, start_epoch);
    x.samples.resize(n);
    x = add_cw_tones(x, cfg.cw_offsets_hz, cfg.cw_amplitudes, {0.0, 0.0});

    // The height wander is quasi-static over an IQ snippet; the delay is
    // frozen at the midpoint while alpha follows the diurnal profile per
    // sample.
    const double distance_m = great_circle_distance(cfg.tx, cfg.rx);
    const HeightWander wander(cfg.seed, cfg.iono_height_sigma_m);
    const UtcTime t_mid =
        start_epoch + std::chrono::milliseconds(std::llround(duration_s * 500.0));
    const double h = std::max(0.0, cfg.iono_height_m + wander.at(t_mid));
    const double td = skywave_excess_delay(PathGeometry{distance_m, h});
    const double delay_samples = td * cfg.sample_rate_hz;
    if (delay_samples >= double(n))
        throw ConfigError("IQ snippet shorter than the skywave delay");

    const CivilDate first_date =
        local_civil_date(start_epoch, cfg.utc_offset_hours);
    const int n_dates =
        2 + int(duration_s / 86400.0);
    const auto events = solar_events_by_date(cfg.rx, first_date, n_dates);
    const auto transition = std::chrono::seconds(std::llround(cfg.transition_minutes * 60.0));

    const std::vector<std::complex<double>> delayed = fractional_delay(x.samples, delay_samples);
    const double rot_phase = -kTwoPi * cfg.carrier_hz * td;
    const std::complex<double> rot{std::cos(rot_phase), std::sin(rot_phase)};

    IqBuffer out = x;
    for (std::size_t i = 0; i < n; ++i) {
        const UtcTime t =
            start_epoch + std::chrono::milliseconds(
                              std::llround(double(i) / cfg.sample_rate_hz * 1000.0));
        const SolarEvents& ev = events.at(local_civil_date(t, cfg.utc_offset_hours));
        const double alpha = diurnal_alpha(t, ev, cfg.alpha_night, transition);
        out.samples[i] += alpha * delayed[i] * rot;
        if (cfg.noise_sigma > 0.0) {
            out.samples[i] += cfg.noise_sigma *
                              std::complex<double>(gaussian_at(cfg.seed, kStreamIqNoise, 2 * i),
                                                   gaussian_at(cfg.seed, kStreamIqNoise, 2 * i + 1));
        }
    }
    return out;
}

} // namespace skylabel
