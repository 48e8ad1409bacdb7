#pragma once

#include "skylabel/geo.hpp"
#include "skylabel/phase_data.hpp"
#include "skylabel/solar.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

namespace skylabel {

/// Complex-baseband sample block, centered at the configured carrier.
struct IqBuffer {
    std::vector<std::complex<double>> samples;
    double sample_rate_hz = 0.0;
    UtcTime start_epoch_utc{};
};

/// Everything a synthetic campaign needs. The signal is represented at
/// complex baseband; carrier physics enters through explicit phase
/// rotations on the delayed path.
struct SimConfig {
    double carrier_hz = 318'000.0;
    std::array<double, 2> cw_offsets_hz{-450.0, 450.0}; ///< CW1, CW2 baseband offsets
    std::array<double, 2> cw_amplitudes{1.0, 1.0};
    double msk_bitrate_bps = 200.0;
    double msk_amplitude = 1.0;
    double sample_rate_hz = 4000.0;
    GeoPoint tx{36.97, 127.95}; ///< Chungju-area transmitter
    GeoPoint rx{37.00, 126.35}; ///< Daesan-port receiver
    double iono_height_m = 90'000.0;       ///< E-layer reflection height
    double iono_height_sigma_m = 1'500.0;  ///< nighttime height wander (see README)
    double alpha_night = 0.3;              ///< full-night skywave attenuation factor
    double transition_minutes = 45.0;      ///< sunrise/sunset ramp duration
    double noise_sigma = 0.02; ///< IQ AWGN per component; phase noise derives as sigma/amplitude
    std::uint64_t seed = 1;
    int utc_offset_hours = 9;      ///< station-local zone of campaign dates
    double epoch_spacing_s = 60.0; ///< campaign phase-measurement cadence
};

/// Throws ConfigError on an unusable configuration (sample rate below the
/// occupied band, duplicate CW offsets, alpha outside [0,1], ...).
void validate(const SimConfig& cfg);

/// Deterministic bit stream for the simulated DGNSS payload.
std::vector<std::uint8_t> random_bits(std::uint64_t seed, std::size_t count);

/// Counter-based standard normal draw: independent of evaluation order,
/// segmentation and thread count.
double gaussian_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

/// MSK complex baseband: constant envelope, instantaneous frequency
/// -bitrate/4 for a 0 bit and +bitrate/4 for a 1 bit, phase continuous with
/// exactly +-pi/2 advance per bit. sample_rate must be an integer multiple
/// of bitrate.
IqBuffer msk_baseband(const std::vector<std::uint8_t>& bits, double bitrate_bps,
                      double sample_rate_hz, double amplitude = 1.0,
                      UtcTime start_epoch = {});

/// True iff |offset| sits on the MSK spectral-null grid
/// (0.75 + 0.5 k) * bitrate, k = 0, 1, ..., within 1e-6 relative.
bool cw_null_check(double bitrate_bps, double offset_hz);

/// Adds two complex exponentials at the given baseband offsets. Offsets
/// must lie strictly inside the Nyquist band.
IqBuffer add_cw_tones(const IqBuffer& buf, const std::array<double, 2>& offsets_hz,
                      const std::array<double, 2>& amplitudes,
                      const std::array<double, 2>& phases_rad);

/// Diurnal attenuation profile: 0 across full daytime, alpha_night across
/// full night, raised-cosine ramps of `transition` duration centered at
/// sunrise and sunset. Continuous in t.
double diurnal_alpha(UtcTime t, const SolarEvents& ev, double alpha_night,
                     std::chrono::seconds transition);

/// Two-path channel on sampled IQ:
///   out = in + alpha * delay(in, delay_s) * exp(-j 2 pi carrier_hz delay_s)
/// The delay is realized with a windowed-sinc fractional-delay kernel whose
/// response is flat to ~1e-6 below 0.44 * sample_rate; tone phases match
/// the closed-form composite across the CW band. The first
/// ceil(delay * fs) + 48 output samples are a fill-in transient.
IqBuffer apply_two_path(const IqBuffer& buf, double alpha, double delay_s,
                        double carrier_hz);

/// Ground-truth channel state at one campaign epoch.
struct TruthRecord {
    UtcTime epoch_utc{};
    double alpha = 0.0;
    double delay_s = 0.0;
    std::array<double, 2> eta{1.0, 1.0};
    std::array<double, 2> beta_rad{0.0, 0.0};
};

struct CampaignResult {
    std::vector<PhaseSeries> phases; ///< one series per CW channel
    std::vector<TruthRecord> truth;
};

/// Direct phase-domain campaign: per epoch, alpha from the diurnal profile
/// at the receiver, the excess delay from the path geometry and the
/// (slowly wandering) ionosphere height, the composite phase per tone from
/// the closed-form combination, plus Gaussian phase noise of standard
/// deviation noise_sigma / cw_amplitude. Deterministic given cfg.seed and
/// independent of `threads`.
CampaignResult synthesize_campaign(const SimConfig& cfg, CivilDate start_date, int days,
                                   int threads = 1);

/// Sampled IQ for a bounded span of the same campaign: MSK payload plus CW
/// tones through the two-path channel with the per-sample diurnal alpha,
/// plus complex AWGN of per-component sigma noise_sigma.
IqBuffer synthesize_iq(const SimConfig& cfg, UtcTime start_epoch, double duration_s);

/// Channel names for the two CW tones, in cw_offsets_hz order.
inline constexpr std::array<const char*, 2> kCwChannelNames{"CW1", "CW2"};

} // namespace skylabel
