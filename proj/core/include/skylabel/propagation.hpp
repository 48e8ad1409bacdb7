#pragma once

namespace skylabel {

/// Physical constants of the propagation model.
struct Constants {
    double speed_of_light_mps = 299'792'458.0;
};

/// Transmitter-receiver path geometry.
struct PathGeometry {
    double distance_m = 0.0;    ///< groundwave distance d
    double iono_height_m = 0.0; ///< reflection-layer height h
};

/// An unmodulated carrier: frequency f, amplitude B, initial phase phi.
struct CwTone {
    double freq_hz = 0.0;
    double amplitude = 1.0;
    double phase_rad = 0.0;
};

/// Groundwave plus one delayed, attenuated copy of itself.
struct TwoPathChannel {
    double alpha = 0.0;   ///< skywave attenuation factor, [0, 1]
    double delay_s = 0.0; ///< skywave excess delay t_d
};

/// Amplitude scaling and phase shift of the groundwave + skywave sum,
/// relative to the groundwave alone.
struct CompositeTone {
    double eta = 1.0;
    double beta_rad = 0.0;
};

void validate(const PathGeometry& g);
void validate(const CwTone& t);
void validate(const TwoPathChannel& ch);

/// Wraps an angle to (-pi, pi].
double wrap_phase(double rad);

/// Excess propagation delay of a single-hop skywave over the groundwave:
/// (sqrt(4 h^2 + d^2) - d) / c. Strictly decreasing in d for h > 0, and
/// zero iff h = 0.
double skywave_excess_delay(const PathGeometry& geom, const Constants& k = Constants{});

/// Phasor sum of a unit groundwave and alpha * exp(-j 2 pi f t_d):
///   eta  = sqrt(1 + 2 alpha cos(2 pi f t_d) + alpha^2)
///   beta = atan2(-alpha sin(2 pi f t_d), 1 + alpha cos(2 pi f t_d))
/// Independent of the tone's amplitude and initial phase. Throws
/// DegenerateCancellation when the two paths cancel exactly (alpha = 1 and
/// 2 pi f t_d an odd multiple of pi).
CompositeTone combine_two_path(const CwTone& tone, const TwoPathChannel& ch);

} // namespace skylabel
