#include "skylabel/propagation.hpp"

#include "skylabel/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace skylabel {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void validate(const PathGeometry& g) {
    if (!std::isfinite(g.distance_m) || g.distance_m < 0.0)
        throw InvalidInput("path distance must be finite and >= 0");
    if (!std::isfinite(g.iono_height_m) || g.iono_height_m < 0.0)
        throw InvalidInput("ionosphere height must be finite and >= 0");
}

void validate(const CwTone& t) {
    if (!std::isfinite(t.freq_hz) || t.freq_hz <= 0.0)
        throw InvalidInput("tone frequency must be finite and > 0");
    if (!std::isfinite(t.amplitude) || t.amplitude < 0.0)
        throw InvalidInput("tone amplitude must be finite and >= 0");
    if (!std::isfinite(t.phase_rad) || t.phase_rad <= -std::numbers::pi ||
        t.phase_rad > std::numbers::pi)
        throw InvalidInput("tone phase must lie in (-pi, pi]");
}

void validate(const TwoPathChannel& ch) {
    if (!std::isfinite(ch.alpha) || ch.alpha < 0.0 || ch.alpha > 1.0)
        throw InvalidInput("attenuation factor must lie in [0, 1]");
    if (!std::isfinite(ch.delay_s) || ch.delay_s < 0.0)
        throw InvalidInput("skywave delay must be finite and >= 0");
}

double wrap_phase(double rad) {
    double w = std::remainder(rad, kTwoPi);
    if (w <= -std::numbers::pi)
        w += kTwoPi;
    return w;
}

double skywave_excess_delay(const PathGeometry& geom, const Constants& k) {
    validate(geom);
    const double d = geom.distance_m;
    const double h2 = geom.iono_height_m * 2.0;
    if (h2 == 0.0)
        return 0.0;
    // (sqrt(4h^2 + d^2) - d) written as 4h^2 / (sqrt(4h^2 + d^2) + d),
    // which stays accurate when d >> h.
    const double slant = std::hypot(h2, d);
    return (h2 * h2) / (slant + d) / k.speed_of_light_mps;
}

CompositeTone combine_two_path(const CwTone& tone, const TwoPathChannel& ch) {
    validate(tone);
    validate(ch);

    const double theta = kTwoPi * tone.freq_hz * ch.delay_s;
    const double re = 1.0 + ch.alpha * std::cos(theta);
    const double im = -ch.alpha * std::sin(theta);
    const double eta = std::hypot(re, im);
    if (eta < 1e-12)
        throw DegenerateCancellation(
            "groundwave and skywave cancel: alpha = " + std::to_string(ch.alpha) +
            ", 2*pi*f*t_d is an odd multiple of pi");
    return CompositeTone{eta, wrap_phase(std::atan2(im, re))};
}

} // namespace skylabel
