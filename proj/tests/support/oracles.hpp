#pragma once

// Independent reference implementations used only by tests. These must not
// share code with the library paths they check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <span>
#include <string>
#include <unistd.h>
#include <vector>

namespace oracle {

/// Brute-force mean / sample-std / threshold decision, written with long
/// double accumulation and a different loop structure than the library.
struct BruteStats {
    long double mu = 0.0L;
    long double sigma = 0.0L;
};

inline BruteStats brute_stats(std::span<const double> pool) {
    long double sum = 0.0L;
    for (std::size_t i = pool.size(); i-- > 0;)
        sum += pool[i];
    const long double mu = sum / (long double)pool.size();
    long double ss = 0.0L;
    for (std::size_t i = pool.size(); i-- > 0;) {
        const long double d = (long double)pool[i] - mu;
        ss += d * d;
    }
    return BruteStats{mu, sqrtl(ss / (long double)(pool.size() - 1))};
}

inline double brute_z(double probe, const BruteStats& st) {
    const long double dev = fabsl((long double)probe - st.mu);
    if (st.sigma == 0.0L)
        return dev == 0.0L ? 0.0 : std::numeric_limits<double>::infinity();
    return double(dev / st.sigma);
}

inline bool brute_label(double probe, const BruteStats& st, double threshold) {
    return brute_z(probe, st) >= threshold;
}

/// Hann-windowed Welch power estimate at arbitrary frequencies (direct
/// projection per segment, no FFT). Returns one power value per frequency.
inline std::vector<double> welch_psd_at(std::span<const std::complex<double>> x,
                                        double sample_rate_hz, std::span<const double> freqs_hz,
                                        std::size_t segment) {
    std::vector<double> window(segment);
    for (std::size_t n = 0; n < segment; ++n)
        window[n] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * double(n) /
                                          double(segment - 1)));

    std::vector<double> power(freqs_hz.size(), 0.0);
    std::size_t segments = 0;
    for (std::size_t start = 0; start + segment <= x.size(); start += segment / 2) {
        for (std::size_t fi = 0; fi < freqs_hz.size(); ++fi) {
            const double w = -2.0 * std::numbers::pi * freqs_hz[fi] / sample_rate_hz;
            std::complex<double> acc{0.0, 0.0};
            for (std::size_t n = 0; n < segment; ++n) {
                const double ph = w * double(n);
                acc += window[n] * x[start + n] *
                       std::complex<double>(std::cos(ph), std::sin(ph));
            }
            power[fi] += std::norm(acc);
        }
        ++segments;
    }
    for (double& p : power)
        p /= double(segments ? segments : 1);
    return power;
}

/// Unique scratch directory under the system temp dir, removed on
/// destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        auto base = std::filesystem::temp_directory_path();
        for (int i = 0;; ++i) {
            auto candidate = base / (tag + "-" + std::to_string(::getpid()) + "-" +
                                     std::to_string(i));
            if (std::filesystem::create_directory(candidate)) {
                path_ = candidate;
                break;
            }
        }
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

} // namespace oracle
