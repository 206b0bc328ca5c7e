#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "isenet/common.hpp"
#include "isenet/rng.hpp"

namespace isenet {

// mirror-pad x to length n + 2*half (x[-k] = x[k], x[n-1+k] = x[n-1-k])
inline std::vector<double> mirror_pad(const std::vector<double>& x, std::size_t half) {
    std::size_t n = x.size();
    std::vector<double> p(n + 2 * half);
    for (std::size_t i = 0; i < p.size(); ++i) {
        long idx = static_cast<long>(i) - static_cast<long>(half);
        long last = static_cast<long>(n) - 1;
        while (idx < 0 || idx > last) {
            if (idx < 0) idx = -idx;
            if (idx > last) idx = 2 * last - idx;
        }
        p[i] = x[static_cast<std::size_t>(idx)];
    }
    return p;
}

// Sliding-window median with mirrored edges; window forced odd and clamped
// to the series length.
inline std::vector<double> median_filter(const std::vector<double>& x, std::size_t window) {
    std::size_t n = x.size();
    if (n == 0) return {};
    if (window > n) window = n;
    if (window % 2 == 0) window -= 1;
    if (window <= 1) return x;
    std::size_t half = window / 2;
    auto padded = mirror_pad(x, half);

    // sorted window maintained by binary-search insert/erase
    std::vector<double> sorted(padded.begin(), padded.begin() + static_cast<long>(window));
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> out(n);
    out[0] = sorted[half];
    for (std::size_t i = 1; i < n; ++i) {
        double outgoing = padded[i - 1];
        double incoming = padded[i - 1 + window];
        sorted.erase(std::lower_bound(sorted.begin(), sorted.end(), outgoing));
        sorted.insert(std::upper_bound(sorted.begin(), sorted.end(), incoming), incoming);
        out[i] = sorted[half];
    }
    return out;
}

inline std::vector<double> moving_average(const std::vector<double>& x, std::size_t taps) {
    std::size_t n = x.size();
    if (n == 0 || taps <= 1) return x;
    std::size_t half = taps / 2;
    auto padded = mirror_pad(x, half);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0;
        for (std::size_t k = 0; k < taps; ++k) acc += padded[i + k];
        out[i] = acc / static_cast<double>(taps);
    }
    return out;
}

struct DenoiseConfig {
    double sampling_rate = 360.0;
    double baseline_window1_s = 0.2;
    double baseline_window2_s = 0.6;
    std::size_t lowpass_taps = 9;
};

struct DenoiseResult {
    std::vector<double> data;
    bool filtered = true;  // false: window too short, passed through untouched
};

// Baseline drift removed by a two-stage median filter (QRS-scale then
// P/T-scale), then a short moving-average low-pass against high-frequency
// noise.
inline DenoiseResult denoise(const std::vector<double>& window,
                             const DenoiseConfig& cfg = {}) {
    if (window.size() < cfg.lowpass_taps) return {window, false};
    auto odd = [](double seconds, double fs) {
        std::size_t w = static_cast<std::size_t>(std::lround(seconds * fs));
        return w % 2 == 0 ? w + 1 : w;
    };
    auto stage1 = median_filter(window, odd(cfg.baseline_window1_s, cfg.sampling_rate));
    auto baseline = median_filter(stage1, odd(cfg.baseline_window2_s, cfg.sampling_rate));
    std::vector<double> detrended(window.size());
    for (std::size_t i = 0; i < window.size(); ++i) detrended[i] = window[i] - baseline[i];
    return {moving_average(detrended, cfg.lowpass_taps), true};
}

// ---------------------------------------------------------------------------
// Natural cubic spline on uniformly indexed samples (knots at 0..n-1)
// ---------------------------------------------------------------------------

class NaturalCubicSpline {
   public:
    explicit NaturalCubicSpline(const std::vector<double>& y) : y_(y), m_(y.size(), 0.0) {
        std::size_t n = y.size();
        if (n < 2) throw ConfigError("spline needs at least 2 points");
        if (n == 2) return;  // linear; second derivatives stay zero
        // Thomas algorithm for M[1..n-2]:  M[i-1] + 4 M[i] + M[i+1] = 6 d2y[i]
        std::size_t k = n - 2;
        std::vector<double> c(k), d(k);
        for (std::size_t i = 0; i < k; ++i) d[i] = 6.0 * (y[i + 2] - 2.0 * y[i + 1] + y[i]);
        c[0] = 1.0 / 4.0;
        d[0] = d[0] / 4.0;
        for (std::size_t i = 1; i < k; ++i) {
            double denom = 4.0 - c[i - 1];
            c[i] = 1.0 / denom;
            d[i] = (d[i] - d[i - 1]) / denom;
        }
        m_[k] = d[k - 1];
        for (std::size_t i = k - 1; i >= 1; --i) m_[i] = d[i - 1] - c[i - 1] * m_[i + 1];
    }

    double operator()(double t) const {
        std::size_t n = y_.size();
        if (t <= 0) return y_.front();
        if (t >= static_cast<double>(n - 1)) return y_.back();
        std::size_t i = static_cast<std::size_t>(t);
        if (i >= n - 1) i = n - 2;
        double s = t - static_cast<double>(i);
        double a = 1.0 - s;
        return a * y_[i] + s * y_[i + 1] +
               ((a * a * a - a) * m_[i] + (s * s * s - s) * m_[i + 1]) / 6.0;
    }

   private:
    std::vector<double> y_;
    std::vector<double> m_;  // second derivatives at the knots
};

struct ResampleBounds {
    std::size_t min_len = 128;
    std::size_t max_len = 1024;
};

constexpr std::size_t kBeatLength = 512;

// Fixed-length resampling: spline interpolation upward, sorted random index
// subset (keeping both endpoints) downward, identity at exactly 512.
// Returns nullopt when the window length is outside the accepted bounds.
inline std::optional<std::vector<double>> resample_to_512(const std::vector<double>& window,
                                                          Rng& rng,
                                                          const ResampleBounds& bounds = {}) {
    std::size_t n = window.size();
    if (n < bounds.min_len || n > bounds.max_len) return std::nullopt;
    if (n == kBeatLength) return window;
    if (n < kBeatLength) {
        NaturalCubicSpline spline(window);
        std::vector<double> out(kBeatLength);
        double scale = static_cast<double>(n - 1) / static_cast<double>(kBeatLength - 1);
        for (std::size_t j = 0; j < kBeatLength; ++j)
            out[j] = spline(static_cast<double>(j) * scale);
        out.front() = window.front();
        out.back() = window.back();
        return out;
    }
    // n > 512: keep first and last, sample the rest uniformly at random
    auto middle = rng.sample_without_replacement(n - 2, kBeatLength - 2);
    std::vector<double> out;
    out.reserve(kBeatLength);
    out.push_back(window.front());
    for (std::size_t idx : middle) out.push_back(window[idx + 1]);
    out.push_back(window.back());
    return out;
}

// Per-series z-score; a constant series maps to all zeros.
inline std::vector<double> zscore(const std::vector<double>& x) {
    std::size_t n = x.size();
    if (n == 0) return {};
    double mean = 0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    double var = 0;
    for (double v : x) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    double denom = std::sqrt(var) + 1e-8;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = (x[i] - mean) / denom;
    return out;
}

}  // namespace isenet
