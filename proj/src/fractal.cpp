#include "speechbio/fractal.hpp"

#include <algorithm>
#include <cmath>

#include "speechbio/errors.hpp"
#include "speechbio/mathutil.hpp"

namespace speechbio {

bool is_supported_hfd_window(std::size_t window_points) {
    for (std::size_t w : kHfdWindowChoices) {
        if (w == window_points) return true;
    }
    return false;
}

double curve_length_mk(std::span<const double> x, int m, int k) {
    const auto n = static_cast<int>(x.size());
    if (m < 1 || k < 1) throw ContractError("curve_length_mk: m and k are 1-based positives");
    const int p = (n - m) / k;
    if (p < 1) throw SignalError("curve_length_mk: no points at scale k from offset m");
    double sum = 0.0;
    for (int i = 1; i <= p; ++i) {
        sum += std::abs(x[static_cast<std::size_t>(m - 1 + i * k)] -
                        x[static_cast<std::size_t>(m - 1 + (i - 1) * k)]);
    }
    return sum * static_cast<double>(n - 1) / (static_cast<double>(p) * k);
}

double curve_length(std::span<const double> x, int k) {
    double sum = 0.0;
    for (int m = 1; m <= k; ++m) sum += curve_length_mk(x, m, k);
    return sum / k;
}

double higuchi_fd(std::span<const double> x, int k_max) {
    if (k_max < 2) throw ConfigError("higuchi_fd: k_max must be at least 2");
    if (static_cast<int>(x.size()) <= 2 * k_max) {
        throw SignalError("higuchi_fd: series shorter than 2*k_max");
    }

    std::vector<double> log_inv_k;
    std::vector<double> log_len;
    for (int k = 1; k <= k_max; ++k) {
        const double len = curve_length(x, k);
        if (len <= 0.0) continue;  // ln 0 undefined; constant-at-scale series
        log_inv_k.push_back(std::log(1.0 / k));
        log_len.push_back(std::log(len / k));
    }
    if (log_inv_k.size() < 2) {
        throw SignalError("higuchi_fd: degenerate signal, fewer than two usable scales");
    }
    return least_squares_slope(log_inv_k, log_len);
}

HfdSeries windowed_hfd(const AudioClip& clip, const HfdParams& params) {
    if (params.window_points == 0) throw ConfigError("windowed_hfd: window_points must be > 0");
    if (params.k_max < 2 || static_cast<std::size_t>(params.k_max) >= params.window_points / 2) {
        throw ConfigError("windowed_hfd: need 2 <= k_max < window_points/2");
    }
    const std::size_t hop = params.effective_hop();
    const auto frames = frame_signal(clip, params.window_points, hop);
    if (frames.empty()) throw SignalError("windowed_hfd: clip shorter than one window");

    HfdSeries series;
    series.values.reserve(frames.size());
    series.start_times_s.reserve(frames.size());
    series.degenerate.reserve(frames.size());
    for (const auto& f : frames) {
        const auto window = clip.frame(f.start_index, f.length);
        double value = 1.0;
        bool degenerate = false;
        try {
            value = higuchi_fd(window, params.k_max);
        } catch (const SignalError&) {
            value = 1.0;  // constant window: smooth-curve limit
            degenerate = true;
        }
        series.values.push_back(value);
        series.start_times_s.push_back(static_cast<double>(f.start_index) / clip.sample_rate_hz);
        series.degenerate.push_back(degenerate);
    }
    return series;
}

VhfdSummary vhfd_summary(const HfdSeries& series) {
    if (series.values.empty()) throw ContractError("vhfd_summary: empty series");
    VhfdSummary s;
    s.mean = mean(series.values);
    s.max = *std::max_element(series.values.begin(), series.values.end());
    s.min = *std::min_element(series.values.begin(), series.values.end());
    s.variance = population_variance(series.values);
    s.std_dev = std::sqrt(s.variance);
    return s;
}

}  // namespace speechbio
