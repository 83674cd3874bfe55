#pragma once

#include <span>
#include <vector>

#include "speechbio/audio.hpp"

namespace speechbio {

/// Windowing and scale settings for the Higuchi estimator. The supported
/// window sizes are 160, 320 and 1280 points with 320 as the default.
struct HfdParams {
    int k_max = 10;
    std::size_t window_points = 320;
    std::size_t hop_points = 0;  // 0 means window_points / 2

    std::size_t effective_hop() const { return hop_points == 0 ? window_points / 2 : hop_points; }
};

constexpr std::size_t kHfdWindowChoices[] = {160, 320, 1280};
bool is_supported_hfd_window(std::size_t window_points);

/// Fractal dimension per sliding window. Windows where the estimator is
/// degenerate (constant signal) carry the smooth-curve limit 1.0 and are
/// flagged.
struct HfdSeries {
    std::vector<double> values;
    std::vector<double> start_times_s;
    std::vector<bool> degenerate;

    std::size_t size() const { return values.size(); }
};

struct VhfdSummary {
    double mean = 0.0;
    double max = 0.0;
    double min = 0.0;
    double variance = 0.0;
    double std_dev = 0.0;
};

/// Curve length at scale k from starting offset m (1-based):
///   L_m(k) = [sum_i |x(m+ik) - x(m+(i-1)k)|] * (N-1) / (P*k),  P = floor((N-m)/k).
double curve_length_mk(std::span<const double> x, int m, int k);

/// Mean of L_m(k) over the k starting offsets.
double curve_length(std::span<const double> x, int k);

/// Least-squares slope of ln(L(k)/k) against ln(1/k) over k = 1..k_max.
/// The extra 1/k converts L(k) to a per-unit curve length, which puts the
/// slope on the usual dimension scale (1 for smooth curves, 2 for
/// uncorrelated noise). Scales with L(k) = 0 are skipped; fewer than two
/// usable scales raises a degenerate-signal error.
double higuchi_fd(std::span<const double> x, int k_max);

HfdSeries windowed_hfd(const AudioClip& clip, const HfdParams& params);

/// Population statistics of the per-window values.
VhfdSummary vhfd_summary(const HfdSeries& series);

}  // namespace speechbio
