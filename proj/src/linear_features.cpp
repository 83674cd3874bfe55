#include "speechbio/linear_features.hpp"

#include <algorithm>
#include <cmath>

#include "speechbio/errors.hpp"
#include "speechbio/mathutil.hpp"

namespace speechbio {

namespace {

constexpr double kIntensityFloor = 1e-10;
constexpr double kAutocorrClamp = 1e-6;

std::vector<double> durations_of_kind(std::span<const Segment> segments, SegmentKind kind) {
    std::vector<double> out;
    for (const Segment& s : segments) {
        if (s.kind == kind) out.push_back(s.duration_s);
    }
    return out;
}

void fill_histogram(std::span<const double> durations,
                    std::array<double, DurationStats::kLinearBins + 1>& hist) {
    for (double d : durations) {
        auto bin = static_cast<std::size_t>(std::floor(d / DurationStats::kBinWidthS));
        if (bin >= DurationStats::kLinearBins) bin = DurationStats::kLinearBins;  // overflow
        hist[bin] += 1.0;
    }
}

}  // namespace

DurationStats duration_features(std::span<const Segment> segments) {
    DurationStats stats;
    const auto voiced = durations_of_kind(segments, SegmentKind::Voiced);
    const auto unvoiced = durations_of_kind(segments, SegmentKind::Unvoiced);
    fill_histogram(voiced, stats.voiced_hist);
    fill_histogram(unvoiced, stats.unvoiced_hist);
    stats.mean_voiced_s = mean(voiced);
    stats.mean_unvoiced_s = mean(unvoiced);
    stats.var_voiced_s2 = population_variance(voiced);
    stats.var_unvoiced_s2 = population_variance(unvoiced);
    return stats;
}

double short_time_energy(std::span<const double> frame) {
    if (frame.empty()) throw ContractError("short_time_energy: empty frame");
    double s = 0.0;
    for (double x : frame) s += x * x;
    return s / static_cast<double>(frame.size());
}

double spectral_centroid(std::span<const double> frame, int sample_rate_hz) {
    if (frame.empty()) throw ContractError("spectral_centroid: empty frame");
    const std::size_t n = frame.size();
    const std::size_t n_bins = n / 2 + 1;

    // One period of DFT twiddles; bin k walks the table in steps of k.
    std::vector<double> cos_t(n), sin_t(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = 2.0 * 3.14159265358979323846 * static_cast<double>(i) / static_cast<double>(n);
        cos_t[i] = std::cos(a);
        sin_t[i] = std::sin(a);
    }

    double weighted = 0.0;
    double total = 0.0;
    for (std::size_t k = 0; k < n_bins; ++k) {
        double re = 0.0, im = 0.0;
        std::size_t idx = 0;
        for (std::size_t i = 0; i < n; ++i) {
            re += frame[i] * cos_t[idx];
            im -= frame[i] * sin_t[idx];
            idx += k;
            if (idx >= n) idx -= n;
        }
        const double mag = std::hypot(re, im);
        const double freq = static_cast<double>(k) * sample_rate_hz / static_cast<double>(n);
        weighted += freq * mag;
        total += mag;
    }
    if (total == 0.0) return 0.0;
    return weighted / total;
}

std::vector<double> frame_energies(const AudioClip& clip, const Framing& framing) {
    const auto frames = frame_signal(clip, framing.frame_len, framing.hop);
    std::vector<double> energies;
    energies.reserve(frames.size());
    for (const auto& f : frames) {
        energies.push_back(short_time_energy(clip.frame(f.start_index, f.length)));
    }
    return energies;
}

std::vector<double> intensity_db(std::span<const double> energies) {
    std::vector<double> out;
    out.reserve(energies.size());
    for (double e : energies) out.push_back(10.0 * std::log10(e + kIntensityFloor));
    return out;
}

double rms_amplitude(std::span<const double> samples) {
    if (samples.empty()) return 0.0;
    double s = 0.0;
    for (double x : samples) s += x * x;
    return std::sqrt(s / static_cast<double>(samples.size()));
}

double mean_spectral_centroid(const AudioClip& clip, const Framing& framing) {
    const auto frames = frame_signal(clip, framing.frame_len, framing.hop);
    if (frames.empty()) return 0.0;
    double s = 0.0;
    for (const auto& f : frames) {
        s += spectral_centroid(clip.frame(f.start_index, f.length), clip.sample_rate_hz);
    }
    return s / static_cast<double>(frames.size());
}

PitchTrack pitch_track(const AudioClip& clip, const std::vector<bool>& voiced_flags,
                       const VadParams& vad, const PitchParams& pitch) {
    if (pitch.f_min_hz >= pitch.f_max_hz) {
        throw ConfigError("pitch range: f_min must be below f_max");
    }
    const Framing framing = vad_framing(vad, clip.sample_rate_hz);
    const auto frames = frame_signal(clip, framing.frame_len, framing.hop);
    if (frames.size() != voiced_flags.size()) {
        throw ContractError("pitch_track: flags not aligned with VAD framing");
    }

    const double fs = clip.sample_rate_hz;
    auto lag_min = static_cast<std::size_t>(std::ceil(fs / pitch.f_max_hz));
    auto lag_max = static_cast<std::size_t>(std::floor(fs / pitch.f_min_hz));
    lag_min = std::max<std::size_t>(lag_min, 2);
    if (framing.frame_len < 4 || lag_max > framing.frame_len - 2) {
        lag_max = framing.frame_len >= 4 ? framing.frame_len - 2 : 0;
    }
    if (lag_min > lag_max) throw ConfigError("pitch range needs longer frames");

    PitchTrack track;
    track.hop_ms = vad.hop_ms;
    track.f0_hz.assign(frames.size(), 0.0);
    track.best_autocorr.assign(frames.size(), 0.0);

    std::vector<double> sq_prefix(framing.frame_len + 1);
    for (std::size_t fi = 0; fi < frames.size(); ++fi) {
        if (!voiced_flags[fi]) continue;
        const auto x = clip.frame(frames[fi].start_index, frames[fi].length);
        const std::size_t n = x.size();

        sq_prefix[0] = 0.0;
        for (std::size_t i = 0; i < n; ++i) sq_prefix[i + 1] = sq_prefix[i] + x[i] * x[i];

        double r_best = 0.0;
        std::size_t best_lag = 0;
        for (std::size_t lag = lag_min; lag <= lag_max; ++lag) {
            double cross = 0.0;
            for (std::size_t i = 0; i + lag < n; ++i) cross += x[i] * x[i + lag];
            const double e0 = sq_prefix[n - lag];
            const double e1 = sq_prefix[n] - sq_prefix[lag];
            if (e0 <= 0.0 || e1 <= 0.0) continue;
            const double r = cross / std::sqrt(e0 * e1);
            // Strictly-better keeps the shortest lag among numerically tied
            // peaks, which suppresses octave-down errors on pure tones.
            if (r > r_best + 1e-9 || best_lag == 0) {
                r_best = r;
                best_lag = lag;
            }
        }
        track.best_autocorr[fi] = std::clamp(r_best, 0.0, 1.0);
        if (best_lag != 0 && r_best >= pitch.voicing_threshold) {
            track.f0_hz[fi] = fs / static_cast<double>(best_lag);
        }
    }
    return track;
}

AcousticStats acoustic_features(const AudioClip& clip, const PitchTrack& track,
                                const VadParams& vad) {
    if (track.frames() == 0) throw ContractError("acoustic_features: empty pitch track");
    const Framing framing = vad_framing(vad, clip.sample_rate_hz);

    AcousticStats stats;
    stats.rms_amplitude = rms_amplitude(clip.samples);

    const auto energies = frame_energies(clip, framing);
    const auto intensities = intensity_db(energies);
    stats.intensity_mean_db = mean(intensities);
    stats.intensity_std_db = std::sqrt(population_variance(intensities));
    stats.intensity_max_db = *std::max_element(intensities.begin(), intensities.end());
    stats.intensity_min_db = *std::min_element(intensities.begin(), intensities.end());

    std::vector<double> pitched;
    std::vector<double> periods;
    for (double f0 : track.f0_hz) {
        if (f0 > 0.0) {
            pitched.push_back(f0);
            periods.push_back(1.0 / f0);
        }
    }
    if (pitched.empty()) {
        stats.no_voiced_frames = true;
        return stats;
    }
    stats.pitch_mean_hz = mean(pitched);
    stats.pitch_std_hz = std::sqrt(population_variance(pitched));
    stats.pitch_max_hz = *std::max_element(pitched.begin(), pitched.end());
    stats.pitch_min_hz = *std::min_element(pitched.begin(), pitched.end());
    stats.period_mean_s = mean(periods);
    stats.period_std_s = std::sqrt(population_variance(periods));
    return stats;
}

QualityStats quality_features(const PitchTrack& track, const AudioClip& clip,
                              const VadParams& vad) {
    const Framing framing = vad_framing(vad, clip.sample_rate_hz);
    const auto frames = frame_signal(clip, framing.frame_len, framing.hop);
    if (frames.size() != track.frames()) {
        throw ContractError("quality_features: track not aligned with clip framing");
    }

    QualityStats stats;

    std::vector<double> periods;       // per pitched frame
    std::vector<double> amplitudes;    // per-frame peak over pitched frames
    std::vector<double> autocorrs;
    double period_diff_sum = 0.0;
    double amp_diff_sum = 0.0;
    std::size_t pair_count = 0;
    bool prev_pitched = false;
    double prev_period = 0.0, prev_amp = 0.0;

    for (std::size_t i = 0; i < track.frames(); ++i) {
        const bool pitched = track.f0_hz[i] > 0.0;
        if (!pitched) {
            prev_pitched = false;
            continue;
        }
        const double period = 1.0 / track.f0_hz[i];
        const auto x = clip.frame(frames[i].start_index, frames[i].length);
        double peak = 0.0;
        for (double v : x) peak = std::max(peak, std::abs(v));

        periods.push_back(period);
        amplitudes.push_back(peak);
        autocorrs.push_back(track.best_autocorr[i]);
        if (prev_pitched) {
            period_diff_sum += std::abs(period - prev_period);
            amp_diff_sum += std::abs(peak - prev_amp);
            ++pair_count;
        }
        prev_pitched = true;
        prev_period = period;
        prev_amp = peak;
    }

    if (pair_count == 0) {
        stats.degenerate = true;
    } else {
        const double mean_period = mean(periods);
        const double mean_amp = mean(amplitudes);
        if (mean_period > 0.0) {
            stats.jitter_local_pct = 100.0 * (period_diff_sum / pair_count) / mean_period;
        }
        if (mean_amp > 0.0) {
            stats.shimmer_local_pct = 100.0 * (amp_diff_sum / pair_count) / mean_amp;
        }
    }

    stats.mean_autocorr = autocorrs.empty() ? 0.0 : mean(autocorrs);
    if (autocorrs.empty()) stats.degenerate = true;

    const double r = std::clamp(stats.mean_autocorr, kAutocorrClamp, 1.0 - kAutocorrClamp);
    stats.hnr_db = 10.0 * std::log10(r / (1.0 - r));
    stats.nhr = std::pow(10.0, -stats.hnr_db / 10.0);
    return stats;
}

BreakStats break_features(const PitchTrack& track, std::span<const Segment> segments) {
    BreakStats stats;
    if (track.frames() > 0) {
        std::size_t voiceless = 0;
        for (double f0 : track.f0_hz) {
            if (f0 == 0.0) ++voiceless;
        }
        stats.frac_voiceless_frames =
            static_cast<double>(voiceless) / static_cast<double>(track.frames());
    }

    double total = 0.0;
    double breaks = 0.0;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        total += segments[i].duration_s;
        const bool interior = i > 0 && i + 1 < segments.size();
        if (interior && segments[i].kind == SegmentKind::Unvoiced &&
            segments[i - 1].kind == SegmentKind::Voiced &&
            segments[i + 1].kind == SegmentKind::Voiced &&
            segments[i].duration_s >= kVoiceBreakMinS) {
            breaks += segments[i].duration_s;
        }
    }
    if (total > 0.0) stats.degree_voice_breaks_pct = 100.0 * breaks / total;
    return stats;
}

}  // namespace speechbio
