#pragma once

#include <array>
#include <span>
#include <vector>

#include "speechbio/audio.hpp"
#include "speechbio/vad.hpp"

namespace speechbio {

/// Segment-duration statistics per kind. Histograms: 10 linear 0.2 s bins
/// over [0, 2) s plus an overflow bin for longer segments. Variances are
/// population variances.
struct DurationStats {
    static constexpr std::size_t kLinearBins = 10;
    static constexpr double kBinWidthS = 0.2;

    std::array<double, kLinearBins + 1> voiced_hist{};
    std::array<double, kLinearBins + 1> unvoiced_hist{};
    double mean_voiced_s = 0.0;
    double mean_unvoiced_s = 0.0;
    double var_voiced_s2 = 0.0;
    double var_unvoiced_s2 = 0.0;
};

/// Per-frame fundamental frequency track. f0_hz = 0 marks a frame with no
/// usable pitch (unvoiced, or autocorrelation peak under the voicing
/// threshold); best_autocorr holds the normalized autocorrelation peak.
struct PitchTrack {
    std::vector<double> f0_hz;
    std::vector<double> best_autocorr;
    double hop_ms = 0.0;

    std::size_t frames() const { return f0_hz.size(); }
};

struct PitchParams {
    double f_min_hz = 75.0;
    double f_max_hz = 500.0;
    double voicing_threshold = 0.45;  // minimum autocorrelation peak for a pitched frame
};

struct AcousticStats {
    double pitch_mean_hz = 0.0;
    double pitch_std_hz = 0.0;
    double pitch_max_hz = 0.0;
    double pitch_min_hz = 0.0;
    double intensity_mean_db = 0.0;
    double intensity_std_db = 0.0;
    double intensity_max_db = 0.0;
    double intensity_min_db = 0.0;
    double period_mean_s = 0.0;
    double period_std_s = 0.0;
    double rms_amplitude = 0.0;
    bool no_voiced_frames = false;
};

struct QualityStats {
    double jitter_local_pct = 0.0;
    double shimmer_local_pct = 0.0;
    double nhr = 0.0;
    double hnr_db = 0.0;
    double mean_autocorr = 0.0;
    bool degenerate = false;  // fewer than two consecutive pitched frames
};

struct BreakStats {
    double frac_voiceless_frames = 0.0;
    double degree_voice_breaks_pct = 0.0;
};

/// Unvoiced gaps at least this long, strictly between voiced segments,
/// count as voice breaks.
constexpr double kVoiceBreakMinS = 0.090;

DurationStats duration_features(std::span<const Segment> segments);

/// Mean of squared amplitudes over the frame.
double short_time_energy(std::span<const double> frame);

/// Magnitude-weighted mean frequency over DFT bins 0..L/2, rectangular
/// window. An all-zero frame maps to 0 by convention.
double spectral_centroid(std::span<const double> frame, int sample_rate_hz);

/// Short-time energy per frame under the given framing.
std::vector<double> frame_energies(const AudioClip& clip, const Framing& framing);

/// 10*log10(energy + 1e-10); the floor keeps silence finite.
std::vector<double> intensity_db(std::span<const double> energies);

double rms_amplitude(std::span<const double> samples);

/// Mean spectral centroid over all frames of the clip.
double mean_spectral_centroid(const AudioClip& clip, const Framing& framing);

/// Normalized-autocorrelation pitch tracker over the VAD framing. Only
/// frames flagged voiced are searched; lag range is [fs/f_max, fs/f_min].
PitchTrack pitch_track(const AudioClip& clip, const std::vector<bool>& voiced_flags,
                       const VadParams& vad, const PitchParams& pitch = {});

AcousticStats acoustic_features(const AudioClip& clip, const PitchTrack& track,
                                const VadParams& vad);

QualityStats quality_features(const PitchTrack& track, const AudioClip& clip,
                              const VadParams& vad);

BreakStats break_features(const PitchTrack& track, std::span<const Segment> segments);

}  // namespace speechbio
