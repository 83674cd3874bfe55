#pragma once

#include <vector>

#include "speechbio/audio.hpp"

namespace speechbio {

/// Energy + zero-crossing voice activity detector settings. These are
/// artifact defaults, not measured constants; all of them are exposed in
/// the pipeline configuration.
struct VadParams {
    double frame_ms = 25.0;
    double hop_ms = 10.0;
    double energy_factor = 2.0;   // frame is loud if energy > factor * median energy
    double zcr_max = 0.25;        // voiced frames cross zero rarely
    double min_segment_ms = 30.0; // runs shorter than this are smoothed away
};

enum class SegmentKind { Voiced, Unvoiced };

/// A maximal span of equally-labelled frames. Consecutive segments
/// alternate kind and tile the analysed part of the recording.
struct Segment {
    SegmentKind kind = SegmentKind::Unvoiced;
    double start_s = 0.0;
    double duration_s = 0.0;

    double end_s() const { return start_s + duration_s; }
};

/// Frame geometry in samples for a given rate.
struct Framing {
    std::size_t frame_len = 0;
    std::size_t hop = 0;
};

Framing vad_framing(const VadParams& params, int sample_rate_hz);

/// Fraction of adjacent sample pairs that change sign.
double zero_crossing_fraction(std::span<const double> frame);

/// Labels each frame voiced iff its short-time energy exceeds
/// energy_factor times the median frame energy AND its zero-crossing
/// fraction stays below zcr_max. The threshold is relative, so the output
/// is invariant to positive gain.
std::vector<bool> classify_frames(const AudioClip& clip, const VadParams& params);

/// Collapses the flag sequence into alternating segments, merging every
/// run shorter than min_segment_ms into its longer neighbour (ties go to
/// the preceding one).
std::vector<Segment> segments_from_flags(const std::vector<bool>& flags, double hop_ms,
                                         double min_segment_ms);

}  // namespace speechbio
