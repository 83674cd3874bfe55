#include "speechbio/vad.hpp"

#include <cmath>

#include "speechbio/errors.hpp"
#include "speechbio/linear_features.hpp"
#include "speechbio/mathutil.hpp"

namespace speechbio {

Framing vad_framing(const VadParams& params, int sample_rate_hz) {
    if (params.frame_ms <= 0 || params.hop_ms <= 0 || params.min_segment_ms <= 0 ||
        params.energy_factor <= 0) {
        throw ConfigError("VAD parameters must be positive");
    }
    if (params.zcr_max <= 0.0 || params.zcr_max >= 1.0) {
        throw ConfigError("zcr_max must lie in (0, 1)");
    }
    Framing f;
    f.frame_len = static_cast<std::size_t>(std::lround(params.frame_ms * sample_rate_hz / 1000.0));
    f.hop = static_cast<std::size_t>(std::lround(params.hop_ms * sample_rate_hz / 1000.0));
    if (f.frame_len == 0 || f.hop == 0) throw ConfigError("frame or hop rounds to zero samples");
    return f;
}

double zero_crossing_fraction(std::span<const double> frame) {
    if (frame.size() < 2) return 0.0;
    std::size_t crossings = 0;
    for (std::size_t i = 1; i < frame.size(); ++i) {
        if ((frame[i] < 0.0) != (frame[i - 1] < 0.0)) ++crossings;
    }
    return static_cast<double>(crossings) / static_cast<double>(frame.size() - 1);
}

std::vector<bool> classify_frames(const AudioClip& clip, const VadParams& params) {
    const Framing framing = vad_framing(params, clip.sample_rate_hz);
    const auto frames = frame_signal(clip, framing.frame_len, framing.hop);
    if (frames.empty()) throw SignalError("clip shorter than one VAD frame");

    std::vector<double> energies;
    energies.reserve(frames.size());
    for (const auto& f : frames) {
        energies.push_back(short_time_energy(clip.frame(f.start_index, f.length)));
    }
    const double energy_threshold = params.energy_factor * median(energies);

    std::vector<bool> voiced(frames.size());
    for (std::size_t i = 0; i < frames.size(); ++i) {
        const auto frame = clip.frame(frames[i].start_index, frames[i].length);
        voiced[i] = energies[i] > energy_threshold &&
                    zero_crossing_fraction(frame) < params.zcr_max;
    }
    return voiced;
}

namespace {

struct Run {
    bool voiced;
    std::size_t frames;
};

std::vector<Run> runs_of(const std::vector<bool>& flags) {
    std::vector<Run> runs;
    for (bool f : flags) {
        if (!runs.empty() && runs.back().voiced == f) {
            ++runs.back().frames;
        } else {
            runs.push_back(Run{f, 1});
        }
    }
    return runs;
}

void coalesce(std::vector<Run>& runs) {
    std::vector<Run> out;
    for (const Run& r : runs) {
        if (!out.empty() && out.back().voiced == r.voiced) {
            out.back().frames += r.frames;
        } else {
            out.push_back(r);
        }
    }
    runs = std::move(out);
}

}  // namespace

std::vector<Segment> segments_from_flags(const std::vector<bool>& flags, double hop_ms,
                                         double min_segment_ms) {
    if (flags.empty()) throw ContractError("segments_from_flags: empty flag sequence");

    std::vector<Run> runs = runs_of(flags);

    // Merge the leftmost under-length run into its longer neighbour
    // (preceding neighbour on ties) until none remain.
    while (runs.size() > 1) {
        std::size_t i = 0;
        bool found = false;
        for (; i < runs.size(); ++i) {
            if (static_cast<double>(runs[i].frames) * hop_ms < min_segment_ms) {
                found = true;
                break;
            }
        }
        if (!found) break;

        std::size_t target;
        if (i == 0) {
            target = 1;
        } else if (i + 1 == runs.size()) {
            target = i - 1;
        } else {
            target = (runs[i + 1].frames > runs[i - 1].frames) ? i + 1 : i - 1;
        }
        runs[target].frames += runs[i].frames;
        runs.erase(runs.begin() + static_cast<std::ptrdiff_t>(i));
        coalesce(runs);
    }

    std::vector<Segment> segments;
    segments.reserve(runs.size());
    std::size_t frame_pos = 0;
    for (const Run& r : runs) {
        Segment s;
        s.kind = r.voiced ? SegmentKind::Voiced : SegmentKind::Unvoiced;
        s.start_s = static_cast<double>(frame_pos) * hop_ms / 1000.0;
        s.duration_s = static_cast<double>(r.frames) * hop_ms / 1000.0;
        segments.push_back(s);
        frame_pos += r.frames;
    }
    return segments;
}

}  // namespace speechbio
