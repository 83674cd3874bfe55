#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace speechbio {

/// Decoded mono recording. Immutable after construction; every amplitude
/// lies in [-1, 1] and sample_rate_hz is positive.
struct AudioClip {
    std::vector<double> samples;
    int sample_rate_hz = 0;
    std::string source_id;

    std::size_t size() const { return samples.size(); }
    double duration_s() const {
        return static_cast<double>(samples.size()) / sample_rate_hz;
    }
    std::span<const double> frame(std::size_t start, std::size_t length) const {
        return std::span<const double>(samples).subspan(start, length);
    }
};

/// One analysis frame: a window of `length` samples starting at
/// `start_index`, `hop` samples after the previous frame's start.
struct FrameView {
    std::size_t start_index = 0;
    std::size_t length = 0;
    std::size_t hop = 0;
};

/// Decodes a RIFF/WAVE container. Accepts PCM 16-bit only, 1 or 2 channels;
/// stereo is averaged per sample. Sample values are scaled by 1/32768.
AudioClip decode_wav(std::span<const std::uint8_t> bytes, std::string source_id = {});

/// Renders samples as a PCM 16-bit mono WAV (values clamped to [-1, 1)).
std::vector<std::uint8_t> encode_wav_pcm16(std::span<const double> samples, int sample_rate_hz);

AudioClip read_wav_file(const std::string& path);
void write_wav_file(const std::string& path, std::span<const double> samples, int sample_rate_hz);

/// Tiles [0, N) with frames of `win_len` every `hop` samples. No padding:
/// a tail shorter than `win_len` yields no frame, a clip shorter than one
/// window yields an empty sequence.
std::vector<FrameView> frame_signal(std::size_t n_samples, std::size_t win_len, std::size_t hop);

inline std::vector<FrameView> frame_signal(const AudioClip& clip, std::size_t win_len, std::size_t hop) {
    return frame_signal(clip.samples.size(), win_len, hop);
}

}  // namespace speechbio
