#include "speechbio/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "speechbio/errors.hpp"

namespace speechbio {

namespace {

std::uint32_t read_u32le(std::span<const std::uint8_t> b, std::size_t off) {
    return static_cast<std::uint32_t>(b[off]) | (static_cast<std::uint32_t>(b[off + 1]) << 8) |
           (static_cast<std::uint32_t>(b[off + 2]) << 16) |
           (static_cast<std::uint32_t>(b[off + 3]) << 24);
}

std::uint16_t read_u16le(std::span<const std::uint8_t> b, std::size_t off) {
    return static_cast<std::uint16_t>(b[off] | (b[off + 1] << 8));
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t off, const char* tag) {
    return std::memcmp(b.data() + off, tag, 4) == 0;
}

void append_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

void append_u16le(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
}

constexpr std::uint16_t kFormatPcm = 1;

}  // namespace

AudioClip decode_wav(std::span<const std::uint8_t> bytes, std::string source_id) {
    if (bytes.size() < 12 || !tag_is(bytes, 0, "RIFF") || !tag_is(bytes, 8, "WAVE")) {
        throw DecodeError("not a RIFF/WAVE container");
    }

    bool have_fmt = false;
    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t sample_rate = 0;
    std::size_t data_off = 0, data_len = 0;

    // Walk the chunk list; chunks are word-aligned.
    std::size_t off = 12;
    while (off + 8 <= bytes.size()) {
        const std::uint32_t chunk_len = read_u32le(bytes, off + 4);
        const std::size_t body = off + 8;
        if (body + chunk_len > bytes.size()) {
            throw DecodeError("chunk exceeds file size");
        }
        if (tag_is(bytes, off, "fmt ")) {
            if (chunk_len < 16) throw DecodeError("fmt chunk too short");
            format = read_u16le(bytes, body + 0);
            channels = read_u16le(bytes, body + 2);
            sample_rate = read_u32le(bytes, body + 4);
            bits = read_u16le(bytes, body + 14);
            have_fmt = true;
        } else if (tag_is(bytes, off, "data")) {
            data_off = body;
            data_len = chunk_len;
        }
        off = body + chunk_len + (chunk_len & 1);
    }

    if (!have_fmt) throw DecodeError("missing fmt chunk");
    if (data_off == 0) throw DecodeError("missing data chunk");
    if (format != kFormatPcm) {
        throw UnsupportedFormatError("format tag " + std::to_string(format) +
                                     " not supported (PCM only)");
    }
    if (bits != 16) {
        throw UnsupportedFormatError("bits per sample " + std::to_string(bits) +
                                     " not supported (16-bit only)");
    }
    if (channels != 1 && channels != 2) {
        throw UnsupportedFormatError("channel count " + std::to_string(channels) +
                                     " not supported (mono or stereo only)");
    }
    if (sample_rate == 0) throw DecodeError("sample rate is zero");

    const std::size_t bytes_per_frame = 2u * channels;
    const std::size_t n_frames = data_len / bytes_per_frame;
    if (n_frames == 0) throw DecodeError("empty data chunk");

    AudioClip clip;
    clip.sample_rate_hz = static_cast<int>(sample_rate);
    clip.source_id = std::move(source_id);
    clip.samples.reserve(n_frames);
    constexpr double kScale = 1.0 / 32768.0;
    for (std::size_t i = 0; i < n_frames; ++i) {
        const std::size_t p = data_off + i * bytes_per_frame;
        double acc = 0.0;
        for (std::uint16_t c = 0; c < channels; ++c) {
            const auto raw = static_cast<std::int16_t>(read_u16le(bytes, p + 2u * c));
            acc += raw * kScale;
        }
        clip.samples.push_back(acc / channels);
    }
    return clip;
}

std::vector<std::uint8_t> encode_wav_pcm16(std::span<const double> samples, int sample_rate_hz) {
    if (sample_rate_hz <= 0) throw ContractError("encode_wav_pcm16: sample rate must be positive");
    const std::uint32_t data_len = static_cast<std::uint32_t>(samples.size() * 2);

    std::vector<std::uint8_t> out;
    out.reserve(44 + data_len);
    const char riff[] = "RIFF";
    const char wave[] = "WAVEfmt ";
    out.insert(out.end(), riff, riff + 4);
    append_u32le(out, 36 + data_len);
    out.insert(out.end(), wave, wave + 8);
    append_u32le(out, 16);  // fmt chunk length
    append_u16le(out, kFormatPcm);
    append_u16le(out, 1);  // mono
    append_u32le(out, static_cast<std::uint32_t>(sample_rate_hz));
    append_u32le(out, static_cast<std::uint32_t>(sample_rate_hz) * 2);
    append_u16le(out, 2);   // block align
    append_u16le(out, 16);  // bits
    const char data[] = "data";
    out.insert(out.end(), data, data + 4);
    append_u32le(out, data_len);
    for (double s : samples) {
        double v = std::clamp(s, -1.0, 32767.0 / 32768.0);
        auto q = static_cast<std::int16_t>(std::lrint(v * 32768.0));
        append_u16le(out, static_cast<std::uint16_t>(q));
    }
    return out;
}

AudioClip read_wav_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return decode_wav(bytes, path);
}

void write_wav_file(const std::string& path, std::span<const double> samples, int sample_rate_hz) {
    const auto bytes = encode_wav_pcm16(samples, sample_rate_hz);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot create " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to " + path);
}

std::vector<FrameView> frame_signal(std::size_t n_samples, std::size_t win_len, std::size_t hop) {
    if (win_len == 0 || hop == 0) throw ContractError("frame_signal: win_len and hop must be > 0");
    std::vector<FrameView> frames;
    if (n_samples < win_len) return frames;
    const std::size_t count = (n_samples - win_len) / hop + 1;
    frames.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        frames.push_back(FrameView{i * hop, win_len, hop});
    }
    return frames;
}

}  // namespace speechbio
