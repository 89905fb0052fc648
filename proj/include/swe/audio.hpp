#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace swe {

// One decoded audio clip. Samples are normalized to [-1, 1]; stereo data
// stays interleaved until to_mono() is applied.
struct AudioBuffer {
    std::vector<double> samples;
    int sample_rate = 0;
    int channels = 1;

    std::size_t frame_count() const { return samples.size() / channels; }
    double duration_s() const {
        return static_cast<double>(frame_count()) / sample_rate;
    }
};

namespace detail {

inline std::uint32_t read_u32le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

inline std::uint16_t read_u16le(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

inline void write_u32le(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

inline void write_u16le(std::ostream& os, std::uint16_t v) {
    unsigned char b[2] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff)};
    os.write(reinterpret_cast<const char*>(b), 2);
}

}  // namespace detail

// Decode a RIFF/WAVE file holding 16-bit or 32-bit integer PCM, 1 or 2
// channels. Sample values are divided by the type's maximum magnitude
// (32768 or 2^31), so int16 32767 maps to 0.99997.
inline AudioBuffer load_wav(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open audio file: " + path);

    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(f)),
                                     std::istreambuf_iterator<char>());
    if (bytes.size() < 12) throw std::runtime_error("decode error: truncated RIFF header");
    if (std::memcmp(bytes.data(), "RIFF", 4) != 0)
        throw std::runtime_error("decode error: missing RIFF magic");
    if (std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        throw std::runtime_error("decode error: missing WAVE form type");

    AudioBuffer out;
    int bits = 0;
    std::uint16_t format = 0;
    bool have_fmt = false, have_data = false;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
        const std::uint32_t size = detail::read_u32le(bytes.data() + pos + 4);
        pos += 8;
        if (pos + size > bytes.size())
            throw std::runtime_error(std::string("decode error: chunk '") +
                                     std::string(id, 4) + "' exceeds file size");
        if (std::memcmp(id, "fmt ", 4) == 0) {
            if (size < 16) throw std::runtime_error("decode error: short 'fmt ' chunk");
            const unsigned char* p = bytes.data() + pos;
            format = detail::read_u16le(p);
            out.channels = detail::read_u16le(p + 2);
            out.sample_rate = static_cast<int>(detail::read_u32le(p + 4));
            bits = detail::read_u16le(p + 14);
            have_fmt = true;
        } else if (std::memcmp(id, "data", 4) == 0) {
            if (!have_fmt) throw std::runtime_error("decode error: 'data' chunk before 'fmt '");
            if (format != 1)
                throw std::runtime_error("unsupported format: only integer PCM is supported");
            if (bits != 16 && bits != 32)
                throw std::runtime_error("unsupported format: " + std::to_string(bits) +
                                         "-bit PCM (expected 16 or 32)");
            if (out.channels != 1 && out.channels != 2)
                throw std::runtime_error("unsupported format: " + std::to_string(out.channels) +
                                         " channels (expected 1 or 2)");
            const unsigned char* p = bytes.data() + pos;
            const std::size_t n = size / (bits / 8);
            out.samples.reserve(n);
            if (bits == 16) {
                for (std::size_t i = 0; i < n; ++i) {
                    std::int16_t s = static_cast<std::int16_t>(detail::read_u16le(p + 2 * i));
                    out.samples.push_back(s / 32768.0);
                }
            } else {
                for (std::size_t i = 0; i < n; ++i) {
                    std::int32_t s = static_cast<std::int32_t>(detail::read_u32le(p + 4 * i));
                    out.samples.push_back(s / 2147483648.0);
                }
            }
            have_data = true;
        }
        pos += size + (size & 1);  // chunks are word-aligned
    }
    if (!have_fmt) throw std::runtime_error("decode error: missing 'fmt ' chunk");
    if (!have_data) throw std::runtime_error("decode error: missing 'data' chunk");
    if (out.sample_rate <= 0) throw std::runtime_error("decode error: non-positive sample rate");
    if (out.samples.size() % out.channels != 0)
        throw std::runtime_error("decode error: sample count not divisible by channel count");
    return out;
}

// Write 16-bit PCM. Samples are clipped to [-1, 1] and quantized by 32767.
inline void save_wav(const std::string& path, const AudioBuffer& buf) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    const std::uint32_t data_bytes = static_cast<std::uint32_t>(buf.samples.size() * 2);
    f.write("RIFF", 4);
    detail::write_u32le(f, 36 + data_bytes);
    f.write("WAVE", 4);
    f.write("fmt ", 4);
    detail::write_u32le(f, 16);
    detail::write_u16le(f, 1);  // PCM
    detail::write_u16le(f, static_cast<std::uint16_t>(buf.channels));
    detail::write_u32le(f, static_cast<std::uint32_t>(buf.sample_rate));
    detail::write_u32le(f, static_cast<std::uint32_t>(buf.sample_rate * buf.channels * 2));
    detail::write_u16le(f, static_cast<std::uint16_t>(buf.channels * 2));
    detail::write_u16le(f, 16);
    f.write("data", 4);
    detail::write_u32le(f, data_bytes);
    for (double s : buf.samples) {
        double c = std::min(1.0, std::max(-1.0, s));
        std::int16_t q = static_cast<std::int16_t>(std::lround(c * 32767.0));
        detail::write_u16le(f, static_cast<std::uint16_t>(q));
    }
}

// Stereo-to-mono mixdown by channel mean; mono input passes through.
inline AudioBuffer to_mono(const AudioBuffer& buf) {
    if (buf.channels == 1) return buf;
    if (buf.channels != 2)
        throw std::runtime_error("to_mono: expected 1 or 2 channels");
    AudioBuffer out;
    out.sample_rate = buf.sample_rate;
    out.channels = 1;
    out.samples.reserve(buf.samples.size() / 2);
    for (std::size_t i = 0; i + 1 < buf.samples.size(); i += 2)
        out.samples.push_back((buf.samples[i] + buf.samples[i + 1]) / 2.0);
    return out;
}

// Ordered mono sample source for streaming mode. read() fills as much of
// `out` as is available and returns the count; 0 means end of stream.
class ChunkSource {
public:
    virtual ~ChunkSource() = default;
    virtual std::size_t read(std::span<double> out) = 0;
    virtual int sample_rate() const = 0;
};

// Serves a preloaded mono buffer in fixed-duration blocks.
class BufferChunkSource : public ChunkSource {
public:
    BufferChunkSource(AudioBuffer buf, double chunk_ms)
        : buf_(std::move(buf)), chunk_ms_(chunk_ms) {
        if (buf_.channels != 1)
            throw std::runtime_error("BufferChunkSource: mono input required");
    }

    std::size_t read(std::span<double> out) override {
        const std::size_t chunk =
            static_cast<std::size_t>(ms_to_samples_local(chunk_ms_, buf_.sample_rate));
        std::size_t n = std::min({out.size(), chunk, buf_.samples.size() - pos_});
        for (std::size_t i = 0; i < n; ++i) out[i] = buf_.samples[pos_ + i];
        pos_ += n;
        return n;
    }

    int sample_rate() const override { return buf_.sample_rate; }

private:
    static std::int64_t ms_to_samples_local(double ms, int rate) {
        return static_cast<std::int64_t>(std::llround(ms * rate / 1000.0));
    }
    AudioBuffer buf_;
    double chunk_ms_;
    std::size_t pos_ = 0;
};

}  // namespace swe
