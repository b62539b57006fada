#include "vpa/signal.hpp"

#include "vpa/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace vpa {

namespace {

constexpr const char* kStage = "signal_io";

uint16_t read_u16(const uint8_t* p) {
    return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

uint32_t read_u32(const uint8_t* p) {
    return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
           (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
    out.push_back(static_cast<uint8_t>(v & 0xff));
    out.push_back(static_cast<uint8_t>(v >> 8));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back(static_cast<uint8_t>(v & 0xff));
    out.push_back(static_cast<uint8_t>((v >> 8) & 0xff));
    out.push_back(static_cast<uint8_t>((v >> 16) & 0xff));
    out.push_back(static_cast<uint8_t>((v >> 24) & 0xff));
}

}  // namespace

Waveform load_wav(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(kStage, "cannot open file: " + path);

    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        throw Error(kStage, "corrupt or truncated WAV header: " + path);

    bool have_fmt = false;
    uint16_t format_tag = 0, channels = 0, bits = 0;
    uint32_t rate = 0;
    const uint8_t* data = nullptr;
    size_t data_len = 0;

    size_t off = 12;
    while (off + 8 <= bytes.size()) {
        const uint8_t* hdr = bytes.data() + off;
        uint32_t chunk_len = read_u32(hdr + 4);
        size_t body = off + 8;
        if (body + chunk_len > bytes.size())
            throw Error(kStage, "truncated chunk in WAV file: " + path);
        if (std::memcmp(hdr, "fmt ", 4) == 0) {
            if (chunk_len < 16) throw Error(kStage, "corrupt fmt chunk: " + path);
            format_tag = read_u16(bytes.data() + body);
            channels = read_u16(bytes.data() + body + 2);
            rate = read_u32(bytes.data() + body + 4);
            bits = read_u16(bytes.data() + body + 14);
            have_fmt = true;
        } else if (std::memcmp(hdr, "data", 4) == 0) {
            data = bytes.data() + body;
            data_len = chunk_len;
        }
        off = body + chunk_len + (chunk_len & 1);  // chunks are word-aligned
    }

    if (!have_fmt || data == nullptr)
        throw Error(kStage, "corrupt or truncated WAV header: " + path);
    if (format_tag != 1)
        throw Error(kStage, "unsupported encoding (format tag " + std::to_string(format_tag) +
                                "); expected 16-bit integer PCM");
    if (bits != 16)
        throw Error(kStage, "unsupported sample width (" + std::to_string(bits) +
                                " bits); expected 16-bit integer PCM");
    if (channels < 1 || channels > 2)
        throw Error(kStage, "unsupported channel count: " + std::to_string(channels));
    if (rate < 8000)
        throw Error(kStage, "sample rate below 8 kHz: " + std::to_string(rate));

    const size_t frame_bytes = 2u * channels;
    const size_t n_frames = data_len / frame_bytes;
    if (n_frames == 0) throw Error(kStage, "empty data chunk: " + path);

    Waveform w;
    w.sample_rate = static_cast<int>(rate);
    w.samples.resize(static_cast<Eigen::Index>(n_frames));
    for (size_t i = 0; i < n_frames; ++i) {
        double acc = 0.0;
        for (uint16_t c = 0; c < channels; ++c) {
            int16_t v = static_cast<int16_t>(read_u16(data + i * frame_bytes + 2u * c));
            acc += static_cast<double>(v);
        }
        w.samples[static_cast<Eigen::Index>(i)] = acc / channels / 32768.0;
    }
    return w;
}

void write_wav(const std::string& path, const Waveform& w) {
    if (w.samples.size() == 0) throw Error(kStage, "refusing to write empty waveform");
    if (w.sample_rate < 8000) throw Error(kStage, "sample rate below 8 kHz");

    const uint32_t n = static_cast<uint32_t>(w.samples.size());
    std::vector<uint8_t> out;
    out.reserve(44 + 2 * n);
    out.insert(out.end(), {'R', 'I', 'F', 'F'});
    put_u32(out, 36 + 2 * n);
    out.insert(out.end(), {'W', 'A', 'V', 'E'});
    out.insert(out.end(), {'f', 'm', 't', ' '});
    put_u32(out, 16);
    put_u16(out, 1);  // integer PCM
    put_u16(out, 1);  // mono
    put_u32(out, static_cast<uint32_t>(w.sample_rate));
    put_u32(out, static_cast<uint32_t>(w.sample_rate) * 2);
    put_u16(out, 2);
    put_u16(out, 16);
    out.insert(out.end(), {'d', 'a', 't', 'a'});
    put_u32(out, 2 * n);
    for (Eigen::Index i = 0; i < w.samples.size(); ++i) {
        double v = std::round(w.samples[i] * 32768.0);
        v = std::clamp(v, -32768.0, 32767.0);
        put_u16(out, static_cast<uint16_t>(static_cast<int16_t>(v)));
    }

    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(kStage, "cannot open file for writing: " + path);
    f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (!f) throw Error(kStage, "write failed: " + path);
}

Waveform trim_edges(const Waveform& w, double head_s, double tail_s) {
    if (head_s < 0 || tail_s < 0) throw Error(kStage, "negative trim amount");
    const Eigen::Index n = w.samples.size();
    const Eigen::Index head = static_cast<Eigen::Index>(std::llround(head_s * w.sample_rate));
    const Eigen::Index total =
        static_cast<Eigen::Index>(std::llround((head_s + tail_s) * w.sample_rate));
    if (total >= n)
        throw Error(kStage, "trim amounts meet or exceed recording duration");
    Waveform out;
    out.sample_rate = w.sample_rate;
    out.samples = w.samples.segment(head, n - total);
    return out;
}

}  // namespace vpa
