#include "vpa/error.hpp"
#include "vpa/signal.hpp"

#include "doctest.h"
#include "testutil.hpp"

#include <cstdint>
#include <fstream>
#include <random>
#include <vector>

namespace {

void put16(std::ofstream& f, std::uint16_t v) {
    const char b[2] = {static_cast<char>(v & 0xFF), static_cast<char>(v >> 8)};
    f.write(b, 2);
}

void put32(std::ofstream& f, std::uint32_t v) {
    const char b[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                       static_cast<char>((v >> 16) & 0xFF), static_cast<char>(v >> 24)};
    f.write(b, 4);
}

// Minimal canonical WAV writer so load_wav is tested against bytes this test
// lays out itself, not against write_wav.
std::string raw_wav(const std::string& name, std::uint16_t format_tag, int channels,
                    int rate, int bits, const std::vector<std::int16_t>& interleaved) {
    const std::string path = testutil::tmp_path(name);
    std::ofstream f(path, std::ios::binary);
    const std::uint32_t data_len = static_cast<std::uint32_t>(interleaved.size() * 2);
    f.write("RIFF", 4);
    put32(f, 36 + data_len);
    f.write("WAVE", 4);
    f.write("fmt ", 4);
    put32(f, 16);
    put16(f, format_tag);
    put16(f, static_cast<std::uint16_t>(channels));
    put32(f, static_cast<std::uint32_t>(rate));
    put32(f, static_cast<std::uint32_t>(rate * channels * bits / 8));
    put16(f, static_cast<std::uint16_t>(channels * bits / 8));
    put16(f, static_cast<std::uint16_t>(bits));
    f.write("data", 4);
    put32(f, data_len);
    for (std::int16_t s : interleaved) put16(f, static_cast<std::uint16_t>(s));
    return path;
}

}  // namespace

TEST_CASE("load_wav scales 16-bit samples by 1/32768") {
    const auto path = raw_wav("mono_scale.wav", 1, 1, 44100, 16, {16384, -32768, 0, 32767});
    const vpa::Waveform w = vpa::load_wav(path);
    CHECK(w.sample_rate == 44100);
    REQUIRE(w.samples.size() == 4);
    CHECK(w.samples[0] == 0.5);
    CHECK(w.samples[1] == -1.0);
    CHECK(w.samples[2] == 0.0);
    CHECK(w.samples[3] == doctest::Approx(32767.0 / 32768.0).epsilon(1e-15));
}

TEST_CASE("load_wav averages stereo to mono") {
    const auto path = raw_wav("stereo_avg.wav", 1, 2, 16000, 16, {10000, -10000, 8000, 4000});
    const vpa::Waveform w = vpa::load_wav(path);
    REQUIRE(w.samples.size() == 2);
    CHECK(w.samples[0] == 0.0);
    CHECK(w.samples[1] == doctest::Approx((8000.0 + 4000.0) / 2.0 / 32768.0).epsilon(1e-15));
}

TEST_CASE("load_wav rejects non-PCM encodings") {
    const auto path = raw_wav("float_enc.wav", 3, 1, 44100, 16, {0, 0});
    CHECK_THROWS_WITH_AS(vpa::load_wav(path),
                         doctest::Contains("unsupported encoding"), vpa::Error);
}

TEST_CASE("load_wav rejects sub-8kHz rates and garbage") {
    const auto path = raw_wav("slow.wav", 1, 1, 4000, 16, {0, 0});
    CHECK_THROWS_AS(vpa::load_wav(path), vpa::Error);

    const std::string junk = testutil::tmp_path("junk.wav");
    std::ofstream(junk, std::ios::binary) << "not a riff file";
    CHECK_THROWS_AS(vpa::load_wav(junk), vpa::Error);
    CHECK_THROWS_AS(vpa::load_wav(testutil::tmp_path("missing.wav")), vpa::Error);
}

TEST_CASE("write/load round trip is exact to the quantization step") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> amp(-0.9, 0.9);
    vpa::Waveform w;
    w.sample_rate = 22050;
    w.samples.resize(4000);
    for (Eigen::Index i = 0; i < w.samples.size(); ++i) w.samples[i] = amp(rng);

    const auto path = testutil::tmp_path("roundtrip.wav");
    vpa::write_wav(path, w);
    const vpa::Waveform r = vpa::load_wav(path);
    REQUIRE(r.samples.size() == w.samples.size());
    CHECK(r.sample_rate == 22050);
    CHECK((r.samples - w.samples).cwiseAbs().maxCoeff() <= 1.0 / 32768.0);
}

TEST_CASE("trim_edges length arithmetic is exact") {
    vpa::Waveform w = testutil::sine(100.0, 0.5, 1.0, 44100);
    const vpa::Waveform t = vpa::trim_edges(w, 0.5, 0.25);
    CHECK(t.samples.size() == 44100 - std::llround(0.75 * 44100));

    SUBCASE("zero trim is the identity") {
        const vpa::Waveform id = vpa::trim_edges(w, 0.0, 0.0);
        REQUIRE(id.samples.size() == w.samples.size());
        CHECK(id.samples == w.samples);
    }
    SUBCASE("kept samples are the original interior") {
        CHECK(t.samples[0] == w.samples[std::llround(0.5 * 44100)]);
        CHECK(t.samples[t.samples.size() - 1] ==
              w.samples[w.samples.size() - 1 - std::llround(0.25 * 44100)]);
    }
}

TEST_CASE("trim_edges rejects trims that consume the recording") {
    vpa::Waveform w = testutil::sine(100.0, 0.5, 1.0, 8000);
    CHECK_THROWS_WITH_AS(vpa::trim_edges(w, 0.6, 0.4),
                         doctest::Contains("meet or exceed"), vpa::Error);
    CHECK_THROWS_AS(vpa::trim_edges(w, 2.0, 0.0), vpa::Error);
    CHECK_THROWS_AS(vpa::trim_edges(w, -0.1, 0.0), vpa::Error);
}
