#include "vpa/error.hpp"
#include "vpa/pitch.hpp"
#include "vpa/spectrum.hpp"
#include "vpa/synth.hpp"

#include "doctest.h"
#include "testutil.hpp"

#include <cmath>
#include <numbers>
#include <random>

TEST_CASE("pure 150 Hz sine tracks within 1 Hz on every voiced frame") {
    const vpa::Waveform w = testutil::sine(150.0, 0.4, 3.0, 44100);
    const vpa::F0Contour c = vpa::estimate_f0(w);
    REQUIRE(c.values_hz.size() > 0);
    CHECK(c.hop_s == 0.005);
    CHECK(c.start_s == doctest::Approx(0.020).epsilon(1e-12));
    int voiced = 0;
    for (Eigen::Index i = 0; i < c.values_hz.size(); ++i) {
        if (c.values_hz[i] <= 0.0) continue;
        ++voiced;
        CHECK(std::abs(c.values_hz[i] - 150.0) <= 1.0);
    }
    CHECK(voiced == c.values_hz.size());
}

TEST_CASE("white noise leaves every frame unvoiced") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    vpa::Waveform w;
    w.sample_rate = 44100;
    w.samples.resize(44100);
    for (Eigen::Index i = 0; i < w.samples.size(); ++i) w.samples[i] = u(rng);
    CHECK_THROWS_WITH_AS(vpa::estimate_f0(w), doctest::Contains("all frames unvoiced"),
                         vpa::Error);
}

TEST_CASE("vibrato shows up in the contour at its own rate") {
    vpa::SynthSpec s;
    s.f0_hz = 130.0;
    s.vibrato_rate_hz = 6.0;
    s.vibrato_depth = 0.02;
    s.duration_s = 4.0;
    s.seed = 2;
    const vpa::Waveform w = vpa::synth_voice(s).wave;
    const vpa::F0Contour c = vpa::estimate_f0(w);
    CHECK(std::abs(c.values_hz.mean() - 130.0) <= 1.0);

    const Eigen::VectorXd centered = c.values_hz.array() - c.values_hz.mean();
    const vpa::AmplitudeSpectrum spec =
        vpa::welch_amplitude_spectrum(centered, c.rate_hz(), 2.0, 0.5);
    Eigen::Index peak = 0;
    spec.amplitudes.maxCoeff(&peak);
    CHECK(std::abs(spec.freqs_hz[peak] - 6.0) <= 0.5);
}

TEST_CASE("f0 estimates are invariant to waveform scale") {
    const vpa::Waveform w = testutil::sine(211.0, 0.6, 1.0, 44100);
    vpa::Waveform half = w, odd = w;
    half.samples *= 0.25;
    odd.samples *= 0.3;
    const auto c0 = vpa::estimate_f0(w);
    const auto c1 = vpa::estimate_f0(half);
    const auto c2 = vpa::estimate_f0(odd);
    CHECK(c0.values_hz == c1.values_hz);  // power-of-two scaling commutes exactly
    CHECK((c0.values_hz - c2.values_hz).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("tracking holds across the configured band") {
    for (double f0 : {80.0, 120.0, 200.0, 300.0, 350.0}) {
        const vpa::Waveform w = testutil::sine(f0, 0.4, 2.0, 44100);
        const vpa::F0Contour c = vpa::estimate_f0(w);
        int ok = 0, voiced = 0;
        for (Eigen::Index i = 0; i < c.values_hz.size(); ++i) {
            if (c.values_hz[i] <= 0.0) continue;
            ++voiced;
            if (std::abs(c.values_hz[i] - f0) <= 1.0) ++ok;
        }
        REQUIRE(voiced > 0);
        CHECK(static_cast<double>(ok) / voiced >= 0.99);
    }
}

TEST_CASE("estimate_f0 validates its configuration") {
    const vpa::Waveform w = testutil::sine(100.0, 0.4, 1.0, 44100);
    vpa::F0Config cfg;
    cfg.f_min_hz = 500.0;  // above f_max
    CHECK_THROWS_AS(vpa::estimate_f0(w, cfg), vpa::Error);
    cfg = {};
    cfg.f_max_hz = 30000.0;
    CHECK_THROWS_WITH_AS(vpa::estimate_f0(w, cfg), doctest::Contains("Nyquist"), vpa::Error);
    cfg = {};
    cfg.voicing_threshold = 1.0;
    CHECK_THROWS_AS(vpa::estimate_f0(w, cfg), vpa::Error);

    vpa::Waveform stub = testutil::sine(100.0, 0.4, 0.01, 44100);
    CHECK_THROWS_WITH_AS(vpa::estimate_f0(stub), doctest::Contains("shorter than one frame"),
                         vpa::Error);
}

TEST_CASE("expand_to_radians maps a constant contour exactly") {
    vpa::F0Contour c;
    c.values_hz = Eigen::VectorXd::Constant(40, 100.0);
    c.hop_s = 0.005;
    c.start_s = 0.020;
    const Eigen::VectorXd w = vpa::expand_to_radians(c, 44100, 8820);
    REQUIRE(w.size() == 8820);
    const double expect = 2.0 * std::numbers::pi * 100.0 / 44100.0;
    CHECK((w.array() == expect).all());
}

TEST_CASE("expand_to_radians interpolates linearly between frame centers") {
    vpa::F0Contour c;
    c.values_hz.resize(2);
    c.values_hz << 100.0, 102.0;
    c.hop_s = 0.005;
    c.start_s = 0.0025;
    const Eigen::VectorXd w = vpa::expand_to_radians(c, 8000, 80);
    // sample 40 sits at t = 0.005 s, midway between the frame centers
    CHECK(w[40] == doctest::Approx(2.0 * std::numbers::pi * 101.0 / 8000.0).epsilon(1e-14));
    // edges hold the nearest frame value
    CHECK(w[0] == 2.0 * std::numbers::pi * 100.0 / 8000.0);
    CHECK(w[79] == 2.0 * std::numbers::pi * 102.0 / 8000.0);
}

TEST_CASE("expand_to_radians bridges short gaps and rejects long ones") {
    vpa::F0Contour c;
    c.hop_s = 0.005;
    c.start_s = 0.0;
    c.values_hz.resize(6);

    c.values_hz << 100.0, 0.0, 0.0, 100.0, 100.0, 100.0;
    const Eigen::VectorXd w = vpa::expand_to_radians(c, 8000, 240);
    CHECK((w.array() > 0.0).all());

    c.values_hz << 100.0, 0.0, 0.0, 0.0, 100.0, 100.0;
    CHECK_THROWS_WITH_AS(vpa::expand_to_radians(c, 8000, 240),
                         doctest::Contains("gap longer than 2 frames"), vpa::Error);

    vpa::F0Contour silent;
    silent.hop_s = 0.005;
    silent.start_s = 0.0;
    silent.values_hz = Eigen::VectorXd::Zero(2);
    CHECK_THROWS_WITH_AS(vpa::expand_to_radians(silent, 8000, 80),
                         doctest::Contains("all frames unvoiced"), vpa::Error);
}
