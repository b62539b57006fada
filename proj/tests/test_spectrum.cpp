#include "vpa/error.hpp"
#include "vpa/spectrum.hpp"

#include "doctest.h"
#include "testutil.hpp"

#include <cmath>
#include <numbers>

namespace {

Eigen::VectorXd tone(double freq, double amp, double fs, int n) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i)
        x[i] = amp * std::sin(2.0 * std::numbers::pi * freq * i / fs);
    return x;
}

}  // namespace

TEST_CASE("a calibrated sinusoid reads its own amplitude") {
    const vpa::AmplitudeSpectrum s =
        vpa::welch_amplitude_spectrum(tone(11.0, 0.02, 200.0, 800), 200.0);
    Eigen::Index peak = 0;
    s.amplitudes.maxCoeff(&peak);
    CHECK(std::abs(s.freqs_hz[peak] - 11.0) <= 0.5);
    CHECK(s.amplitudes[peak] == doctest::Approx(0.02).epsilon(0.15));
}

TEST_CASE("segment accounting for 4 s at 95 percent overlap") {
    const vpa::AmplitudeSpectrum s =
        vpa::welch_amplitude_spectrum(Eigen::VectorXd::Zero(800), 200.0);
    CHECK(s.n_segments == 61);
    CHECK((s.amplitudes.array() == 0.0).all());
    // 1 s windows give 1 Hz bin spacing
    REQUIRE(s.freqs_hz.size() >= 2);
    CHECK(s.freqs_hz[1] - s.freqs_hz[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("calibration holds across the band of interest") {
    for (double f : {5.0, 8.0, 11.0, 14.0, 17.0, 20.0}) {
        const vpa::AmplitudeSpectrum s =
            vpa::welch_amplitude_spectrum(tone(f, 1.0, 200.0, 1600), 200.0);
        Eigen::Index peak = 0;
        s.amplitudes.maxCoeff(&peak);
        CHECK(std::abs(s.freqs_hz[peak] - f) <= 0.5);
        CHECK(s.amplitudes[peak] == doctest::Approx(1.0).epsilon(0.15));
    }
}

TEST_CASE("welch input validation") {
    CHECK_THROWS_AS(vpa::welch_amplitude_spectrum(Eigen::VectorXd::Zero(100), 200.0, 1.0, 1.0),
                    vpa::Error);
    CHECK_THROWS_AS(vpa::welch_amplitude_spectrum(Eigen::VectorXd::Zero(100), 200.0),
                    vpa::Error);  // shorter than one window
    CHECK_THROWS_AS(vpa::welch_amplitude_spectrum(Eigen::VectorXd::Zero(100), 0.0), vpa::Error);
}
