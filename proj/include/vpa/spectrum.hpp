#pragma once

#include <Eigen/Core>

namespace vpa {

/// Amplitude spectrum: a calibrated sinusoid of amplitude A reads A at its
/// bin.
struct AmplitudeSpectrum {
    Eigen::VectorXd freqs_hz;
    Eigen::VectorXd amplitudes;
    int n_segments = 0;
};

/// Welch-averaged amplitude spectrum with Hann-windowed segments.
AmplitudeSpectrum welch_amplitude_spectrum(const Eigen::VectorXd& x, double fs_hz,
                                           double win_s = 1.0, double overlap = 0.95);

}  // namespace vpa
