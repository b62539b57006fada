#pragma once

#include "vpa/signal.hpp"

#include <Eigen/Core>

namespace vpa {

/// Frame-rate fundamental-frequency track. Zero marks an unvoiced frame.
struct F0Contour {
    Eigen::VectorXd values_hz;
    double hop_s = 0.005;
    double start_s = 0.0;  // time of the first frame center

    double rate_hz() const { return 1.0 / hop_s; }
};

struct F0Config {
    double f_min_hz = 50.0;
    double f_max_hz = 400.0;
    double hop_s = 0.005;
    double frame_s = 0.040;
    double voicing_threshold = 0.5;
};

/// Normalized-autocorrelation tracker with parabolic peak refinement and a
/// 5-point median filter over the voiced track.
F0Contour estimate_f0(const Waveform& w, const F0Config& cfg = {});

/// Per-sample radian frequencies 2*pi*f0/Fs for the whole waveform span,
/// linearly interpolated between frame centers and held at the edges.
/// Unvoiced gaps of at most 2 frames are bridged; longer gaps are an error.
Eigen::VectorXd expand_to_radians(const F0Contour& c, int sample_rate,
                                  Eigen::Index n_samples);

}  // namespace vpa
