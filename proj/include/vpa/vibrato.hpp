#pragma once

#include "vpa/filter.hpp"
#include "vpa/pitch.hpp"
#include "vpa/spectrum.hpp"

#include <Eigen/Core>

namespace vpa {

struct PviConfig {
    double band_lo_hz = 9.0;
    double band_hi_hz = 14.0;
    int filter_order = 3;
    double welch_win_s = 1.0;
    double welch_overlap = 0.95;
};

struct PviResult {
    double pvi = 0.0;
    AmplitudeSpectrum spectrum;
    Eigen::VectorXd normalized;  // unit-mean contour, edge-trimmed and bridged
    Eigen::VectorXd filtered;
};

/// Contour divided by the mean of its voiced values; unvoiced frames stay 0.
F0Contour normalize_contour(const F0Contour& c);

/// Modulation energy in the band: trim edge unvoiced frames, bridge interior
/// gaps of at most 2 frames, normalize to unit mean, bandpass at the contour
/// rate, Welch amplitude spectrum, then sum the bins whose centers fall
/// inside the closed band.
PviResult compute_pvi(const F0Contour& c, const PviConfig& cfg = {});

}  // namespace vpa
