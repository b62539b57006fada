#pragma once

#include <Eigen/Core>

#include <complex>
#include <vector>

namespace vpa {

/// One second-order section, unit a0: b0 + b1 z^-1 + b2 z^-2 over
/// 1 + a1 z^-1 + a2 z^-2.
struct Biquad {
    double b0, b1, b2, a1, a2;
};

/// Butterworth bandpass in cascaded second-order-section form.
struct BandpassFilter {
    std::vector<Biquad> sections;
    std::vector<std::complex<double>> poles;  // digital poles, all |p| < 1
    int prototype_order;
    double f_lo_hz, f_hi_hz, fs_hz;
};

/// Analog Butterworth prototype, lowpass-to-bandpass transform, bilinear
/// map with edge prewarping. The digital filter has order 2*`order`.
BandpassFilter design_bandpass(double f_lo_hz, double f_hi_hz, double fs_hz,
                               int order = 3);

/// Complex frequency response at f_hz.
std::complex<double> filter_response(const BandpassFilter& f, double f_hz);

/// Magnitude response in dB at f_hz.
double filter_response_db(const BandpassFilter& f, double f_hz);

/// Single-pass causal filtering with zero initial state; output length
/// equals input length.
Eigen::VectorXd filter_contour(const Eigen::VectorXd& x, const BandpassFilter& f);

}  // namespace vpa
