#include "vpa/filter.hpp"

#include "vpa/error.hpp"

#include <cmath>
#include <numbers>

namespace vpa {

namespace {

constexpr const char* kStage = "filter";
using cd = std::complex<double>;

cd bilinear(cd s, double k) { return (k + s) / (k - s); }

// Quadratic roots of s^2 - p*bw*s + w0sq = 0: the two bandpass images of
// prototype pole p.
std::pair<cd, cd> band_images(cd p, double bw, double w0sq) {
    const cd half = p * bw * 0.5;
    const cd rad = std::sqrt(half * half - w0sq);
    return {half + rad, half - rad};
}

cd section_response(const Biquad& s, cd z1) {
    const cd z2 = z1 * z1;
    return (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
}

}  // namespace

BandpassFilter design_bandpass(double f_lo_hz, double f_hi_hz, double fs_hz, int order) {
    if (!(0.0 < f_lo_hz && f_lo_hz < f_hi_hz && f_hi_hz < fs_hz / 2.0))
        throw Error(kStage, "band edges out of range");
    if (order < 1 || order > 12) throw Error(kStage, "unsupported prototype order");

    const double k = 2.0 * fs_hz;
    const double w_lo = k * std::tan(std::numbers::pi * f_lo_hz / fs_hz);
    const double w_hi = k * std::tan(std::numbers::pi * f_hi_hz / fs_hz);
    const double bw = w_hi - w_lo;
    const double w0sq = w_lo * w_hi;

    BandpassFilter f;
    f.prototype_order = order;
    f.f_lo_hz = f_lo_hz;
    f.f_hi_hz = f_hi_hz;
    f.fs_hz = fs_hz;

    // Prototype poles on the left unit semicircle; walking only the upper
    // half (plus the real pole for odd orders) gives one section per
    // conjugate pair after the band transform.
    for (int m = 0; m < order; ++m) {
        const double angle = std::numbers::pi * (2.0 * m + order + 1.0) / (2.0 * order);
        const cd proto{std::cos(angle), std::sin(angle)};
        if (proto.imag() < -1e-12) continue;
        const auto [s1, s2] = band_images(proto, bw, w0sq);
        const bool real_proto = std::abs(proto.imag()) <= 1e-12;
        for (const cd s : {s1, s2}) {
            const cd zp = bilinear(s, k);
            if (std::abs(zp) >= 1.0) throw Error(kStage, "unstable design");
            f.sections.push_back({1.0, 0.0, -1.0, -2.0 * zp.real(), std::norm(zp)});
            f.poles.push_back(zp);
            f.poles.push_back(std::conj(zp));
            if (real_proto) break;  // s1, s2 are already a conjugate pair
        }
    }

    // Unity gain at the digital image of the band's geometric center.
    const double w_center = 2.0 * std::atan(std::sqrt(w0sq) / k);
    const cd z1 = std::exp(cd{0.0, -w_center});
    cd h{1.0, 0.0};
    for (const Biquad& s : f.sections) h *= section_response(s, z1);
    const double g = std::pow(1.0 / std::abs(h), 1.0 / static_cast<double>(f.sections.size()));
    for (Biquad& s : f.sections) {
        s.b0 *= g;
        s.b1 *= g;
        s.b2 *= g;
    }
    return f;
}

std::complex<double> filter_response(const BandpassFilter& f, double f_hz) {
    const double w = 2.0 * std::numbers::pi * f_hz / f.fs_hz;
    const cd z1 = std::exp(cd{0.0, -w});
    cd h{1.0, 0.0};
    for (const Biquad& s : f.sections) h *= section_response(s, z1);
    return h;
}

double filter_response_db(const BandpassFilter& f, double f_hz) {
    return 20.0 * std::log10(std::abs(filter_response(f, f_hz)));
}

Eigen::VectorXd filter_contour(const Eigen::VectorXd& x, const BandpassFilter& f) {
    const int digital_order = 2 * f.prototype_order;
    if (x.size() < 3 * digital_order) throw Error(kStage, "input shorter than 3x filter order");
    Eigen::VectorXd y = x;
    for (const Biquad& s : f.sections) {
        double s1 = 0.0, s2 = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            const double in = y[i];
            const double out = s.b0 * in + s1;
            s1 = s.b1 * in - s.a1 * out + s2;
            s2 = s.b2 * in - s.a2 * out;
            y[i] = out;
        }
    }
    return y;
}

}  // namespace vpa
