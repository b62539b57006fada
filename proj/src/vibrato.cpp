#include "vpa/vibrato.hpp"

#include "vpa/error.hpp"

#include <cmath>

namespace vpa {

namespace {

constexpr const char* kStage = "vibrato";

// Voiced values with edge unvoiced frames dropped and interior gaps of at
// most 2 frames linearly bridged.
Eigen::VectorXd trimmed_bridged(const Eigen::VectorXd& values) {
    Eigen::Index lo = 0, hi = values.size();
    while (lo < hi && values[lo] <= 0.0) ++lo;
    while (hi > lo && values[hi - 1] <= 0.0) --hi;
    if (lo == hi) throw Error(kStage, "contour has no voiced frames");
    Eigen::VectorXd v = values.segment(lo, hi - lo);
    Eigen::Index i = 0;
    while (i < v.size()) {
        if (v[i] > 0.0) {
            ++i;
            continue;
        }
        Eigen::Index j = i;
        while (j < v.size() && v[j] <= 0.0) ++j;
        if (j - i > 2) throw Error(kStage, "unvoiced gap longer than 2 frames");
        for (Eigen::Index k = i; k < j; ++k) {
            const double t = static_cast<double>(k - (i - 1)) / static_cast<double>(j - (i - 1));
            v[k] = v[i - 1] + t * (v[j] - v[i - 1]);
        }
        i = j;
    }
    return v;
}

}  // namespace

F0Contour normalize_contour(const F0Contour& c) {
    double sum = 0.0;
    Eigen::Index voiced = 0;
    for (Eigen::Index i = 0; i < c.values_hz.size(); ++i)
        if (c.values_hz[i] > 0.0) {
            sum += c.values_hz[i];
            ++voiced;
        }
    if (voiced == 0) throw Error(kStage, "contour has no voiced frames");
    F0Contour out = c;
    const double mean = sum / static_cast<double>(voiced);
    for (Eigen::Index i = 0; i < out.values_hz.size(); ++i)
        if (out.values_hz[i] > 0.0) out.values_hz[i] /= mean;
    return out;
}

PviResult compute_pvi(const F0Contour& c, const PviConfig& cfg) {
    const double fs = c.rate_hz();
    if (cfg.band_hi_hz >= fs / 2.0 || cfg.band_lo_hz <= 0.0 ||
        cfg.band_lo_hz >= cfg.band_hi_hz)
        throw Error(kStage, "band does not fit the contour rate");

    Eigen::VectorXd v = trimmed_bridged(c.values_hz);
    if (static_cast<double>(v.size()) * c.hop_s < cfg.welch_win_s)
        throw Error(kStage, "voiced contour shorter than 1 s");

    PviResult out;
    out.normalized = v / v.mean();
    // The unit mean itself is a DC step to the causal filter; removing it
    // keeps a constant contour at exactly zero without touching the
    // modulation content.
    const BandpassFilter bp =
        design_bandpass(cfg.band_lo_hz, cfg.band_hi_hz, fs, cfg.filter_order);
    out.filtered =
        filter_contour((out.normalized.array() - out.normalized.mean()).matrix(), bp);
    out.spectrum = welch_amplitude_spectrum(out.filtered, fs, cfg.welch_win_s,
                                            cfg.welch_overlap);
    out.pvi = 0.0;
    for (Eigen::Index k = 0; k < out.spectrum.freqs_hz.size(); ++k)
        if (out.spectrum.freqs_hz[k] >= cfg.band_lo_hz &&
            out.spectrum.freqs_hz[k] <= cfg.band_hi_hz)
            out.pvi += out.spectrum.amplitudes[k];
    return out;
}

}  // namespace vpa
