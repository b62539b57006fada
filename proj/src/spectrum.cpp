#include "vpa/spectrum.hpp"

#include "vpa/error.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace vpa {

AmplitudeSpectrum welch_amplitude_spectrum(const Eigen::VectorXd& x, double fs_hz,
                                           double win_s, double overlap) {
    constexpr const char* kStage = "spectrum";
    if (fs_hz <= 0.0 || win_s <= 0.0) throw Error(kStage, "invalid rate or window length");
    if (overlap < 0.0 || overlap >= 1.0) throw Error(kStage, "overlap must lie in [0, 1)");
    const Eigen::Index nseg = std::llround(win_s * fs_hz);
    if (nseg < 2) throw Error(kStage, "window shorter than 2 samples");
    if (x.size() < nseg) throw Error(kStage, "signal shorter than one window");
    const Eigen::Index hop =
        std::max<Eigen::Index>(1, std::llround(static_cast<double>(nseg) * (1.0 - overlap)));
    const Eigen::Index count = 1 + (x.size() - nseg) / hop;

    Eigen::VectorXd window(nseg);
    for (Eigen::Index j = 0; j < nseg; ++j)
        window[j] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * j / nseg));
    const double wsum = window.sum();

    const Eigen::Index n_bins = nseg / 2 + 1;
    Eigen::MatrixXcd dft(n_bins, nseg);
    for (Eigen::Index k = 0; k < n_bins; ++k)
        for (Eigen::Index j = 0; j < nseg; ++j) {
            const double phase = -2.0 * std::numbers::pi * k * j / static_cast<double>(nseg);
            dft(k, j) = std::complex<double>(std::cos(phase), std::sin(phase));
        }

    Eigen::VectorXd accum = Eigen::VectorXd::Zero(n_bins);
    for (Eigen::Index s = 0; s < count; ++s) {
        const Eigen::VectorXd seg =
            x.segment(s * hop, nseg).cwiseProduct(window);
        accum += (dft * seg).cwiseAbs();
    }

    AmplitudeSpectrum out;
    out.n_segments = static_cast<int>(count);
    out.freqs_hz.resize(n_bins);
    out.amplitudes.resize(n_bins);
    for (Eigen::Index k = 0; k < n_bins; ++k) {
        out.freqs_hz[k] = static_cast<double>(k) * fs_hz / static_cast<double>(nseg);
        const bool edge = k == 0 || (nseg % 2 == 0 && k == nseg / 2);
        out.amplitudes[k] = accum[k] / static_cast<double>(count) * (edge ? 1.0 : 2.0) / wsum;
    }
    return out;
}

}  // namespace vpa
