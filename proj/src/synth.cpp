#include "vpa/synth.hpp"

#include "vpa/error.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace vpa {

namespace {

constexpr const char* kStage = "synth";

void validate(const SynthSpec& s) {
    if (s.f0_hz <= 0.0) throw Error(kStage, "f0 must be positive");
    if (s.duration_s <= 0.0) throw Error(kStage, "duration must be positive");
    if (s.sample_rate < 8000) throw Error(kStage, "sample rate below 8 kHz");
    if (s.jitter_pct < 0.0 || s.shimmer_pct < 0.0)
        throw Error(kStage, "perturbation levels must be non-negative");
    if (s.vibrato_rate_hz < 0.0) throw Error(kStage, "vibrato rate must be non-negative");
    if (s.vibrato_depth < 0.0 || s.vibrato_depth >= 0.5)
        throw Error(kStage, "vibrato depth must lie in [0, 0.5)");
    if (s.harmonics < 1) throw Error(kStage, "need at least one harmonic");
    if (s.f0_hz * (1.0 + s.vibrato_depth) > s.sample_rate / 4.0)
        throw Error(kStage, "f0 too high for the sample rate");
}

// One cycle of the vowel-like waveshape at local phase theta.
double waveshape(double theta, int harmonics, double norm) {
    double v = 0.0;
    for (int k = 1; k <= harmonics; ++k) v += std::cos(k * theta) / k;
    return v * norm;
}

// Cycles start at the steepest point of the rising flank just ahead of the
// main peak (for a plain sine this is the upward zero crossing). Starting on
// the peak itself would make per-cycle extremes coincide with the boundaries,
// where any one-sample segmentation slip corrupts peak-to-peak amplitudes;
// anchoring on the steep flank keeps both extremes well inside the cycle and
// gives waveform matching its sharpest feature right at the boundary.
double start_phase(int harmonics, double norm) {
    const auto slope = [&](double t) {
        double v = 0.0;
        for (int k = 1; k <= harmonics; ++k) v -= std::sin(k * t);
        return v * norm;
    };
    const auto curvature = [&](double t) {
        double v = 0.0;
        for (int k = 1; k <= harmonics; ++k) v -= k * std::cos(k * t);
        return v * norm;
    };
    const double a = std::numbers::pi, b = 2.0 * std::numbers::pi;
    const int grid = 4096;
    int peak = 1;
    double best = -1.0;
    for (int i = 1; i < grid; ++i) {
        const double v = slope(a + (b - a) * i / grid);
        if (v > best) {
            best = v;
            peak = i;
        }
    }
    double lo = a + (b - a) * (peak - 1) / grid;
    double hi = a + (b - a) * (peak + 1) / grid;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (curvature(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double instantaneous_f0(const SynthSpec& spec, double t_s) {
    return spec.f0_hz *
           (1.0 + spec.vibrato_depth *
                      std::sin(2.0 * std::numbers::pi * spec.vibrato_rate_hz * t_s));
}

SynthResult synth_voice(const SynthSpec& spec) {
    validate(spec);
    const double fs = spec.sample_rate;
    const Eigen::Index total = static_cast<Eigen::Index>(std::llround(spec.duration_s * fs));
    if (total < 2) throw Error(kStage, "duration too short");

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> jit(0.0, spec.jitter_pct / 100.0);
    std::normal_distribution<double> shim(0.0, spec.shimmer_pct / 100.0);

    double norm = 0.0;
    for (int k = 1; k <= spec.harmonics; ++k) norm += 1.0 / k;
    norm = 1.0 / norm;
    const double theta0 = start_phase(spec.harmonics, norm);

    SynthResult out;
    out.wave.sample_rate = spec.sample_rate;
    out.wave.samples = Eigen::VectorXd::Zero(total);
    out.boundaries.push_back(0);

    std::vector<double> periods, amplitudes;
    Eigen::Index b = 0;
    while (true) {
        const double f_inst = instantaneous_f0(spec, static_cast<double>(b) / fs);
        const double jitter = spec.jitter_pct > 0.0 ? jit(rng) : 0.0;
        const double gain = 1.0 + (spec.shimmer_pct > 0.0 ? shim(rng) : 0.0);
        const Eigen::Index len =
            std::llround(fs / f_inst * (1.0 + jitter));
        if (len < 2) throw Error(kStage, "jitter drove a cycle length below 2 samples");
        if (gain <= 0.0) throw Error(kStage, "shimmer drove a cycle amplitude below 0");

        const bool full = b + len <= total;
        const Eigen::Index upto = full ? len : total - b;
        for (Eigen::Index j = 0; j < upto; ++j) {
            const double theta =
                theta0 + 2.0 * std::numbers::pi * static_cast<double>(j) / len;
            out.wave.samples[b + j] = gain * waveshape(theta, spec.harmonics, norm);
        }
        if (!full) break;  // partial tail cycle, kept in the signal, not in ground truth
        b += len;
        out.boundaries.push_back(b);
        periods.push_back(static_cast<double>(len));
        amplitudes.push_back(gain);
        if (b == total) break;
    }
    if (periods.empty()) throw Error(kStage, "duration shorter than one cycle");

    out.wave.samples *= 0.5;  // headroom for shimmer excursions and noise in 16-bit files
    out.periods = Eigen::Map<const Eigen::VectorXd>(periods.data(), periods.size());
    out.amplitudes = Eigen::Map<const Eigen::VectorXd>(amplitudes.data(), amplitudes.size());

    if (spec.noise_snr_db) {
        const double power = out.wave.samples.squaredNorm() / total;
        const double sigma = std::sqrt(power * std::pow(10.0, -*spec.noise_snr_db / 10.0));
        std::normal_distribution<double> noise(0.0, sigma);
        for (Eigen::Index i = 0; i < total; ++i) out.wave.samples[i] += noise(rng);
    }
    return out;
}

}  // namespace vpa
