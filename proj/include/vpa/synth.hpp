#pragma once

#include "vpa/signal.hpp"

#include <Eigen/Core>

#include <optional>
#include <vector>

namespace vpa {

/// Parameters of the synthetic sustained-vowel generator.
struct SynthSpec {
    double f0_hz = 120.0;
    double duration_s = 4.0;
    int sample_rate = 44100;
    double jitter_pct = 0.0;        // sd of cycle-length noise, percent
    double shimmer_pct = 0.0;       // sd of cycle-amplitude noise, percent
    double vibrato_rate_hz = 0.0;
    double vibrato_depth = 0.0;     // fraction of f0
    std::optional<double> noise_snr_db;
    int harmonics = 6;
    std::uint64_t seed = 0;
};

/// Generated signal plus the ground truth it was built from. `boundaries`
/// holds N+1 cycle edges starting at sample 0; `periods` and `amplitudes`
/// describe the N complete cycles (a partial tail cycle is synthesized but
/// not reported).
struct SynthResult {
    Waveform wave;
    std::vector<Eigen::Index> boundaries;
    Eigen::VectorXd periods;     // samples
    Eigen::VectorXd amplitudes;  // per-cycle gain factors
};

/// Instantaneous fundamental frequency at time t under the spec's vibrato.
double instantaneous_f0(const SynthSpec& spec, double t_s);

SynthResult synth_voice(const SynthSpec& spec);

}  // namespace vpa
