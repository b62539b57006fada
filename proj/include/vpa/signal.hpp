#pragma once

#include <Eigen/Core>

#include <string>

namespace vpa {

template <typename Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Mono audio signal. Samples are dimensionless, nominally in [-1, 1).
struct Waveform {
    Eigen::VectorXd samples;
    int sample_rate = 0;  // Hz, >= 8000

    double duration_s() const {
        return static_cast<double>(samples.size()) / sample_rate;
    }
};

/// Read a RIFF/WAVE file with 16-bit integer PCM payload (1 or 2 channels).
/// Integer samples are scaled by 1/32768; stereo is averaged to mono.
Waveform load_wav(const std::string& path);

/// Write a mono 16-bit PCM WAV file. Samples are clipped to [-1, 1).
void write_wav(const std::string& path, const Waveform& w);

/// Drop `head_s` seconds from the start and `tail_s` from the end.
/// Output length is input length minus round((head_s + tail_s) * rate), exactly.
Waveform trim_edges(const Waveform& w, double head_s, double tail_s);

}  // namespace vpa
