#include "vpa/pitch.hpp"

#include "vpa/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace vpa {

namespace {

constexpr const char* kStage = "pitch";

void validate(const F0Config& cfg, double fs) {
    if (cfg.f_min_hz <= 0.0 || cfg.f_min_hz >= cfg.f_max_hz)
        throw Error(kStage, "need 0 < f_min < f_max");
    if (cfg.f_max_hz >= fs / 2.0) throw Error(kStage, "f_max must lie below Nyquist");
    if (cfg.hop_s <= 0.0 || cfg.frame_s <= 0.0)
        throw Error(kStage, "hop and frame length must be positive");
    if (cfg.frame_s < 2.0 / cfg.f_max_hz)
        throw Error(kStage, "frame too short to hold two cycles at f_max");
    if (cfg.voicing_threshold <= 0.0 || cfg.voicing_threshold >= 1.0)
        throw Error(kStage, "voicing threshold must lie in (0, 1)");
}

// Median of the voiced values with a 5-point window, edges replicated.
void median_filter_voiced(Eigen::VectorXd& values) {
    std::vector<Eigen::Index> voiced;
    for (Eigen::Index i = 0; i < values.size(); ++i)
        if (values[i] > 0.0) voiced.push_back(i);
    if (voiced.size() < 3) return;
    const Eigen::Index m = static_cast<Eigen::Index>(voiced.size());
    std::vector<double> filtered(m);
    std::array<double, 5> win;
    for (Eigen::Index i = 0; i < m; ++i) {
        for (int j = -2; j <= 2; ++j) {
            const Eigen::Index k = std::clamp<Eigen::Index>(i + j, 0, m - 1);
            win[j + 2] = values[voiced[k]];
        }
        std::nth_element(win.begin(), win.begin() + 2, win.end());
        filtered[i] = win[2];
    }
    for (Eigen::Index i = 0; i < m; ++i) values[voiced[i]] = filtered[i];
}

}  // namespace

F0Contour estimate_f0(const Waveform& w, const F0Config& cfg) {
    const double fs = w.sample_rate;
    validate(cfg, fs);
    const Eigen::Index n = w.samples.size();
    const Eigen::Index frame_len = std::llround(cfg.frame_s * fs);
    if (frame_len > n) throw Error(kStage, "waveform shorter than one frame");

    const Eigen::Index tau_min =
        std::max<Eigen::Index>(2, static_cast<Eigen::Index>(std::ceil(fs / cfg.f_max_hz)));
    const Eigen::Index tau_max = static_cast<Eigen::Index>(std::floor(fs / cfg.f_min_hz));
    const Eigen::Index win = frame_len - tau_max;
    if (win < 16) throw Error(kStage, "frame too short for the f_min search lag");

    std::vector<double> track;
    Eigen::VectorXd frame(frame_len), csum(frame_len + 1);
    for (Eigen::Index m = 0;; ++m) {
        const Eigen::Index start = std::llround(static_cast<double>(m) * cfg.hop_s * fs);
        if (start + frame_len > n) break;
        frame = w.samples.segment(start, frame_len);
        frame.array() -= frame.mean();

        csum[0] = 0.0;
        for (Eigen::Index i = 0; i < frame_len; ++i) csum[i + 1] = csum[i] + frame[i] * frame[i];
        const double e0 = csum[win];

        const Eigen::Index n_lags = tau_max - tau_min + 1;
        Eigen::VectorXd r = Eigen::VectorXd::Zero(n_lags);
        if (e0 > 0.0) {
            for (Eigen::Index tau = tau_min; tau <= tau_max; ++tau) {
                const double e_tau = csum[tau + win] - csum[tau];
                if (e_tau <= 0.0) continue;
                r[tau - tau_min] =
                    frame.head(win).dot(frame.segment(tau, win)) / std::sqrt(e0 * e_tau);
            }
        }

        Eigen::Index best = 0;
        const double r_max = r.maxCoeff(&best);
        if (r_max < cfg.voicing_threshold) {
            track.push_back(0.0);
            continue;
        }
        // Among near-best local maxima prefer the shortest lag; this is the
        // octave guard for signals whose r also peaks at period multiples.
        for (Eigen::Index i = 0; i < n_lags; ++i) {
            const bool local_max = (i == 0 || r[i] >= r[i - 1]) &&
                                   (i == n_lags - 1 || r[i] >= r[i + 1]);
            if (local_max && r[i] >= 0.98 * r_max) {
                best = i;
                break;
            }
        }
        double lag = static_cast<double>(best + tau_min);
        if (best > 0 && best < n_lags - 1) {
            const double denom = r[best - 1] - 2.0 * r[best] + r[best + 1];
            if (denom < 0.0) {
                const double delta = 0.5 * (r[best - 1] - r[best + 1]) / denom;
                lag += std::clamp(delta, -0.5, 0.5);
            }
        }
        track.push_back(std::clamp(fs / lag, cfg.f_min_hz, cfg.f_max_hz));
    }

    if (track.empty()) throw Error(kStage, "waveform shorter than one frame");

    F0Contour c;
    c.values_hz = Eigen::Map<const Eigen::VectorXd>(track.data(), track.size());
    c.hop_s = cfg.hop_s;
    c.start_s = cfg.frame_s / 2.0;
    if ((c.values_hz.array() > 0.0).count() == 0) throw Error(kStage, "all frames unvoiced");
    median_filter_voiced(c.values_hz);
    return c;
}

Eigen::VectorXd expand_to_radians(const F0Contour& c, int sample_rate,
                                  Eigen::Index n_samples) {
    const Eigen::Index m = c.values_hz.size();
    if (m == 0) throw Error(kStage, "empty contour");
    if (n_samples <= 0) throw Error(kStage, "empty sample range");

    // Bridge short unvoiced gaps; hold the nearest voiced value at the edges.
    Eigen::VectorXd v = c.values_hz;
    Eigen::Index i = 0;
    while (i < m) {
        if (v[i] > 0.0) {
            ++i;
            continue;
        }
        Eigen::Index j = i;
        while (j < m && v[j] <= 0.0) ++j;
        const Eigen::Index gap = j - i;
        if (gap > 2) throw Error(kStage, "unvoiced gap longer than 2 frames");
        if (i == 0 && j == m) throw Error(kStage, "all frames unvoiced");
        if (i == 0) {
            v.head(gap).setConstant(v[j]);
        } else if (j == m) {
            v.tail(gap).setConstant(v[i - 1]);
        } else {
            for (Eigen::Index k = i; k < j; ++k) {
                const double t = static_cast<double>(k - (i - 1)) / static_cast<double>(j - (i - 1));
                v[k] = v[i - 1] + t * (v[j] - v[i - 1]);
            }
        }
        i = j;
    }

    const double fs = sample_rate;
    Eigen::VectorXd omega(n_samples);
    for (Eigen::Index s = 0; s < n_samples; ++s) {
        const double p =
            std::clamp((static_cast<double>(s) / fs - c.start_s) / c.hop_s, 0.0,
                       static_cast<double>(m - 1));
        const Eigen::Index lo = static_cast<Eigen::Index>(std::floor(p));
        const Eigen::Index hi = std::min(lo + 1, m - 1);
        const double frac = p - static_cast<double>(lo);
        const double f = v[lo] + frac * (v[hi] - v[lo]);
        omega[s] = 2.0 * std::numbers::pi * f / fs;
    }
    return omega;
}

}  // namespace vpa
