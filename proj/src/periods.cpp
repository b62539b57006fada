#include "vpa/periods.hpp"

#include "vpa/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace vpa {

namespace {

constexpr const char* kStage = "periods";
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Mean absolute (or squared) error between the cycle ending at c and the
// one ending at prev_end, compared over the last `len` samples of each.
double tail_error(const Eigen::VectorXd& x, Eigen::Index c, Eigen::Index prev_end,
                  Eigen::Index len, bool squared) {
    const auto a = x.segment(c - len, len);
    const auto b = x.segment(prev_end - len, len);
    const double err =
        squared ? (a - b).squaredNorm() : (a - b).cwiseAbs().sum();
    return err / static_cast<double>(len);
}

// Best boundary in [lo, hi] by matching against the previous cycle; ties go
// to the candidate nearest `center`, then to the smaller index.
Eigen::Index refine_boundary(const Eigen::VectorXd& x, Eigen::Index prev_end,
                             Eigen::Index prev_len, Eigen::Index lo, Eigen::Index hi,
                             Eigen::Index center, bool squared) {
    Eigen::Index best = lo;
    double best_err = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = lo; c <= hi; ++c) {
        const Eigen::Index len = std::min(c - prev_end, prev_len);
        const double err = tail_error(x, c, prev_end, len, squared);
        const auto dist = [center](Eigen::Index v) { return v > center ? v - center : center - v; };
        const bool closer = dist(c) < dist(best);
        if (err < best_err || (err == best_err && closer)) {
            best = c;
            best_err = err;
        }
    }
    return best;
}

void validate_config(const SegmentationConfig& cfg) {
    if (cfg.refine_window_frac <= 0.0 || cfg.refine_window_frac > 0.3)
        throw Error(kStage, "refine window fraction must lie in (0, 0.3]");
    if (cfg.min_cycles < 2) throw Error(kStage, "min_cycles must be at least 2");
}

struct SegmentationContext {
    Eigen::VectorXd phi;
    Eigen::Index window;
    Eigen::Index first;
};

SegmentationContext prepare(const Waveform& w, const F0Contour& c,
                            const SegmentationConfig& cfg) {
    SegmentationContext ctx;
    const Eigen::VectorXd omega = expand_to_radians(c, w.sample_rate, w.samples.size());
    ctx.phi = phase_function(omega);
    const double t_nominal = kTwoPi / omega.mean();
    ctx.window = std::max<Eigen::Index>(1, std::llround(cfg.refine_window_frac * t_nominal));
    ctx.first = first_period(ctx.phi);
    return ctx;
}

CycleSegmentation finish(const Waveform& w, std::vector<Eigen::Index> boundaries,
                         int min_cycles) {
    const Eigen::Index n_cycles = static_cast<Eigen::Index>(boundaries.size()) - 1;
    if (n_cycles < min_cycles) throw Error(kStage, "too few cycles");
    CycleSegmentation seg;
    seg.boundaries = std::move(boundaries);
    seg.periods.resize(n_cycles);
    for (Eigen::Index i = 0; i < n_cycles; ++i)
        seg.periods[i] = static_cast<double>(seg.boundaries[i + 1] - seg.boundaries[i]);
    seg.amplitudes = cycle_amplitudes(w, seg.boundaries);
    return seg;
}

}  // namespace

Eigen::VectorXd phase_function(const Eigen::VectorXd& omega) {
    if (omega.size() == 0) throw Error(kStage, "empty frequency sequence");
    if ((omega.array() <= 0.0).any())
        throw Error(kStage, "non-positive instantaneous frequency");
    // Compensated summation: the crossing comparisons sit right on 2πk for
    // round-number f0/Fs combinations, where naive accumulation error is
    // larger than the margin.
    Eigen::VectorXd phi(omega.size());
    double acc = 0.0, carry = 0.0;
    for (Eigen::Index i = 0; i < omega.size(); ++i) {
        const double y = omega[i] - carry;
        const double t = acc + y;
        carry = (t - acc) - y;
        acc = t;
        phi[i] = acc;
    }
    return phi;
}

Eigen::Index first_period(const Eigen::VectorXd& phi) {
    for (Eigen::Index i = 0; i < phi.size(); ++i)
        if (phi[i] > kTwoPi) return i;
    throw Error(kStage, "signal too short for one cycle");
}

CycleSegmentation segment_wm_pc(const Waveform& w, const F0Contour& c,
                                const SegmentationConfig& cfg) {
    validate_config(cfg);
    const SegmentationContext ctx = prepare(w, c, cfg);
    const Eigen::VectorXd& x = w.samples;
    const Eigen::Index n = x.size();

    std::vector<Eigen::Index> b{0, ctx.first};
    Eigen::Index scan = ctx.first;
    for (Eigen::Index k = 2;; ++k) {
        const double target = kTwoPi * static_cast<double>(k);
        while (scan < n && ctx.phi[scan] <= target) ++scan;
        if (scan >= n) break;  // phase never reaches the next cycle: done
        const Eigen::Index predicted = scan;
        if (predicted + ctx.window > n) break;  // tail cycle dropped
        const Eigen::Index prev = b.back();
        const Eigen::Index lo = std::max(predicted - ctx.window, prev + 2);
        const Eigen::Index hi = predicted + ctx.window;
        if (lo > hi) break;
        b.push_back(refine_boundary(x, prev, prev - b[b.size() - 2], lo, hi, predicted,
                                    /*squared=*/false));
    }
    return finish(w, std::move(b), cfg.min_cycles);
}

CycleSegmentation segment_wm(const Waveform& w, const F0Contour& c,
                             const SegmentationConfig& cfg) {
    validate_config(cfg);
    const SegmentationContext ctx = prepare(w, c, cfg);
    const Eigen::VectorXd& x = w.samples;
    const Eigen::Index n = x.size();

    std::vector<Eigen::Index> b{0, ctx.first};
    while (true) {
        const Eigen::Index prev = b.back();
        const Eigen::Index prev_len = prev - b[b.size() - 2];
        const Eigen::Index predicted = prev + prev_len;
        if (predicted + ctx.window > n) break;
        const Eigen::Index lo = std::max(predicted - ctx.window, prev + 2);
        const Eigen::Index hi = predicted + ctx.window;
        if (lo > hi) break;
        b.push_back(refine_boundary(x, prev, prev_len, lo, hi, predicted,
                                    /*squared=*/true));
    }
    return finish(w, std::move(b), cfg.min_cycles);
}

Eigen::VectorXd cycle_amplitudes(const Waveform& w,
                                 const std::vector<Eigen::Index>& boundaries) {
    if (boundaries.size() < 2) throw Error(kStage, "need at least one cycle");
    const Eigen::Index n_cycles = static_cast<Eigen::Index>(boundaries.size()) - 1;
    Eigen::VectorXd a(n_cycles);
    for (Eigen::Index i = 0; i < n_cycles; ++i) {
        const Eigen::Index lo = boundaries[i];
        const Eigen::Index len = boundaries[i + 1] - lo;
        if (len <= 0 || lo < 0 || lo + len > w.samples.size())
            throw Error(kStage, "empty or out-of-range cycle");
        const auto cycle = w.samples.segment(lo, len);
        a[i] = cycle.maxCoeff() - cycle.minCoeff();
    }
    return a;
}

Eigen::VectorXd phase_drift(const Eigen::VectorXd& phi,
                            const std::vector<Eigen::Index>& boundaries) {
    const Eigen::Index n_b = static_cast<Eigen::Index>(boundaries.size());
    if (n_b < 2) throw Error(kStage, "need at least one boundary past the origin");
    Eigen::VectorXd d(n_b - 1);
    for (Eigen::Index k = 1; k < n_b; ++k) {
        const Eigen::Index b = boundaries[k];
        const double phase_at_b = b > 0 ? phi[b - 1] : 0.0;
        d[k - 1] = std::abs(phase_at_b - kTwoPi * static_cast<double>(k));
    }
    return d;
}

}  // namespace vpa
