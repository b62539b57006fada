#pragma once

#include "vpa/pitch.hpp"
#include "vpa/signal.hpp"

#include <Eigen/Core>

#include <vector>

namespace vpa {

/// Cycle boundaries b_0 < b_1 < ... < b_N plus derived per-cycle period
/// lengths (samples) and peak-to-peak amplitudes.
struct CycleSegmentation {
    std::vector<Eigen::Index> boundaries;
    Eigen::VectorXd periods;
    Eigen::VectorXd amplitudes;
};

struct SegmentationConfig {
    double refine_window_frac = 0.15;  // searched around each predicted boundary
    int min_cycles = 30;
};

/// Running sum of per-sample radian frequencies; strictly increasing.
Eigen::VectorXd phase_function(const Eigen::VectorXd& omega);

/// Index of the first cycle boundary: n-1 for the smallest n whose
/// cumulative phase exceeds 2*pi.
Eigen::Index first_period(const Eigen::VectorXd& phi);

/// Waveform matching with phase constraint. Boundary k starts where the
/// global phase function crosses 2*pi*k, then moves within a bounded window
/// to minimize the mean absolute error against the previous refined cycle.
/// The phase accumulator is never reset, so boundary errors cannot pile up.
CycleSegmentation segment_wm_pc(const Waveform& w, const F0Contour& c,
                                const SegmentationConfig& cfg = {});

/// Conventional waveform matching: each boundary chained off the previous
/// one by least-squares cycle matching, with no phase anchor. Kept as the
/// drift-prone baseline.
CycleSegmentation segment_wm(const Waveform& w, const F0Contour& c,
                             const SegmentationConfig& cfg = {});

/// Peak-to-peak amplitude of each cycle delimited by `boundaries`.
Eigen::VectorXd cycle_amplitudes(const Waveform& w,
                                 const std::vector<Eigen::Index>& boundaries);

/// |Phi(b_k) - 2*pi*k| for each boundary; the drift diagnostic.
Eigen::VectorXd phase_drift(const Eigen::VectorXd& phi,
                            const std::vector<Eigen::Index>& boundaries);

}  // namespace vpa
