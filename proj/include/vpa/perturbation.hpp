#pragma once

#include "vpa/error.hpp"

#include <Eigen/Core>

#include <cmath>

namespace vpa {

/// Normalization of the three-cycle relative average perturbation.
/// `AsPrinted` divides the N-3 window deviations by N-1; `Classical` uses
/// the textbook form (all N-2 interior windows, divided by N-2).
enum class RapVariant { AsPrinted, Classical };

namespace detail {

template <typename Derived>
Eigen::ArrayXd as_positive_array(const Eigen::DenseBase<Derived>& x, const char* what) {
    Eigen::ArrayXd a = x.derived().template cast<double>().array();
    if ((a <= 0.0).any()) throw Error("perturbation", std::string("non-positive ") + what);
    return a;
}

// Mean absolute deviation of each value from the mean of the odd-length
// window centred on it, over window positions [lo, hi] (inclusive,
// 0-based centre indices), scaled by `norm` and the sequence mean.
inline double windowed_quotient(const Eigen::ArrayXd& a, int half, Eigen::Index lo,
                                Eigen::Index hi, double norm) {
    const int win = 2 * half + 1;
    double sum = 0.0;
    for (Eigen::Index i = lo; i <= hi; ++i)
        sum += std::abs(a[i] - a.segment(i - half, win).mean());
    return sum * norm / a.mean() * 100.0;
}

}  // namespace detail

/// Average absolute difference between consecutive periods over the average
/// period, in percent.
template <typename Derived>
double jitter_local(const Eigen::DenseBase<Derived>& periods) {
    const Eigen::ArrayXd t = detail::as_positive_array(periods, "period");
    const Eigen::Index n = t.size();
    if (n < 2) throw Error("perturbation", "jitter_local needs at least 2 periods");
    const double mean_diff = (t.head(n - 1) - t.tail(n - 1)).abs().mean();
    return mean_diff / t.mean() * 100.0;
}

/// Relative average perturbation over three adjacent cycles, in percent.
template <typename Derived>
double jitter_rap(const Eigen::DenseBase<Derived>& periods,
                  RapVariant variant = RapVariant::AsPrinted) {
    const Eigen::ArrayXd t = detail::as_positive_array(periods, "period");
    const Eigen::Index n = t.size();
    if (n < 4) throw Error("perturbation", "jitter_rap needs at least 4 periods");
    if (variant == RapVariant::AsPrinted)
        return detail::windowed_quotient(t, 1, 1, n - 3, 1.0 / static_cast<double>(n - 1));
    return detail::windowed_quotient(t, 1, 1, n - 2, 1.0 / static_cast<double>(n - 2));
}

/// Period perturbation quotient over five consecutive cycles, in percent.
template <typename Derived>
double jitter_ppq5(const Eigen::DenseBase<Derived>& periods) {
    const Eigen::ArrayXd t = detail::as_positive_array(periods, "period");
    const Eigen::Index n = t.size();
    if (n < 5) throw Error("perturbation", "jitter_ppq5 needs at least 5 periods");
    return detail::windowed_quotient(t, 2, 2, n - 3, 1.0 / static_cast<double>(n - 4));
}

/// Average absolute difference between consecutive cycle amplitudes over the
/// average amplitude, in percent.
template <typename Derived>
double shimmer_local(const Eigen::DenseBase<Derived>& amplitudes) {
    const Eigen::ArrayXd a = detail::as_positive_array(amplitudes, "amplitude");
    const Eigen::Index n = a.size();
    if (n < 2) throw Error("perturbation", "shimmer_local needs at least 2 amplitudes");
    const double mean_diff = (a.head(n - 1) - a.tail(n - 1)).abs().mean();
    return mean_diff / a.mean() * 100.0;
}

/// Amplitude perturbation quotient with an odd window of L cycles, in percent.
template <typename Derived>
double shimmer_apq(const Eigen::DenseBase<Derived>& amplitudes, int window) {
    const Eigen::ArrayXd a = detail::as_positive_array(amplitudes, "amplitude");
    const Eigen::Index n = a.size();
    if (window < 3 || window % 2 == 0)
        throw Error("perturbation", "APQ window must be odd and >= 3");
    if (n < window) throw Error("perturbation", "APQ needs at least L amplitudes");
    const int half = (window - 1) / 2;
    return detail::windowed_quotient(a, half, half, n - 1 - half,
                                     1.0 / static_cast<double>(n - window + 1));
}

/// The full jitter/shimmer family; all values in percent.
struct PerturbationReport {
    double j_loc, j_rap, j_ppq5;
    double s_loc, s_apq3, s_apq5, s_apq11;
};

template <typename DerivedT, typename DerivedA>
PerturbationReport perturbation_report(const Eigen::DenseBase<DerivedT>& periods,
                                       const Eigen::DenseBase<DerivedA>& amplitudes,
                                       RapVariant variant = RapVariant::AsPrinted) {
    PerturbationReport r;
    r.j_loc = jitter_local(periods);
    r.j_rap = jitter_rap(periods, variant);
    r.j_ppq5 = jitter_ppq5(periods);
    r.s_loc = shimmer_local(amplitudes);
    r.s_apq3 = shimmer_apq(amplitudes, 3);
    r.s_apq5 = shimmer_apq(amplitudes, 5);
    r.s_apq11 = shimmer_apq(amplitudes, 11);
    return r;
}

}  // namespace vpa
