#pragma once

#include "vpa/features.hpp"

#include <cstdint>

namespace vpa {

/// Shape of the synthetic screening cohort: class sizes and age
/// distributions mirror the clinical dataset the toolkit targets, while
/// `separation` controls how far apart the class feature means sit, in
/// units of the within-class spread.
struct CohortSpec {
    int n_healthy = 39;
    int n_als = 15;
    double hc_age_mean = 41.9, hc_age_sd = 16.3;
    double als_age_mean = 57.7, als_age_sd = 9.0;
    double separation = 0.0;
    std::uint32_t informative_mask = 0xFF;  // features carrying the separation
};

Dataset make_cohort(const CohortSpec& spec, std::uint64_t seed);

}  // namespace vpa
