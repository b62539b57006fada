#pragma once

#include "vpa/periods.hpp"
#include "vpa/perturbation.hpp"
#include "vpa/pitch.hpp"
#include "vpa/signal.hpp"
#include "vpa/vibrato.hpp"

#include <Eigen/Core>

#include <array>
#include <string>
#include <vector>

namespace vpa {

inline constexpr int kFeatureCount = 8;
inline constexpr std::array<const char*, kFeatureCount> kFeatureNames = {
    "J1", "J3", "J5", "S1", "S3", "S5", "S11", "PVI"};

enum class Label { HC, ALS };
enum class Sex { M, F };

struct FeatureVector {
    std::string id;
    Label label = Label::HC;
    double age = 0.0;
    Sex sex = Sex::M;
    Eigen::VectorXd features;  // [J1 J3 J5 S1 S3 S5 S11 PVI]
};

struct Dataset {
    std::vector<FeatureVector> rows;
    std::string provenance = "raw";
};

struct ExtractConfig {
    F0Config f0;
    SegmentationConfig seg;
    PviConfig pvi;
    RapVariant rap = RapVariant::AsPrinted;
};

/// Full single-recording pipeline: f0 contour, phase-constrained
/// segmentation, jitter/shimmer, PVI. Returns the 8 feature values.
Eigen::VectorXd extract_features(const Waveform& w, const ExtractConfig& cfg = {});

/// Remove the age trend fitted on the healthy group from every sample,
/// feature by feature.
Dataset age_correct(const Dataset& d);

void write_csv(const Dataset& d, const std::string& path);
Dataset read_csv(const std::string& path);

struct GroupSummary {
    int n = 0;
    double mean, sd, median, q1, q3, min, max;
    double bandwidth;
    Eigen::VectorXd kde_grid, kde_density;
};

struct GroupStats {
    GroupSummary hc, als;
};

/// Per-label summary of one feature: moments, quartiles, and a Gaussian
/// kernel density on a 200-point grid shared between the groups.
GroupStats group_stats(const Dataset& d, int feature_index);

const char* to_string(Label l);
const char* to_string(Sex s);

}  // namespace vpa
