#pragma once

#include "vpa/features.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <vector>

namespace vpa {

/// Fisher discriminant: f(x) = sign(<w, x> + b), positive class ALS.
struct LdaModel {
    Eigen::VectorXd w;
    double b = 0.0;
};

LdaModel lda_train(const Eigen::MatrixXd& X, const Eigen::VectorXi& y);
int lda_predict(const LdaModel& m, const Eigen::VectorXd& x);

double mahalanobis(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                   const Eigen::MatrixXd& sigma_inv);

/// K nearest from each class, reciprocal-distance vote under the
/// Mahalanobis metric of the pooled training covariance.
struct KnnModel {
    Eigen::MatrixXd X;
    Eigen::VectorXi y;
    Eigen::MatrixXd sigma_inv;
    int k = 3;
};

KnnModel knn_train(const Eigen::MatrixXd& X, const Eigen::VectorXi& y, int k = 3);
int knn_predict(const KnnModel& m, const Eigen::VectorXd& x);

struct Confusion {
    long tp = 0, tn = 0, fp = 0, fn = 0;
};

/// Rates in percent; a rate whose denominator is zero stays unset.
struct ConfusionMetrics {
    double acc = 0.0;
    std::optional<double> sens, spec, r_avg;
};

ConfusionMetrics confusion_metrics(long tp, long tn, long fp, long fn);

enum class ModelKind { Lda, Knn };

struct CvConfig {
    int folds = 7;
    int repetitions = 40;
    std::uint64_t seed = 0;
    bool stratified = true;
    int knn_k = 3;
};

/// Mean and sample SD over repetitions, in percent. The averaged recall is
/// computed from the mean sensitivity and specificity. Repetitions with an
/// undefined rate are excluded from that rate's mean, with a count kept.
struct EvalReport {
    std::vector<Confusion> per_repetition;
    double acc_mean = 0.0, acc_sd = 0.0;
    double sens_mean = 0.0, sens_sd = 0.0;
    double spec_mean = 0.0, spec_sd = 0.0;
    double r_avg = 0.0;
    int undefined_sens = 0, undefined_spec = 0;
};

EvalReport cross_validate(const Dataset& d, ModelKind model,
                          const std::vector<int>& feature_subset, const CvConfig& cfg);

struct SubsetResult {
    std::uint32_t mask = 0;
    std::vector<int> features;
    EvalReport report;
};

/// All 2^D - 1 subsets, ranked by averaged recall, then accuracy, then
/// smaller size, then mask order.
std::vector<SubsetResult> subset_search(const Dataset& d, ModelKind model,
                                        const CvConfig& cfg);

}  // namespace vpa
