#include "vpa/ml.hpp"

#include "vpa/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace vpa {

namespace {

constexpr const char* kStage = "ml";

Eigen::MatrixXd ridge_if_singular(Eigen::MatrixXd m) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    if (!lu.isInvertible()) {
        const double trace = m.trace();
        const double lambda =
            trace > 0.0 ? 1e-6 * trace / static_cast<double>(m.rows()) : 1e-6;
        m.diagonal().array() += lambda;
    }
    return m;
}

struct ClassSplit {
    std::vector<Eigen::Index> pos, neg;
};

ClassSplit split_classes(const Eigen::VectorXi& y) {
    ClassSplit s;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y[i] == 1)
            s.pos.push_back(i);
        else if (y[i] == -1)
            s.neg.push_back(i);
        else
            throw Error(kStage, "labels must be +1 or -1");
    }
    return s;
}

Eigen::VectorXd class_mean(const Eigen::MatrixXd& X, const std::vector<Eigen::Index>& rows) {
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(X.cols());
    for (Eigen::Index r : rows) mu += X.row(r).transpose();
    return mu / static_cast<double>(rows.size());
}

double safe_rate(long num, long den) { return 100.0 * static_cast<double>(num) / den; }

struct Running {
    double sum = 0.0, sumsq = 0.0;
    int n = 0;
    void add(double v) {
        sum += v;
        sumsq += v * v;
        ++n;
    }
    double mean() const { return n > 0 ? sum / n : 0.0; }
    double sd() const {
        if (n < 2) return 0.0;
        const double m = mean();
        return std::sqrt(std::max(0.0, (sumsq - n * m * m) / (n - 1)));
    }
};

// Fold labels for one repetition. Stratified dealing walks the classes in a
// fixed order with one global counter, which keeps fold sizes within one
// sample of each other and the class ratio within one sample per fold.
std::vector<int> assign_folds(const Eigen::VectorXi& y, int k, bool stratified,
                              std::mt19937_64& rng) {
    const Eigen::Index n = y.size();
    std::vector<int> fold(n);
    if (stratified) {
        ClassSplit s = split_classes(y);
        int g = 0;
        for (auto* group : {&s.neg, &s.pos}) {
            std::shuffle(group->begin(), group->end(), rng);
            for (Eigen::Index idx : *group) fold[idx] = g++ % k;
        }
    } else {
        std::vector<Eigen::Index> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        for (Eigen::Index i = 0; i < n; ++i) fold[order[i]] = static_cast<int>(i) % k;
    }
    return fold;
}

}  // namespace

LdaModel lda_train(const Eigen::MatrixXd& X, const Eigen::VectorXi& y) {
    if (X.rows() != y.size()) throw Error(kStage, "sample/label count mismatch");
    if (X.rows() < 2) throw Error(kStage, "need at least 2 samples");
    const ClassSplit s = split_classes(y);
    if (s.pos.empty() || s.neg.empty()) throw Error(kStage, "both classes must be present");

    const Eigen::VectorXd mu_pos = class_mean(X, s.pos);
    const Eigen::VectorXd mu_neg = class_mean(X, s.neg);
    Eigen::MatrixXd sw = Eigen::MatrixXd::Zero(X.cols(), X.cols());
    for (const auto* rows : {&s.pos, &s.neg}) {
        const Eigen::VectorXd& mu = rows == &s.pos ? mu_pos : mu_neg;
        for (Eigen::Index r : *rows) {
            const Eigen::VectorXd d = X.row(r).transpose() - mu;
            sw.noalias() += d * d.transpose();
        }
    }
    sw = ridge_if_singular(std::move(sw));

    LdaModel m;
    m.w = sw.ldlt().solve(mu_pos - mu_neg);
    m.b = -m.w.dot(0.5 * (mu_pos + mu_neg));
    return m;
}

int lda_predict(const LdaModel& m, const Eigen::VectorXd& x) {
    if (x.size() != m.w.size()) throw Error(kStage, "feature dimension mismatch");
    return m.w.dot(x) + m.b >= 0.0 ? 1 : -1;
}

double mahalanobis(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                   const Eigen::MatrixXd& sigma_inv) {
    if (x.size() != y.size() || sigma_inv.rows() != x.size() ||
        sigma_inv.cols() != x.size())
        throw Error(kStage, "dimension mismatch");
    const Eigen::VectorXd d = x - y;
    const double q = d.dot(sigma_inv * d);
    if (q < 0.0) {
        if (q < -1e-9 * (1.0 + d.squaredNorm())) throw Error(kStage, "matrix not positive definite");
        return 0.0;
    }
    return std::sqrt(q);
}

KnnModel knn_train(const Eigen::MatrixXd& X, const Eigen::VectorXi& y, int k) {
    if (X.rows() != y.size()) throw Error(kStage, "sample/label count mismatch");
    if (k < 1) throw Error(kStage, "K must be at least 1");
    if (X.rows() < 2) throw Error(kStage, "need at least 2 samples");
    const ClassSplit s = split_classes(y);
    if (static_cast<int>(s.pos.size()) < k || static_cast<int>(s.neg.size()) < k)
        throw Error(kStage, "each class needs at least K samples");

    const Eigen::RowVectorXd mean = X.colwise().mean();
    const Eigen::MatrixXd centered = X.rowwise() - mean;
    Eigen::MatrixXd cov =
        centered.transpose() * centered / static_cast<double>(X.rows() - 1);
    cov = ridge_if_singular(std::move(cov));

    KnnModel m;
    m.X = X;
    m.y = y;
    m.k = k;
    const Eigen::MatrixXd inv =
        cov.ldlt().solve(Eigen::MatrixXd::Identity(X.cols(), X.cols()));
    m.sigma_inv = 0.5 * (inv + inv.transpose());
    return m;
}

int knn_predict(const KnnModel& m, const Eigen::VectorXd& x) {
    if (x.size() != m.X.cols()) throw Error(kStage, "feature dimension mismatch");
    std::vector<double> d_pos, d_neg;
    for (Eigen::Index i = 0; i < m.X.rows(); ++i) {
        const double d = mahalanobis(x, m.X.row(i).transpose(), m.sigma_inv);
        if (d == 0.0) return m.y[i];  // infinite weight
        (m.y[i] == 1 ? d_pos : d_neg).push_back(d);
    }
    auto top = [&](std::vector<double>& d) {
        std::partial_sort(d.begin(), d.begin() + m.k, d.end());
        double vote = 0.0;
        for (int i = 0; i < m.k; ++i) vote += 1.0 / d[i];
        return vote;
    };
    return top(d_pos) - top(d_neg) >= 0.0 ? 1 : -1;
}

ConfusionMetrics confusion_metrics(long tp, long tn, long fp, long fn) {
    if (tp < 0 || tn < 0 || fp < 0 || fn < 0) throw Error(kStage, "negative confusion count");
    const long total = tp + tn + fp + fn;
    if (total == 0) throw Error(kStage, "empty confusion matrix");
    ConfusionMetrics m;
    m.acc = safe_rate(tp + tn, total);
    if (tp + fn > 0) m.sens = safe_rate(tp, tp + fn);
    if (tn + fp > 0) m.spec = safe_rate(tn, tn + fp);
    if (m.sens && m.spec) m.r_avg = 0.5 * (*m.sens + *m.spec);
    return m;
}

EvalReport cross_validate(const Dataset& d, ModelKind model,
                          const std::vector<int>& feature_subset, const CvConfig& cfg) {
    if (feature_subset.empty()) throw Error(kStage, "feature subset is empty");
    const Eigen::Index n = static_cast<Eigen::Index>(d.rows.size());
    if (cfg.folds < 2 || static_cast<Eigen::Index>(cfg.folds) > n)
        throw Error(kStage, "fold count must lie in [2, n]");
    if (cfg.repetitions < 1) throw Error(kStage, "need at least one repetition");

    Eigen::MatrixXd X(n, static_cast<Eigen::Index>(feature_subset.size()));
    Eigen::VectorXi y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const FeatureVector& r = d.rows[i];
        for (size_t j = 0; j < feature_subset.size(); ++j) {
            const int f = feature_subset[j];
            if (f < 0 || f >= static_cast<int>(r.features.size()))
                throw Error(kStage, "feature index out of range");
            X(i, static_cast<Eigen::Index>(j)) = r.features[f];
        }
        y[i] = r.label == Label::ALS ? 1 : -1;
    }
    if (cfg.stratified) {
        const ClassSplit s = split_classes(y);
        if (static_cast<int>(s.pos.size()) < cfg.folds ||
            static_cast<int>(s.neg.size()) < cfg.folds)
            throw Error(kStage, "class too small for stratified folds");
    }

    EvalReport rep;
    Running acc, sens, spec;
    for (int r = 0; r < cfg.repetitions; ++r) {
        std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(r));
        const std::vector<int> fold = assign_folds(y, cfg.folds, cfg.stratified, rng);

        Confusion c;
        for (int f = 0; f < cfg.folds; ++f) {
            std::vector<Eigen::Index> train, test;
            for (Eigen::Index i = 0; i < n; ++i) (fold[i] == f ? test : train).push_back(i);
            Eigen::MatrixXd Xt(static_cast<Eigen::Index>(train.size()), X.cols());
            Eigen::VectorXi yt(static_cast<Eigen::Index>(train.size()));
            for (size_t i = 0; i < train.size(); ++i) {
                Xt.row(static_cast<Eigen::Index>(i)) = X.row(train[i]);
                yt[static_cast<Eigen::Index>(i)] = y[train[i]];
            }
            LdaModel lda;
            KnnModel knn;
            if (model == ModelKind::Lda)
                lda = lda_train(Xt, yt);
            else
                knn = knn_train(Xt, yt, cfg.knn_k);
            for (Eigen::Index i : test) {
                const Eigen::VectorXd x = X.row(i).transpose();
                const int pred =
                    model == ModelKind::Lda ? lda_predict(lda, x) : knn_predict(knn, x);
                if (y[i] == 1)
                    (pred == 1 ? c.tp : c.fn)++;
                else
                    (pred == -1 ? c.tn : c.fp)++;
            }
        }
        rep.per_repetition.push_back(c);
        const ConfusionMetrics m = confusion_metrics(c.tp, c.tn, c.fp, c.fn);
        acc.add(m.acc);
        if (m.sens)
            sens.add(*m.sens);
        else
            ++rep.undefined_sens;
        if (m.spec)
            spec.add(*m.spec);
        else
            ++rep.undefined_spec;
    }
    rep.acc_mean = acc.mean();
    rep.acc_sd = acc.sd();
    rep.sens_mean = sens.mean();
    rep.sens_sd = sens.sd();
    rep.spec_mean = spec.mean();
    rep.spec_sd = spec.sd();
    rep.r_avg = 0.5 * (rep.sens_mean + rep.spec_mean);
    return rep;
}

std::vector<SubsetResult> subset_search(const Dataset& d, ModelKind model,
                                        const CvConfig& cfg) {
    if (d.rows.empty()) throw Error(kStage, "empty dataset");
    const int dim = static_cast<int>(d.rows.front().features.size());
    if (dim > 20) throw Error(kStage, "too many features for exhaustive search");

    std::vector<SubsetResult> results;
    results.reserve((1u << dim) - 1);
    for (std::uint32_t mask = 1; mask < (1u << dim); ++mask) {
        SubsetResult r;
        r.mask = mask;
        for (int f = 0; f < dim; ++f)
            if (mask & (1u << f)) r.features.push_back(f);
        r.report = cross_validate(d, model, r.features, cfg);
        results.push_back(std::move(r));
    }
    std::stable_sort(results.begin(), results.end(),
                     [](const SubsetResult& a, const SubsetResult& b) {
                         if (a.report.r_avg != b.report.r_avg)
                             return a.report.r_avg > b.report.r_avg;
                         if (a.report.acc_mean != b.report.acc_mean)
                             return a.report.acc_mean > b.report.acc_mean;
                         if (a.features.size() != b.features.size())
                             return a.features.size() < b.features.size();
                         return a.mask < b.mask;
                     });
    return results;
}

}  // namespace vpa
