#include "vpa/cohort.hpp"

#include "vpa/error.hpp"

#include <cstdio>
#include <random>

namespace vpa {

namespace {

constexpr const char* kStage = "cohort";

// Plausible baseline levels for [J1 J3 J5 S1 S3 S5 S11 PVI]; only relative
// geometry matters to the classifiers. Features are drawn independently so
// that the separation knob reads directly in whitened SD units.
constexpr std::array<double, kFeatureCount> kBaseMean = {0.6,  0.35, 0.4, 3.0,
                                                         1.6,  1.9,  2.6, 0.01};
constexpr std::array<double, kFeatureCount> kBaseSd = {0.15, 0.1,  0.1, 0.8,
                                                       0.4,  0.5,  0.7, 0.004};

std::string make_id(const char* prefix, int i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%s%03d", prefix, i + 1);
    return buf;
}

}  // namespace

Dataset make_cohort(const CohortSpec& spec, std::uint64_t seed) {
    if (spec.n_healthy <= 0 || spec.n_als <= 0) throw Error(kStage, "class sizes must be positive");
    if (spec.hc_age_sd <= 0.0 || spec.als_age_sd <= 0.0)
        throw Error(kStage, "age spreads must be positive");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> unit(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);

    Dataset d;
    for (int group = 0; group < 2; ++group) {
        const bool als = group == 1;
        const int count = als ? spec.n_als : spec.n_healthy;
        const double age_mean = als ? spec.als_age_mean : spec.hc_age_mean;
        const double age_sd = als ? spec.als_age_sd : spec.hc_age_sd;
        for (int i = 0; i < count; ++i) {
            FeatureVector r;
            r.id = make_id(als ? "ALS" : "HC", i);
            r.label = als ? Label::ALS : Label::HC;
            do {
                r.age = age_mean + age_sd * unit(rng);
            } while (r.age < 18.0);
            r.sex = coin(rng) ? Sex::F : Sex::M;
            r.features.resize(kFeatureCount);
            for (int f = 0; f < kFeatureCount; ++f) {
                double mu = kBaseMean[f];
                if (als && (spec.informative_mask & (1u << f)))
                    mu += spec.separation * kBaseSd[f];
                do {
                    r.features[f] = mu + kBaseSd[f] * unit(rng);
                } while (r.features[f] <= 0.0);
            }
            d.rows.push_back(std::move(r));
        }
    }
    return d;
}

}  // namespace vpa
