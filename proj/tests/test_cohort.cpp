#include "vpa/cohort.hpp"
#include "vpa/error.hpp"

#include "doctest.h"
#include "testutil.hpp"

#include <cmath>
#include <string>

namespace {

void group_moments(const vpa::Dataset& d, vpa::Label label, int f, double& mean, double& sd) {
    double s = 0.0, ss = 0.0;
    int n = 0;
    for (const auto& r : d.rows) {
        if (r.label != label) continue;
        s += r.features[f];
        ++n;
    }
    mean = s / n;
    for (const auto& r : d.rows)
        if (r.label == label) ss += std::pow(r.features[f] - mean, 2);
    sd = std::sqrt(ss / (n - 1));
}

}  // namespace

TEST_CASE("the default cohort mirrors the target study shape") {
    const vpa::Dataset d = vpa::make_cohort({}, 7);
    REQUIRE(d.rows.size() == 54);
    int hc = 0, als = 0;
    for (const auto& r : d.rows) (r.label == vpa::Label::HC ? hc : als)++;
    CHECK(hc == 39);
    CHECK(als == 15);

    // healthy block first, then patients, ids numbered within each group
    CHECK(d.rows[0].id == "HC001");
    CHECK(d.rows[38].id == "HC039");
    CHECK(d.rows[39].id == "ALS001");
    CHECK(d.rows[53].id == "ALS015");
    for (const auto& r : d.rows) {
        REQUIRE(r.features.size() == vpa::kFeatureCount);
        CHECK((r.features.array() > 0.0).all());
        CHECK(r.age >= 18.0);
    }
}

TEST_CASE("cohort ages land near the published group statistics") {
    const vpa::Dataset d = vpa::make_cohort({}, 7);
    double hs = 0.0, as = 0.0;
    int hn = 0, an = 0;
    for (const auto& r : d.rows) {
        if (r.label == vpa::Label::HC) {
            hs += r.age;
            ++hn;
        } else {
            as += r.age;
            ++an;
        }
    }
    CHECK(std::abs(hs / hn - 41.9) / 41.9 <= 0.15);
    CHECK(std::abs(as / an - 57.7) / 57.7 <= 0.15);
}

TEST_CASE("cohorts are reproducible by seed") {
    const vpa::Dataset a = vpa::make_cohort({}, 19);
    const vpa::Dataset b = vpa::make_cohort({}, 19);
    const vpa::Dataset c = vpa::make_cohort({}, 20);
    REQUIRE(a.rows.size() == b.rows.size());
    bool same = true, differs = false;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        same = same && a.rows[i].features == b.rows[i].features && a.rows[i].age == b.rows[i].age;
        differs = differs || a.rows[i].features != c.rows[i].features;
    }
    CHECK(same);
    CHECK(differs);
}

TEST_CASE("separation moves only the flagged features") {
    vpa::CohortSpec spec;
    spec.separation = 6.0;
    spec.informative_mask = 0x05;  // features 0 and 2
    const vpa::Dataset d = vpa::make_cohort(spec, 31);

    for (int f : {0, 2}) {
        double mh, sh, ma, sa;
        group_moments(d, vpa::Label::HC, f, mh, sh);
        group_moments(d, vpa::Label::ALS, f, ma, sa);
        CHECK((ma - mh) / sh > 4.0);
    }
    for (int f : {1, 3, 4, 5, 6, 7}) {
        double mh, sh, ma, sa;
        group_moments(d, vpa::Label::HC, f, mh, sh);
        group_moments(d, vpa::Label::ALS, f, ma, sa);
        CHECK(std::abs(ma - mh) / sh < 1.5);
    }
}

TEST_CASE("cohort spec guards") {
    vpa::CohortSpec spec;
    spec.n_healthy = 0;
    CHECK_THROWS_AS(vpa::make_cohort(spec, 1), vpa::Error);
    spec = {};
    spec.hc_age_sd = 0.0;
    CHECK_THROWS_AS(vpa::make_cohort(spec, 1), vpa::Error);
}
