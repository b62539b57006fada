#include "vpa/error.hpp"
#include "vpa/perturbation.hpp"

#include "doctest.h"
#include "oracle.hpp"
#include "testutil.hpp"

#include <Eigen/Core>

#include <random>
#include <vector>

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double d : v) x[i++] = d;
    return x;
}

}  // namespace

TEST_CASE("worked jitter examples") {
    const Eigen::VectorXd t = vec({100.0, 102.0, 100.0, 102.0});
    CHECK(vpa::jitter_local(t) == doctest::Approx(2.0 / 101.0 * 100.0).epsilon(1e-12));

    // one interior window, |102 - 302/3|, divided by n-1 = 3
    const double rap_printed = (4.0 / 3.0) / 3.0 / 101.0 * 100.0;
    CHECK(vpa::jitter_rap(t) == doctest::Approx(rap_printed).epsilon(1e-12));

    // classical form averages both interior windows
    const double rap_classical = (4.0 / 3.0 + 4.0 / 3.0) / 2.0 / 101.0 * 100.0;
    CHECK(vpa::jitter_rap(t, vpa::RapVariant::Classical) ==
          doctest::Approx(rap_classical).epsilon(1e-12));

    CHECK(vpa::jitter_ppq5(vec({100.0, 101.0, 102.0, 103.0, 104.0})) == 0.0);
}

TEST_CASE("worked shimmer examples") {
    CHECK(vpa::shimmer_local(vec({1.0, 1.1})) ==
          doctest::Approx(0.1 / 1.05 * 100.0).epsilon(1e-12));
    CHECK(vpa::shimmer_apq(vec({1.0, 1.2, 1.0}), 3) == doctest::Approx(12.5).epsilon(1e-12));
}

TEST_CASE("constant sequences measure zero") {
    const Eigen::VectorXd t = Eigen::VectorXd::Constant(50, 441.0);
    CHECK(vpa::jitter_local(t) == 0.0);
    CHECK(vpa::jitter_rap(t) == 0.0);
    CHECK(vpa::jitter_ppq5(t) == 0.0);
    CHECK(vpa::shimmer_local(t) == 0.0);
    CHECK(vpa::shimmer_apq(t, 11) == 0.0);
}

TEST_CASE("measures are scale invariant") {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> g(0.0, 0.02);
    Eigen::VectorXd t(80);
    for (Eigen::Index i = 0; i < t.size(); ++i) t[i] = 100.0 * (1.0 + g(rng));

    CHECK(vpa::jitter_local(2.0 * t) == vpa::jitter_local(t));
    CHECK(vpa::shimmer_apq(0.25 * t, 5) == vpa::shimmer_apq(t, 5));
    CHECK(vpa::jitter_ppq5(1.7 * t) ==
          doctest::Approx(vpa::jitter_ppq5(t)).epsilon(1e-12));
}

TEST_CASE("length and positivity guards") {
    CHECK_THROWS_AS(vpa::jitter_local(vec({441.0})), vpa::Error);
    CHECK_THROWS_AS(vpa::jitter_rap(vec({1.0, 2.0, 3.0})), vpa::Error);
    CHECK_THROWS_AS(vpa::jitter_ppq5(vec({1.0, 2.0, 3.0, 4.0})), vpa::Error);
    CHECK_THROWS_AS(vpa::shimmer_local(vec({1.0})), vpa::Error);
    CHECK_THROWS_AS(vpa::shimmer_apq(vec({1.0, 2.0}), 3), vpa::Error);
    CHECK_THROWS_AS(vpa::shimmer_apq(Eigen::VectorXd::Constant(20, 1.0), 4), vpa::Error);
    CHECK_THROWS_AS(vpa::shimmer_apq(Eigen::VectorXd::Constant(20, 1.0), 1), vpa::Error);
    CHECK_THROWS_WITH_AS(vpa::jitter_local(vec({441.0, -1.0, 441.0})),
                         doctest::Contains("non-positive"), vpa::Error);
    CHECK_THROWS_AS(vpa::shimmer_local(vec({1.0, 0.0, 1.0})), vpa::Error);
}

TEST_CASE("library matches the literal transcription on random sequences") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> len(7, 500);
    std::uniform_real_distribution<double> base(80.0, 500.0);
    std::normal_distribution<double> g(0.0, 0.05);

    for (int trial = 0; trial < 1000; ++trial) {
        const int n = len(rng);
        const double b = base(rng);
        std::vector<double> v(static_cast<std::size_t>(n));
        for (double& x : v) x = b * (1.0 + g(rng));
        const Eigen::Map<const Eigen::VectorXd> t(v.data(), n);

        CHECK(testutil::rel_err(vpa::jitter_local(t), oracle::jitter_local(v)) < 1e-12);
        CHECK(testutil::rel_err(vpa::jitter_rap(t), oracle::jitter_rap(v)) < 1e-12);
        CHECK(testutil::rel_err(vpa::jitter_ppq5(t), oracle::jitter_ppq5(v)) < 1e-12);
        CHECK(testutil::rel_err(vpa::shimmer_local(t), oracle::shimmer_local(v)) < 1e-12);
        CHECK(testutil::rel_err(vpa::shimmer_apq(t, 3), oracle::shimmer_apq(v, 3)) < 1e-12);
        CHECK(testutil::rel_err(vpa::shimmer_apq(t, 5), oracle::shimmer_apq(v, 5)) < 1e-12);
        if (n >= 11)
            CHECK(testutil::rel_err(vpa::shimmer_apq(t, 11), oracle::shimmer_apq(v, 11)) <
                  1e-12);
    }
}

TEST_CASE("injected perturbation levels are recovered") {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> g(0.0, 1.0);
    const double pct = 1.0;
    Eigen::VectorXd t(2000), a(2000);
    for (Eigen::Index i = 0; i < t.size(); ++i) {
        t[i] = 300.0 * (1.0 + pct / 100.0 * g(rng));
        a[i] = 1.0 * (1.0 + pct / 100.0 * g(rng));
    }
    // iid Gaussian perturbation: E[|x - y|] of two iid N(0, s) is 2s/sqrt(pi)
    const double expect_local = 2.0 / std::sqrt(std::numbers::pi) * pct;
    CHECK(testutil::rel_err(vpa::jitter_local(t), expect_local) < 0.2);
    CHECK(testutil::rel_err(vpa::shimmer_local(a), expect_local) < 0.2);

    const vpa::PerturbationReport r = vpa::perturbation_report(t, a);
    CHECK(r.j_loc == vpa::jitter_local(t));
    CHECK(r.s_apq11 == vpa::shimmer_apq(a, 11));
    CHECK(r.j_rap > 0.0);
    CHECK(r.s_apq3 > 0.0);
}
