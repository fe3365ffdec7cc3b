#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "calrisk/metrics.hpp"
#include "calrisk/normal.hpp"
#include "calrisk/rng.hpp"
#include "oracles.hpp"

using namespace calrisk;

namespace {

PredictionRecord rec(int true_label, int pred_label, double conf) {
    PredictionRecord r;
    r.true_label = true_label;
    r.pred_label = pred_label;
    r.conf = conf;
    return r;
}

EvaluationSet make_set(std::vector<PredictionRecord> rows, int k = 2,
                       double eps = 1e-8) {
    return clip_confidences(std::move(rows), k, eps);
}

} // namespace

TEST_CASE("clip_confidences clamps boundaries and preserves interior") {
    auto set = make_set({rec(0, 0, 1.0), rec(0, 0, 0.5), rec(0, 1, 0.0)});
    CHECK(set.record(0).conf == 1.0 - 1e-8);
    CHECK(set.record(1).conf == 0.5);
    CHECK(set.record(2).conf == 1e-8);
}

TEST_CASE("clip_confidences keeps CSR finite on a 0/1 confidence pair") {
    // one wrong prediction at conf 0, one correct at conf 1
    auto set = make_set({rec(0, 1, 0.0), rec(1, 1, 1.0)});
    const double v = csr(set);
    CHECK(std::isfinite(v));
    CHECK(v == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(std::isfinite(sigma_csr(set)));
}

TEST_CASE("clip_confidences rejects bad input") {
    CHECK_THROWS_AS(make_set({}), Error);
    CHECK_THROWS_WITH_AS(make_set({rec(2, 0, 0.5)}), doctest::Contains("label"), Error);
    CHECK_THROWS_AS(make_set({rec(0, 0, 1.5)}), Error);
    CHECK_THROWS_AS(make_set({rec(0, 0, -0.1)}), Error);
    CHECK_THROWS_AS(make_set({rec(0, 0, 0.5)}, 2, 0.0), Error);
    CHECK_THROWS_AS(make_set({rec(0, 0, 0.5)}, 2, 0.5), Error);
    try {
        make_set({rec(0, 0, 0.5)}, 2, 0.7);
        FAIL("expected InvalidEpsilon");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidEpsilon);
    }
}

TEST_CASE("clip_confidences infers the class count") {
    auto set = clip_confidences({rec(0, 2, 0.5), rec(1, 0, 0.5)}, 1e-8);
    CHECK(set.num_classes() == 3);
}

TEST_CASE("csr is zero without errors and matches the hand formula") {
    CHECK(csr(make_set({rec(0, 0, 0.9), rec(1, 1, 0.2)})) == 0.0);
    // one incorrect at conf 0.5 out of two records
    CHECK(csr(make_set({rec(0, 1, 0.5), rec(1, 1, 0.3)})) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sigma_csr sums the odds of every record") {
    std::vector<PredictionRecord> rows(100, rec(0, 0, 0.5));
    CHECK(sigma_csr(make_set(std::move(rows))) == doctest::Approx(0.1).epsilon(1e-12));

    auto low = make_set({rec(0, 0, 0.0), rec(0, 0, 0.0)});
    CHECK(sigma_csr(low) < 1e-4);

    auto four = make_set({rec(0, 0, 0.2), rec(0, 1, 0.5), rec(1, 1, 0.8), rec(1, 0, 0.9)});
    const double expected =
        std::sqrt((0.2 / 0.8 + 0.5 / 0.5 + 0.8 / 0.2 + 0.9 / 0.1) / 16.0);
    CHECK(sigma_csr(four) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("p_risk matches the normal upper tail") {
    const auto at_null = p_risk(1.0, 0.3);
    CHECK(at_null.z == 0.0);
    CHECK(at_null.p == 0.5);

    const auto one_sigma = p_risk(1.3, 0.3);
    CHECK(one_sigma.z == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(one_sigma.p == doctest::Approx(0.8413447460685429).epsilon(1e-12));

    const auto three_sigma = p_risk(1.9, 0.3);
    CHECK(three_sigma.z == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(three_sigma.p == doctest::Approx(0.9986501019683699).epsilon(1e-12));

    CHECK_THROWS_AS(p_risk(1.0, 0.0), Error);
    CHECK_THROWS_AS(p_risk(1.0, -1.0), Error);
}

TEST_CASE("normal_cdf agrees with the quadrature oracle to 1e-13") {
    for (double z : {-8.0, -3.0, -1.0, -0.5, -0.1, 0.0, 0.1, 0.5, 1.0, 2.0, 3.0, 5.0, 8.0}) {
        CHECK(std::abs(normal_cdf(z) - oracles::normal_cdf_oracle(z)) <= 1e-13);
    }
}

TEST_CASE("p_risk is monotone in csr for fixed sigma") {
    double prev = -1.0;
    for (double c = 0.0; c <= 3.0; c += 0.05) {
        const double p = p_risk(c, 0.25).p;
        CHECK(p > prev);
        prev = p;
    }
}

TEST_CASE("cwa equals accuracy under flat confidence") {
    auto set = make_set({rec(0, 0, 0.3), rec(0, 1, 0.3), rec(1, 1, 0.3), rec(0, 0, 0.3)});
    CHECK(cwa(set) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("cwa approaches one on an oracle profile") {
    std::vector<PredictionRecord> rows;
    for (int i = 0; i < 20; ++i) {
        rows.push_back(rec(i % 2, i % 2, 1.0));           // correct, conf -> 1-eps
        rows.push_back(rec(i % 2, 1 - (i % 2), 0.0));     // wrong, conf -> eps
    }
    CHECK(cwa(make_set(std::move(rows))) > 1.0 - 1e-6);
}

TEST_CASE("cwa hand example and covariance form") {
    auto set = make_set({rec(0, 0, 0.9), rec(0, 1, 0.1), rec(1, 1, 0.5)});
    CHECK(cwa(set) == doctest::Approx(1.4 / 1.5).epsilon(1e-12));
    CHECK(cwa_covariance_form(set) == doctest::Approx(cwa(set)).epsilon(1e-12));
}

TEST_CASE("cwa mass-ratio and covariance forms agree on random sets") {
    SplitMix64 rng(2024);
    for (int t = 0; t < 300; ++t) {
        auto set = oracles::random_set(rng);
        CHECK(std::abs(cwa(set) - cwa_covariance_form(set)) <= 1e-12);
    }
}

TEST_CASE("gain closes the accuracy gap") {
    CHECK(*gain(0.7, 0.7) == 0.0);
    CHECK(*gain(0.5, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(!gain(1.0, 1.0).has_value());
    CHECK(*gain(0.6, 0.8) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("ece is zero when every bin is balanced") {
    // two bins; each has conf == empirical accuracy
    auto set = make_set({rec(0, 0, 0.25), rec(0, 1, 0.25), rec(0, 1, 0.25), rec(0, 1, 0.25),
                         rec(0, 0, 0.75), rec(0, 0, 0.75), rec(0, 0, 0.75), rec(0, 1, 0.75)});
    CHECK(ece(set, 2) == 0.0);
}

TEST_CASE("ece one-bin hand value") {
    auto set = make_set({rec(0, 0, 0.7)});
    CHECK(ece(set, 1) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("ece puts interior boundary values in the higher bin") {
    auto set = make_set({rec(0, 0, 0.5), rec(0, 1, 0.75)});
    // both land in the top of two bins: |acc - conf| = |0.5 - 0.625|
    CHECK(ece(set, 2) == doctest::Approx(0.125).epsilon(1e-12));
    CHECK_THROWS_AS(ece(set, 0), Error);
}

TEST_CASE("ece bin and indicator forms agree on random sets") {
    SplitMix64 rng(77);
    for (int t = 0; t < 300; ++t) {
        auto set = oracles::random_set(rng);
        for (int bins : {1, 2, 15}) {
            CHECK(std::abs(ece(set, bins) - ece_indicator_form(set, bins)) <= 1e-12);
        }
    }
}

TEST_CASE("brier hand values") {
    std::vector<PredictionRecord> oracle_rows;
    for (int i = 0; i < 10; ++i) {
        oracle_rows.push_back(rec(0, 0, 1.0));
        oracle_rows.push_back(rec(0, 1, 0.0));
    }
    CHECK(brier(make_set(std::move(oracle_rows))) < 1e-12);

    std::vector<PredictionRecord> flat(8, rec(0, 0, 0.5));
    flat[0] = rec(0, 1, 0.5);
    CHECK(brier(make_set(std::move(flat))) == doctest::Approx(0.25).epsilon(1e-12));

    auto two = make_set({rec(0, 0, 0.8), rec(0, 1, 0.6)});
    CHECK(brier(two) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("jensen bound: equality on a single error, inequality always") {
    auto two = make_set({rec(0, 1, 0.5), rec(1, 1, 0.3)});
    const auto bound = jensen_lower_bound(two);
    REQUIRE(bound.has_value());
    CHECK(*bound == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(*bound <= csr(two) + 1e-12);

    CHECK(!jensen_lower_bound(make_set({rec(0, 0, 0.4)})).has_value());

    SplitMix64 rng(555);
    oracles::RandomSetConfig cfg;
    cfg.force_error = true;
    for (int t = 0; t < 1000; ++t) {
        auto set = oracles::random_set(rng, cfg);
        const auto b = jensen_lower_bound(set);
        REQUIRE(b.has_value());
        CHECK(*b <= csr(set) * (1.0 + 1e-12) + 1e-12);
    }
}

TEST_CASE("adversarial profile beats both bounds") {
    auto set = adversarial_profile(100, 1000.0, 15);
    CHECK(ece(set, 15) < 0.01);
    CHECK(csr(set) > 1000.0);

    auto minimal = adversarial_profile(2, 1.0, 15);
    CHECK(ece(minimal, 15) < 0.5);
    CHECK(csr(minimal) > 1.0);

    auto mid = adversarial_profile(10, 50.0, 15);
    CHECK(ece(mid, 15) < 0.1);
    CHECK(csr(mid) > 50.0);

    // vacuous lambda still yields a valid profile
    auto easy = adversarial_profile(100, 1e-6, 15);
    CHECK(ece(easy, 15) < 0.01);
    CHECK(csr(easy) > 1e-6);
}

TEST_CASE("adversarial profile holds over an (n, lambda) grid") {
    for (int n : {2, 5, 10, 100, 500}) {
        for (double lambda : {0.5, 1.0, 10.0, 1000.0}) {
            auto set = adversarial_profile(n, lambda, 15);
            CHECK(ece(set, 15) < 1.0 / n);
            CHECK(csr(set) > lambda);
        }
    }
}

TEST_CASE("adversarial profile reports the clipping ceiling") {
    try {
        adversarial_profile(100, 1e9, 15);
        FAIL("expected ClippingConflict");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ClippingConflict);
        CHECK(std::string(e.what()).find("max achievable") != std::string::npos);
    }
}

TEST_CASE("risk_report composes the member metrics") {
    // all-correct oracle set: full confidence mass on correct predictions
    std::vector<PredictionRecord> rows;
    for (int i = 0; i < 100; ++i) rows.push_back(rec(i % 2, i % 2, 1.0));
    const auto oracle = risk_report(make_set(std::move(rows)), 15);
    CHECK(oracle.cwa == 1.0);
    CHECK(oracle.csr < 1e-6);
    CHECK(oracle.p_risk == 0.0); // z < 0: no overconfidence risk
    CHECK(oracle.z < 0.0);
    CHECK(!oracle.gain.has_value()); // acc == cwa == 1

    // flat conf == empirical accuracy: calibrated yet uninformative
    std::vector<PredictionRecord> flat;
    for (int i = 0; i < 4; ++i) flat.push_back(rec(0, i == 0 ? 1 : 0, 0.75));
    const auto uninformative = risk_report(make_set(std::move(flat)), 15);
    CHECK(uninformative.ece == 0.0);
    CHECK(uninformative.cwa == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(*uninformative.gain == doctest::Approx(0.0).epsilon(1e-12));

    // no-errors set at partial confidence: flags rather than failures
    const auto clean = risk_report(make_set({rec(0, 0, 0.5), rec(1, 1, 0.5)}), 15);
    CHECK(clean.csr == 0.0);
    CHECK(!clean.mean_conf_wrong.has_value());
    CHECK(!clean.jensen_lower_bound.has_value());
    CHECK(!clean.gain.has_value()); // cwa == 1 on an error-free set
    CHECK(clean.p_risk == 0.0);

    // overconfident set reports the upper tail
    std::vector<PredictionRecord> risky;
    for (int i = 0; i < 20; ++i) risky.push_back(rec(0, i < 6 ? 1 : 0, 0.9));
    const auto hot = risk_report(make_set(std::move(risky)), 15);
    CHECK(hot.z > 0.0);
    CHECK(hot.p_risk == normal_cdf(hot.z));
}

TEST_CASE("metrics are invariant under record permutation") {
    SplitMix64 rng(31337);
    oracles::RandomSetConfig cfg;
    cfg.min_n = 5;
    for (int t = 0; t < 50; ++t) {
        auto set = oracles::random_set(rng, cfg);
        auto rows = set.records();
        for (std::size_t i = rows.size(); i > 1; --i) {
            std::swap(rows[i - 1], rows[rng.next_u64() % i]);
        }
        auto shuffled = clip_confidences(rows, set.num_classes(), set.epsilon());
        CHECK(csr(set) == csr(shuffled));
        CHECK(sigma_csr(set) == sigma_csr(shuffled));
        CHECK(cwa(set) == cwa(shuffled));
        CHECK(ece(set, 15) == ece(shuffled, 15));
        CHECK(brier(set) == brier(shuffled));
    }
}
