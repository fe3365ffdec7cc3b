#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "calrisk/metrics.hpp"
#include "calrisk/ranking.hpp"
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

PredictionRecord vrec(int true_label, int pred_label, std::vector<double> confs) {
    PredictionRecord r;
    r.true_label = true_label;
    r.pred_label = pred_label;
    r.conf = confs[static_cast<std::size_t>(pred_label)];
    r.class_confs = std::move(confs);
    return r;
}

oracles::PairwiseOracle brute(const EvaluationSet& set, int class_id) {
    const auto scores = class_scores(set, class_id);
    std::vector<bool> pos(set.size());
    std::vector<double> weights(set.size());
    for (std::size_t i = 0; i < set.size(); ++i) {
        pos[i] = set.record(i).true_label == class_id;
        weights[i] = set.record(i).conf;
    }
    return oracles::pairwise_oracle(scores, pos, weights);
}

} // namespace

TEST_CASE("binary class scores: predicted class keeps conf, other is capped") {
    auto set = clip_confidences({rec(1, 1, 0.7), rec(0, 0, 0.7), rec(1, 1, 0.3)}, 2, 1e-8);
    const auto s1 = class_scores(set, 1);
    const auto s0 = class_scores(set, 0);
    CHECK(s1[0] == 0.7);
    CHECK(s0[0] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(s0[1] == 0.7);
    CHECK(s1[1] == doctest::Approx(0.3).epsilon(1e-12));
    // sub-half confidence: both classes share the predicted-class score
    CHECK(s1[2] == 0.3);
    CHECK(s0[2] == 0.3);
}

TEST_CASE("explicit class vectors pass through; K>2 requires them") {
    auto with_vec = clip_confidences({vrec(0, 1, {0.2, 0.5, 0.3}),
                                      vrec(2, 2, {0.1, 0.2, 0.7})}, 3, 1e-8);
    CHECK(class_scores(with_vec, 0)[0] == 0.2);
    CHECK(class_scores(with_vec, 2)[1] == 0.7);

    auto bare = clip_confidences({rec(0, 1, 0.5), rec(2, 2, 0.5)}, 3, 1e-8);
    CHECK_THROWS_AS(class_scores(bare, 0), Error);
}

TEST_CASE("roc_curve: separated scores give area one, ties give one half") {
    auto separated = clip_confidences({vrec(1, 1, {0.1, 0.9}), vrec(1, 1, {0.2, 0.8}),
                                       vrec(0, 0, {0.9, 0.1}), vrec(0, 0, {0.8, 0.2})},
                                      2, 1e-8);
    CHECK(roc_curve(separated, 1).area == doctest::Approx(1.0).epsilon(1e-12));

    auto tied = clip_confidences({vrec(1, 1, {0.5, 0.5}), vrec(0, 0, {0.5, 0.5}),
                                  vrec(1, 1, {0.5, 0.5})}, 2, 1e-8);
    const auto curve = cw_roc_curve(tied, 1);
    CHECK(curve.area == 0.5);
    CHECK(curve.points.size() == 2); // one diagonal segment

    auto degenerate = clip_confidences({rec(0, 0, 0.5), rec(0, 1, 0.6)}, 2, 1e-8);
    CHECK_THROWS_AS(roc_curve(degenerate, 1), Error);
}

TEST_CASE("curves start at (0,0), end at (1,1), and integrate to area") {
    SplitMix64 rng(17);
    oracles::RandomSetConfig cfg;
    cfg.min_n = 4;
    cfg.max_n = 120;
    cfg.with_class_confs = true;
    for (int t = 0; t < 60; ++t) {
        auto set = oracles::random_set(rng, cfg);
        for (int k = 0; k < set.num_classes(); ++k) {
            for (bool weighted : {false, true}) {
                CurveSeries curve;
                try {
                    curve = weighted ? cw_roc_curve(set, k) : roc_curve(set, k);
                } catch (const Error& e) {
                    CHECK(e.code() == ErrorCode::DegenerateClass);
                    continue;
                }
                CHECK(curve.points.front().x == 0.0);
                CHECK(curve.points.front().y == 0.0);
                CHECK(curve.points.back().x == 1.0);
                CHECK(curve.points.back().y == 1.0);
                double area = 0.0;
                for (std::size_t p = 1; p < curve.points.size(); ++p) {
                    CHECK(curve.points[p].x >= curve.points[p - 1].x);
                    area += (curve.points[p].x - curve.points[p - 1].x) *
                            (curve.points[p].y + curve.points[p - 1].y) * 0.5;
                }
                CHECK(std::abs(area - curve.area) <= 1e-12);
            }
        }
    }
}

TEST_CASE("curve areas equal the brute-force pairwise oracle") {
    SplitMix64 rng(3141);
    oracles::RandomSetConfig cfg;
    cfg.min_n = 2;
    cfg.max_n = 60;
    cfg.with_class_confs = true;
    for (int t = 0; t < 60; ++t) {
        auto set = oracles::random_set(rng, cfg);
        for (int k = 0; k < set.num_classes(); ++k) {
            const auto oracle = brute(set, k);
            if (oracle.degenerate) continue;
            CHECK(std::abs(roc_curve(set, k).area - oracle.auc) <= 1e-12);
            CHECK(std::abs(cw_roc_curve(set, k).area - oracle.cw_auc) <= 1e-12);
        }
    }
}

TEST_CASE("equal predicted-class confidence makes cwROC identical to ROC") {
    SplitMix64 rng(555);
    std::vector<PredictionRecord> rows;
    for (int i = 0; i < 40; ++i) {
        // constant conf, varying per-class score
        const int truth = static_cast<int>(rng.next_u64() % 2);
        const int pred = static_cast<int>(rng.next_u64() % 2);
        std::vector<double> confs = {rng.next_double(), rng.next_double()};
        confs[static_cast<std::size_t>(pred)] = 0.6;
        rows.push_back(vrec(truth, pred, std::move(confs)));
    }
    auto set = clip_confidences(std::move(rows), 2, 1e-8);
    for (int k = 0; k < 2; ++k) {
        const auto a = roc_curve(set, k);
        const auto b = cw_roc_curve(set, k);
        REQUIRE(a.points.size() == b.points.size());
        for (std::size_t p = 0; p < a.points.size(); ++p) {
            CHECK(std::abs(a.points[p].x - b.points[p].x) <= 1e-12);
            CHECK(std::abs(a.points[p].y - b.points[p].y) <= 1e-12);
        }
        CHECK(std::abs(a.area - b.area) <= 1e-12);
    }
}

TEST_CASE("auc_gap: zero for flat weights, positive when confidence tracks ranking") {
    auto flat = clip_confidences({vrec(1, 1, {0.4, 0.6}), vrec(1, 1, {0.6, 0.4}),
                                  vrec(0, 0, {0.6, 0.4}), vrec(0, 1, {0.5, 0.6})},
                                 2, 1e-8);
    std::vector<PredictionRecord> flattened = flat.records();
    for (auto& r : flattened) {
        // one shared predicted-class confidence: every pair weight cancels
        (*r.class_confs)[r.pred_label] = 0.5;
        r.conf = 0.5;
    }
    auto flat_set = clip_confidences(std::move(flattened), 2, 1e-8);
    const auto gap = auc_gap(flat_set, 1);
    CHECK(std::abs(gap.delta) <= 1e-12);
    CHECK(std::abs(gap.cov_form) <= 1e-12);

    // high weight on the correctly ranked pair, low on the misranked one
    auto skewed = clip_confidences({vrec(1, 1, {0.1, 0.9}),   // pos, s=.9, w=.9
                                    vrec(1, 0, {0.1, 0.3}),   // pos, s=.3, w=.1
                                    vrec(0, 0, {0.9, 0.5})},  // neg, s=.5, w=.9
                                   2, 1e-8);
    const auto g = auc_gap(skewed, 1);
    CHECK(g.delta > 0.0);
    CHECK(std::abs(g.delta - g.cov_form) <= 1e-10);
    const auto oracle = brute(skewed, 1);
    CHECK(g.cw_auc == doctest::Approx(oracle.cw_auc).epsilon(1e-12));
    CHECK(g.auc == doctest::Approx(oracle.auc).epsilon(1e-12));
}

TEST_CASE("auc gap equals the covariance form on random sets") {
    SplitMix64 rng(2718);
    oracles::RandomSetConfig cfg;
    cfg.min_n = 4;
    cfg.max_n = 150;
    cfg.with_class_confs = true;
    for (int t = 0; t < 80; ++t) {
        auto set = oracles::random_set(rng, cfg);
        for (const auto& gap : all_auc_gaps(set)) {
            if (!gap) continue;
            CHECK(std::abs(gap->delta - gap->cov_form) <= 1e-10);
            // spot-check against the quadratic oracle
            const auto oracle = brute(set, gap->class_id);
            CHECK(std::abs(gap->cov_form - oracle.cov_form) <= 1e-10);
        }
    }
}

TEST_CASE("classical AUC is invariant under strictly increasing maps") {
    SplitMix64 rng(4242);
    oracles::RandomSetConfig cfg;
    cfg.min_n = 10;
    cfg.max_n = 80;
    cfg.with_class_confs = true;
    const std::function<double(double)> maps[] = {
        [](double x) { return x; },
        [](double x) { return x * x * x; },
        [](double x) { return std::sqrt(x); },
        [](double x) { return 1.0 / (1.0 + std::exp(-5.0 * (x - 0.5))); },
        [](double x) { return 0.2 + 0.6 * x; },
    };
    for (int t = 0; t < 20; ++t) {
        auto set = oracles::random_set(rng, cfg);
        for (int k = 0; k < set.num_classes(); ++k) {
            for (const auto& phi : maps) {
                try {
                    const double residual = monotone_invariance_check(set, k, phi);
                    CHECK(residual <= 1e-12);
                } catch (const Error& e) {
                    CHECK(e.code() == ErrorCode::DegenerateClass);
                }
            }
        }
    }
}

TEST_CASE("macro_average: symmetric binary classes coincide") {
    SplitMix64 rng(10);
    std::vector<PredictionRecord> rows;
    for (int i = 0; i < 30; ++i) {
        const double s1 = rng.next_double();
        const int truth = static_cast<int>(rng.next_u64() % 2);
        const int pred = s1 >= 0.5 ? 1 : 0;
        rows.push_back(vrec(truth, pred, {1.0 - s1, s1}));
    }
    auto set = clip_confidences(std::move(rows), 2, 1e-8);
    const auto gaps = all_auc_gaps(set);
    REQUIRE(gaps[0].has_value());
    REQUIRE(gaps[1].has_value());
    CHECK(std::abs(gaps[0]->auc - gaps[1]->auc) <= 1e-12);
    const auto macro = macro_average(gaps);
    CHECK(macro.auc == doctest::Approx(gaps[0]->auc).epsilon(1e-12));
    CHECK(macro.skipped_classes.empty());
}

TEST_CASE("macro_average skips degenerate classes and reports them") {
    // class 2 never appears as a true label
    auto set = clip_confidences({vrec(0, 0, {0.7, 0.2, 0.1}), vrec(1, 0, {0.6, 0.3, 0.1}),
                                 vrec(0, 1, {0.3, 0.5, 0.2}), vrec(1, 1, {0.2, 0.7, 0.1})},
                                3, 1e-8);
    const auto gaps = all_auc_gaps(set);
    CHECK(!gaps[2].has_value());
    const auto macro = macro_average(gaps);
    CHECK(macro.evaluated_classes == std::vector<int>{0, 1});
    CHECK(macro.skipped_classes == std::vector<int>{2});
    CHECK(macro.auc == doctest::Approx((gaps[0]->auc + gaps[1]->auc) / 2.0).epsilon(1e-12));

    // every class degenerate: single true label everywhere
    auto broken = clip_confidences({rec(0, 0, 0.5), rec(0, 1, 0.6)}, 2, 1e-8);
    CHECK_THROWS_AS(macro_average(all_auc_gaps(broken)), Error);
}

TEST_CASE("macro over a random three-class set matches per-class oracles") {
    SplitMix64 rng(888);
    oracles::RandomSetConfig cfg;
    cfg.min_k = 3;
    cfg.max_k = 3;
    cfg.min_n = 30;
    cfg.max_n = 30;
    cfg.with_class_confs = true;
    auto set = oracles::random_set(rng, cfg);
    const auto gaps = all_auc_gaps(set);
    double sum = 0.0;
    int defined = 0;
    for (int k = 0; k < 3; ++k) {
        const auto oracle = brute(set, k);
        if (oracle.degenerate) {
            CHECK(!gaps[static_cast<std::size_t>(k)].has_value());
            continue;
        }
        sum += oracle.auc;
        ++defined;
    }
    REQUIRE(defined > 0);
    CHECK(macro_average(gaps).auc == doctest::Approx(sum / defined).epsilon(1e-12));
}
