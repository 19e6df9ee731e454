#include <doctest.h>

#include <cmath>
#include <random>

#include "proofbeam/eval.hpp"
#include "proofbeam/synthlogic.hpp"
#include "support.hpp"

using namespace proofbeam;
using namespace proofbeam::eval;

namespace {

std::vector<ScoredExample> examples_of(std::vector<double> pos, std::vector<double> neg) {
    std::vector<ScoredExample> out;
    for (double f : pos) out.push_back({f, true, ""});
    for (double f : neg) out.push_back({f, false, ""});
    return out;
}

double mean_pos(const std::vector<ScoredExample>& ex) {
    double sum = 0.0;
    long n = 0;
    for (const auto& e : ex) {
        if (e.positive) {
            sum += e.f;
            ++n;
        }
    }
    return sum / static_cast<double>(n);
}

}  // namespace

TEST_CASE("roc_auroc on pinned cases") {
    SUBCASE("perfect separation") {
        const auto r = roc_auroc(examples_of({0.9, 0.8}, {0.1, 0.2}));
        CHECK(r.auroc == 1.0);
        CHECK(r.auroc_rank == 1.0);
    }
    SUBCASE("three of four concordant pairs") {
        const auto r = roc_auroc(examples_of({0.8, 0.4}, {0.6, 0.2}));
        CHECK(r.auroc == 0.75);
        CHECK(r.auroc_rank == 0.75);
    }
    SUBCASE("all ties score one half") {
        const auto r = roc_auroc(examples_of({0.5, 0.5}, {0.5, 0.5}));
        CHECK(r.auroc == 0.5);
        CHECK(r.auroc_rank == 0.5);
    }
    SUBCASE("degenerate labels are rejected") {
        CHECK_THROWS_AS(roc_auroc(examples_of({0.5}, {})), DegenerateLabels);
    }
}

TEST_CASE("roc curve shape invariants") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> pos, neg;
        const int np = 1 + static_cast<int>(rng() % 20), nn = 1 + static_cast<int>(rng() % 20);
        for (int i = 0; i < np; ++i) pos.push_back(static_cast<double>(rng() % 100) / 100.0);
        for (int i = 0; i < nn; ++i) neg.push_back(static_cast<double>(rng() % 100) / 100.0);
        const auto ex = examples_of(pos, neg);
        const auto r = roc_auroc(ex);

        CHECK(r.curve.front().tpr == 1.0);  // tau = 0 keeps everything
        CHECK(r.curve.front().fpr == 1.0);
        CHECK(r.curve.back().tpr == 0.0);
        CHECK(r.curve.back().fpr == 0.0);
        for (std::size_t i = 0; i + 1 < r.curve.size(); ++i) {
            CHECK(r.curve[i].tpr >= r.curve[i + 1].tpr);
            CHECK(r.curve[i].fpr >= r.curve[i + 1].fpr);
        }
        CHECK(r.auroc == doctest::Approx(r.auroc_rank).epsilon(1e-15));

        // flipping the labels mirrors the area
        auto flipped = ex;
        for (auto& e : flipped) e.positive = !e.positive;
        CHECK(roc_auroc(flipped).auroc + r.auroc == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("auacc equals its mean-score identity") {
    SUBCASE("pinned positives") {
        CHECK(auacc(examples_of({0.9, 0.6}, {}), true) == doctest::Approx(0.75).epsilon(1e-12));
    }
    SUBCASE("pinned negatives") {
        CHECK(auacc(examples_of({}, {0.1, 0.3}), false) == doctest::Approx(0.8).epsilon(1e-12));
    }
    SUBCASE("single extreme positive") {
        const double s = 1.0 - 1e-6;
        CHECK(auacc(examples_of({s}, {}), true) == doctest::Approx(s).epsilon(1e-12));
    }
    SUBCASE("identity on random score sets") {
        std::mt19937_64 rng(23);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> pos, neg;
            const int np = 1 + static_cast<int>(rng() % 30), nn = 1 + static_cast<int>(rng() % 30);
            for (int i = 0; i < np; ++i) pos.push_back(static_cast<double>(rng() % 1000) / 1000.0);
            for (int i = 0; i < nn; ++i) neg.push_back(static_cast<double>(rng() % 1000) / 1000.0);
            const auto ex = examples_of(pos, neg);
            CHECK(auacc(ex, true) == doctest::Approx(mean_pos(ex)).epsilon(1e-12));
            double neg_mean = 0.0;
            for (double v : neg) neg_mean += v;
            neg_mean /= static_cast<double>(neg.size());
            CHECK(auacc(ex, false) == doctest::Approx(1.0 - neg_mean).epsilon(1e-12));
        }
    }
    SUBCASE("missing side is rejected") {
        CHECK_THROWS_AS(auacc(examples_of({0.5}, {}), false), DegenerateLabels);
    }
}

TEST_CASE("f1 at a fixed threshold and at the dev-optimal one") {
    const auto ex = examples_of({0.9, 0.6}, {0.7, 0.2});
    CHECK(f1_score(ex, 0.65) == doctest::Approx(0.5));
    CHECK(f1_score(ex, 2.0) == 0.0);  // empty predicted-positive set

    const auto separable = examples_of({0.9, 0.8}, {0.2, 0.1});
    const auto res = f1_at_threshold(separable, separable);
    CHECK(res.f1 == 1.0);
    CHECK(res.dev_f1 == 1.0);
    CHECK(res.threshold <= 0.8);
    CHECK(res.threshold > 0.2);

    CHECK_THROWS_AS(f1_at_threshold(examples_of({0.9}, {}), separable), DegenerateLabels);
}

TEST_CASE("mcqa ranks choices by proof score") {
    const Theory theory = pbtest::make_theory({"a", "b"});
    const std::vector<double> scores = {0.1, 0.9, 0.3, 0.2};
    auto prove = [&](const Theory&, const std::string& goal) {
        return scores[static_cast<std::size_t>(goal[0] - '0')];
    };
    CHECK(mcqa_rank(theory, {"0", "1", "2", "3"}, prove) == 1);

    auto flat = [](const Theory&, const std::string&) { return 0.4; };
    CHECK(mcqa_rank(theory, {"0", "1", "2", "3"}, flat) == 0);  // tie keeps the lowest index

    CHECK_THROWS_AS(mcqa_rank(theory, {"0", "1"}, flat), PreconditionViolated);
}

TEST_CASE("mcqa with oracle backends finds the provable choice") {
    const auto inst = synth::generate_instance(2, 2, true, 888);
    const auto backends = synth::oracle_backends();
    EngineConfig cfg;
    cfg.max_steps = 4;
    cfg.beam_width = 3;
    auto prove = [&](const Theory& theory, const std::string& goal) {
        return infer(theory, goal, *backends.selection, *backends.deduction,
                     *backends.verification, cfg)
            .f;
    };
    const auto wrong1 = synth::negation_toggled(inst.goal);
    REQUIRE(wrong1.has_value());
    const std::vector<std::string> choices = {*wrong1, "Milo is luminous.", inst.goal,
                                              "Rex is pale."};
    CHECK(mcqa_rank(inst.theory, choices, prove) == 2);
}

TEST_CASE("bootstrap confidence intervals") {
    const auto ex = examples_of({0.2, 0.4, 0.6, 0.8}, {0.1});

    SUBCASE("constant statistic collapses the interval") {
        const auto ci = bootstrap_ci([](const std::vector<ScoredExample>&) { return 0.7; }, ex,
                                     500, 0.95, 1);
        CHECK(ci.lo == 0.7);
        CHECK(ci.hi == 0.7);
    }
    SUBCASE("interval brackets the point estimate of the mean") {
        std::mt19937_64 rng(29);
        std::vector<ScoredExample> sample;
        for (int i = 0; i < 100; ++i) {
            sample.push_back({static_cast<double>(rng() % 1000) / 1000.0, true, ""});
        }
        auto mean_stat = [](const std::vector<ScoredExample>& e) {
            double s = 0.0;
            for (const auto& x : e) s += x.f;
            return s / static_cast<double>(e.size());
        };
        const double point = mean_stat(sample);
        const auto ci = bootstrap_ci(mean_stat, sample, 10000, 0.95, 7);
        CHECK(ci.lo <= point);
        CHECK(point <= ci.hi);
    }
    SUBCASE("seeded determinism") {
        auto stat = [](const std::vector<ScoredExample>& e) { return e.front().f; };
        const auto a = bootstrap_ci(stat, ex, 1000, 0.95, 99);
        const auto b = bootstrap_ci(stat, ex, 1000, 0.95, 99);
        CHECK(a.lo == b.lo);
        CHECK(a.hi == b.hi);
    }
}

TEST_CASE("curve csv export") {
    const auto r = roc_auroc(examples_of({0.8}, {0.2}));
    const auto csv = curve_csv(r.curve);
    CHECK(csv.rfind("tau,tpr,fpr,acc_pos,acc_neg\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(r.curve.size()) + 1);
}
