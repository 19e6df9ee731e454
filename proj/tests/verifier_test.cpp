#include <doctest.h>

#include <cmath>
#include <random>

#include "proofbeam/synthlogic.hpp"
#include "proofbeam/verifier.hpp"
#include "support.hpp"

using namespace proofbeam;

namespace {

std::string random_sentence(std::mt19937_64& rng) {
    static const std::vector<std::string> vocab = {"alpha", "beta", "gamma", "delta", "omega",
                                                   "kappa", "sigma", "theta", "zeta",  "iota"};
    const std::size_t len = 2 + rng() % 6;
    std::string out;
    for (std::size_t i = 0; i < len; ++i) {
        if (i > 0) out += ' ';
        out += vocab[rng() % vocab.size()];
    }
    return out + ".";
}

VerifierParams random_params(std::mt19937_64& rng) {
    VerifierParams p = VerifierParams::zeros();
    for (auto& w : p.weights) w = (static_cast<double>(rng() % 2000) / 1000.0) - 1.0;
    p.bias = (static_cast<double>(rng() % 2000) / 1000.0) - 1.0;
    return p;
}

}  // namespace

TEST_CASE("verifier_score basics") {
    const VerifierParams zero = VerifierParams::zeros();
    CHECK(verifier_score(zero, "anything", "else") == 0.5);

    VerifierParams exact = VerifierParams::zeros();
    for (std::size_t i = 0; i < exact.feature_spec.size(); ++i) {
        if (exact.feature_spec[i] == "exact_match") exact.weights[i] = 2.0;
    }
    CHECK(verifier_score(exact, "same text.", "same text.") > 0.5);
    CHECK(verifier_score(exact, "same text.", "other words.") == 0.5);
}

TEST_CASE("verifier_score is invariant under matched feature permutations") {
    std::mt19937_64 rng(21);
    VerifierParams p = random_params(rng);
    VerifierParams permuted = p;
    std::reverse(permuted.feature_spec.begin(), permuted.feature_spec.end());
    std::reverse(permuted.weights.begin(), permuted.weights.end());
    const std::string goal = random_sentence(rng);
    const std::string stmt = random_sentence(rng);
    CHECK(verifier_score(p, goal, stmt) == verifier_score(permuted, goal, stmt));
}

TEST_CASE("contrastive loss values and domain") {
    CHECK(contrastive_loss(0.4, 0.4) == doctest::Approx(std::log(0.5)));
    CHECK(contrastive_loss(0.2, 0.8) == doctest::Approx(std::log(0.2)));
    CHECK(contrastive_loss(0.9, 0.1) == doctest::Approx(std::log(0.9)));
    CHECK(contrastive_loss(0.3, 0.6) < 0.0);
    CHECK_THROWS_AS(contrastive_loss(0.0, 0.5), DomainError);
    CHECK_THROWS_AS(contrastive_loss(0.5, 1.0), DomainError);
}

TEST_CASE("contrastive loss is monotone and order-sensitive") {
    const double h = 1e-6;
    for (double p_bar = 0.1; p_bar < 0.95; p_bar += 0.2) {
        for (double p = 0.1; p < 0.95; p += 0.2) {
            CHECK((contrastive_loss(p_bar, p + h) - contrastive_loss(p_bar, p)) / h < 0.0);
            CHECK((contrastive_loss(p_bar + h, p) - contrastive_loss(p_bar, p)) / h > 0.0);
            if (p_bar != p) {
                CHECK((contrastive_loss(p_bar, p) < contrastive_loss(p, p_bar)) == (p_bar < p));
            }
        }
    }
}

TEST_CASE("regularizer values, minimum, and Gibbs bound") {
    CHECK(regularizer(0.5, 0.5) == doctest::Approx(std::log(2.0)));
    CHECK(regularizer(0.9, 0.5) == doctest::Approx(std::log(2.0)));
    CHECK_THROWS_AS(regularizer(0.5, 0.0), DomainError);

    for (double pf : {0.2, 0.5, 0.9}) {
        const double entropy = -pf * std::log(pf) - (1.0 - pf) * std::log(1.0 - pf);
        CHECK(regularizer(pf, pf) == doctest::Approx(entropy));
        for (double p : {0.1, 0.3, 0.5, 0.7, 0.95}) {
            CHECK(regularizer(pf, p) >= entropy - 1e-12);
            if (p != pf) CHECK(regularizer(pf, p) > entropy);
        }
        // stationary at p = pf
        const double h = 1e-7;
        const double slope = (regularizer(pf, pf + h) - regularizer(pf, pf - h)) / (2 * h);
        CHECK(slope == doctest::Approx(0.0).epsilon(1e-5));
    }
}

TEST_CASE("selection and deduction losses") {
    PremiseProbabilities probs;
    probs.probs = {0.9, 0.8, 0.1};
    CHECK(loss_sel({0, 1}, probs) == doctest::Approx(0.43386).epsilon(1e-4));
    CHECK(loss_sel({0, 1}, probs) == doctest::Approx(-pair_selection_score(probs, 0, 1)));

    PremiseProbabilities sharp;
    sharp.probs = {1.0 - 1e-6, 1.0 - 1e-6, 1e-6};
    CHECK(loss_sel({0, 1}, sharp) == doctest::Approx(0.0).epsilon(1e-4));

    PremiseProbabilities boundary;
    boundary.probs = {1.0, 0.5};
    CHECK_THROWS_AS(loss_sel({0}, boundary), DomainError);

    CHECK(loss_ded(std::log(0.5)) == doctest::Approx(0.6931).epsilon(1e-4));
    CHECK(loss_ded(0.0) == 0.0);
    CHECK(loss_ded(std::log(0.01)) == doctest::Approx(4.6052).epsilon(1e-4));
    CHECK_THROWS_AS(loss_ded(0.1), DomainError);
}

TEST_CASE("analytic gradients match central finite differences") {
    std::mt19937_64 rng(31);
    const double h = 1e-5;
    int checked = 0;
    for (int trial = 0; trial < 50; ++trial) {
        VerifierParams params = random_params(rng);
        const VerifierParams frozen = random_params(rng);
        const std::string pg = random_sentence(rng), py = random_sentence(rng);
        const std::string ng = random_sentence(rng), ny = random_sentence(rng);
        const double omega = (trial % 3 == 0) ? 0.0 : 1.0;

        const std::size_t n = params.weights.size();
        std::vector<double> grad(n + 1, 0.0);
        pair_loss_and_grad(params, frozen, pg, py, ng, ny, omega, 1e-6, &grad);

        auto loss_at = [&](const VerifierParams& p) {
            return pair_loss_and_grad(p, frozen, pg, py, ng, ny, omega, 1e-6, nullptr);
        };
        for (std::size_t i = 0; i <= n; ++i) {
            VerifierParams plus = params, minus = params;
            if (i < n) {
                plus.weights[i] += h;
                minus.weights[i] -= h;
            } else {
                plus.bias += h;
                minus.bias -= h;
            }
            const double fd = (loss_at(plus) - loss_at(minus)) / (2 * h);
            const double scale = std::max({1.0, std::abs(fd), std::abs(grad[i])});
            CHECK(std::abs(fd - grad[i]) / scale < 1e-4);
            ++checked;
        }
    }
    CHECK(checked == 50 * 7);
}

TEST_CASE("adam with zero learning rate leaves parameters bit-identical") {
    std::mt19937_64 rng(41);
    VerifierParams initial = random_params(rng);
    const VerifierParams frozen = initial;
    std::vector<TrainPair> pairs = {
        TrainPair{"goal one.", {"goal one.", "step a."}, "goal two.", {"step b."}},
    };
    RefineOptions options;
    options.optimizer.learning_rate = 0.0;
    options.epochs = 5;
    const auto result = refine_verifier(initial, frozen, pairs, options);
    CHECK(result.params.weights == initial.weights);
    CHECK(result.params.bias == initial.bias);
    CHECK(result.epoch_mean_loss.size() == 5);
}

TEST_CASE("refinement separates separable pairs and is seed-deterministic") {
    // provable pairs restate their goal; mined negatives merely overlap theirs
    std::vector<TrainPair> pairs;
    for (int i = 0; i < 12; ++i) {
        const std::string tag = std::to_string(i);
        pairs.push_back(TrainPair{
            "Rex is sweet " + tag + ".",
            {"Rex is sweet " + tag + "."},
            "Rex is not sweet " + tag + ".",
            {"Rex is sweet " + tag + ".", "Rex is dull " + tag + "."},
        });
    }
    const VerifierParams initial = synth::spurious_params();
    RefineOptions options;
    options.epochs = 200;
    options.seed = 5;

    auto mean_contrastive = [&](const VerifierParams& p) {
        double total = 0.0;
        for (const auto& pair : pairs) {
            const double pos = verifier_score(p, pair.provable_goal, pair.provable_deductions[0]);
            const double neg =
                verifier_score(p, pair.nonprovable_goal, pair.nonprovable_deductions[0]);
            total += contrastive_loss(neg, pos);
        }
        return total / static_cast<double>(pairs.size());
    };

    const double before = mean_contrastive(initial);
    const auto result = refine_verifier(initial, initial, pairs, options);
    const double after = mean_contrastive(result.params);
    CHECK(after < before);

    const auto rerun = refine_verifier(initial, initial, pairs, options);
    CHECK(rerun.params.weights == result.params.weights);
    CHECK(rerun.params.bias == result.params.bias);
    CHECK(rerun.epoch_mean_loss == result.epoch_mean_loss);
}

TEST_CASE("the regularizer keeps provable scores near the frozen model") {
    std::vector<TrainPair> pairs;
    std::vector<std::pair<std::string, std::string>> heldout;
    for (int i = 0; i < 16; ++i) {
        const std::string tag = std::to_string(i);
        TrainPair pair{
            "Fae is cold " + tag + ".",
            {"Fae is cold " + tag + ".", "Fae is a pivot " + tag + "."},
            "Fae is not cold " + tag + ".",
            {"Fae is cold " + tag + "."},
        };
        if (i % 4 == 0) {
            heldout.emplace_back(pair.provable_goal, pair.provable_deductions[0]);
        } else {
            pairs.push_back(std::move(pair));
        }
    }
    const VerifierParams frozen = synth::spurious_params();
    RefineOptions with_omega;
    with_omega.epochs = 150;
    with_omega.seed = 9;
    auto without_omega = with_omega;
    without_omega.omega_weight = 0.0;

    const auto tuned = refine_verifier(frozen, frozen, pairs, with_omega);
    const auto drifted = refine_verifier(frozen, frozen, pairs, without_omega);

    auto mean_drift = [&](const VerifierParams& p) {
        double total = 0.0;
        for (const auto& [goal, ded] : heldout) {
            total += std::abs(verifier_score(p, goal, ded) - verifier_score(frozen, goal, ded));
        }
        return total / static_cast<double>(heldout.size());
    };
    CHECK(mean_drift(tuned.params) < mean_drift(drifted.params));
}

TEST_CASE("refinement rejects empty or broken pair sets") {
    const VerifierParams p = VerifierParams::zeros();
    CHECK_THROWS_AS(refine_verifier(p, p, {}, RefineOptions{}), EmptyPairSet);
    std::vector<TrainPair> broken = {TrainPair{"g.", {}, "b.", {"x."}}};
    CHECK_THROWS_AS(refine_verifier(p, p, broken, RefineOptions{}), PreconditionViolated);
}

TEST_CASE("mine_negative_path reproduces verifier exploitation") {
    const Theory theory = pbtest::make_theory({
        "Alex is a wumpus.",
        "Every wumpus is earthy.",
        "Each lorpus is a dolpus.",
        "Every dolpus is shy.",
    });
    const std::string goal = "Alex is not earthy.";
    const auto backends = synth::oracle_backends();
    const auto spurious = synth::spurious_verifier();

    EngineConfig cfg;
    cfg.max_steps = 3;
    cfg.beam_width = 5;
    cfg.selection_depth = 3;
    cfg.deduction_depth = 2;

    const auto path = mine_negative_path(theory, goal, *backends.selection, *backends.deduction,
                                         *spurious, cfg, synth::is_provable);
    CHECK(path.deduction_count() >= 1);
    CHECK(proof_score(path, goal, *spurious) > 0.5);  // the lexical exploit

    CHECK_THROWS_AS(mine_negative_path(theory, "Alex is earthy.", *backends.selection,
                                       *backends.deduction, *spurious, cfg, synth::is_provable),
                    PreconditionViolated);

    EngineConfig no_planning;
    CHECK_THROWS_AS(mine_negative_path(theory, goal, *backends.selection, *backends.deduction,
                                       *spurious, no_planning, synth::is_provable),
                    ConfigConflict);
}
