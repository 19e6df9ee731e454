#include <doctest.h>

#include <random>

#include "proofbeam/synthlogic.hpp"
#include "support.hpp"

using namespace proofbeam;
using namespace proofbeam::synth;
using pbtest::make_theory;

namespace {

std::vector<std::string> texts_of(const Theory& theory) {
    std::vector<std::string> out;
    for (const auto& st : theory.statements()) out.push_back(st.text);
    return out;
}

}  // namespace

TEST_CASE("generation is deterministic in the seed") {
    const auto a = generate_instance(3, 2, true, 4242);
    const auto b = generate_instance(3, 2, true, 4242);
    CHECK(texts_of(a.theory) == texts_of(b.theory));
    CHECK(a.goal == b.goal);
    REQUIRE(a.gold_path.size() == b.gold_path.size());
    for (std::size_t i = 0; i < a.gold_path.size(); ++i) {
        CHECK(a.gold_path[i].conclusion == b.gold_path[i].conclusion);
        CHECK(a.gold_path[i].premise_ids == b.gold_path[i].premise_ids);
    }

    bool any_different = false;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        if (texts_of(generate_instance(3, 2, true, seed).theory) != texts_of(a.theory)) {
            any_different = true;
        }
    }
    CHECK(any_different);
}

TEST_CASE("provable instances replay their gold path through the deduction oracle") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 50ULL}) {
        for (int depth : {1, 2, 3, 4}) {
            const auto inst = generate_instance(depth, 3, true, seed);
            REQUIRE(inst.gold_path.size() == static_cast<std::size_t>(depth));
            CHECK(forward_chain(inst.theory).count(inst.goal) == 1);

            Theory theory = inst.theory;
            for (const auto& step : inst.gold_path) {
                const std::vector<std::string> selected = {
                    theory.at(step.premise_ids.first).text,
                    theory.at(step.premise_ids.second).text,
                };
                const auto conclusion = modus_ponens(selected);
                REQUIRE(conclusion.has_value());
                CHECK(*conclusion == step.conclusion);
                theory = theory.extended_with(*conclusion);
            }
            CHECK(inst.gold_path.back().conclusion == inst.goal);
        }
    }
}

TEST_CASE("nonprovable goals stay outside the closure") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto inst = generate_instance(1 + seed % 3, 3, false, seed);
        CHECK(forward_chain(inst.theory).count(inst.goal) == 0);
        CHECK(inst.gold_path.empty());
    }
}

TEST_CASE("forward_chain computes the modus-ponens fixed point") {
    SUBCASE("no rules means only the entity fact") {
        const auto closure = forward_chain(make_theory({"Alex is a wumpus."}));
        CHECK(closure == std::set<std::string>{"Alex is a wumpus."});
    }
    SUBCASE("three-hop chain reaches the attribute") {
        const auto closure = forward_chain(make_theory({
            "Alex is a wumpus.",
            "Each wumpus is a vumpus.",
            "Each vumpus is a zumpus.",
            "Every zumpus is cold.",
        }));
        CHECK(closure.count("Alex is a vumpus.") == 1);
        CHECK(closure.count("Alex is a zumpus.") == 1);
        CHECK(closure.count("Alex is cold.") == 1);
    }
    SUBCASE("distractor-branch attributes never derive") {
        const auto closure = forward_chain(make_theory({
            "Alex is a wumpus.",
            "Every wumpus is cold.",
            "Each lorpus is a dolpus.",
            "Every dolpus is shy.",
        }));
        CHECK(closure.count("Alex is shy.") == 0);
        CHECK(closure.count("Alex is a dolpus.") == 0);
    }
    SUBCASE("negated attribute rules derive negated facts") {
        const auto closure = forward_chain(make_theory({
            "Alex is a wumpus.",
            "Every wumpus is not red.",
        }));
        CHECK(closure.count("Alex is not red.") == 1);
        CHECK(closure.count("Alex is red.") == 0);
    }
    SUBCASE("grammar violations carry the offending sentence") {
        CHECK_THROWS_WITH_AS(forward_chain(make_theory({"This sentence is outside the grammar"})),
                             doctest::Contains("outside the grammar"), GrammarError);
    }
}

TEST_CASE("forward_chain is monotone under added rules") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const auto inst = generate_instance(3, 3, true, rng());
        const auto full = forward_chain(inst.theory);
        // drop one random rule statement
        auto sentences = texts_of(inst.theory);
        std::vector<std::string> pruned;
        const std::size_t drop = rng() % sentences.size();
        for (std::size_t i = 0; i < sentences.size(); ++i) {
            if (i != drop) pruned.push_back(sentences[i]);
        }
        const auto smaller = forward_chain(make_theory(pruned));
        for (const auto& s : smaller) CHECK(full.count(s) == 1);
    }
}

TEST_CASE("goal-directed oracle selection fires the next applicable rule") {
    for (std::uint64_t seed = 10; seed < 16; ++seed) {
        const auto inst = generate_instance(1, 3, true, seed);
        const OracleSelectionModel oracle;
        SelectionLimits limits;
        const auto sel = one_best_select(inst.theory, inst.goal, oracle, limits);
        std::vector<int> expected = {inst.gold_path[0].premise_ids.first,
                                     inst.gold_path[0].premise_ids.second};
        std::sort(expected.begin(), expected.end());
        CHECK(sel.member_ids == expected);
    }
}

TEST_CASE("oracle deduction applies modus ponens or restates") {
    const OracleDeductionModel oracle;
    const auto fired = oracle.deduce({"Alex is a wumpus.", "Every wumpus is bitter."}, 1);
    REQUIRE(fired.size() == 1);
    CHECK(fired[0].text == "Alex is bitter.");
    CHECK(fired[0].logprob == doctest::Approx(0.0).epsilon(1e-5));

    const auto restated = oracle.deduce({"Every wumpus is bitter.", "Every zumpus is cold."}, 1);
    REQUIRE(restated.size() == 1);
    CHECK(restated[0].text == "Every wumpus is bitter.");
    CHECK(restated[0].logprob == fired[0].logprob);
}

TEST_CASE("oracle verification is exact string match") {
    const OracleVerificationModel oracle;
    CHECK(oracle.entail_prob("Alex is cold.", "Alex is cold.") == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(oracle.entail_prob("Alex is cold.", "Alex is a wumpus.") == doctest::Approx(0.0).epsilon(1e-5));
    CHECK(oracle.contradict_prob("Alex is cold.", "Alex is not cold.") ==
          doctest::Approx(1.0).epsilon(1e-5));
    CHECK(oracle.contradict_prob("Alex is cold.", "Alex is warm.") ==
          doctest::Approx(0.0).epsilon(1e-5));
}

TEST_CASE("negation toggling") {
    CHECK(negation_toggled("Alex is earthy.") == "Alex is not earthy.");
    CHECK(negation_toggled("Alex is not earthy.") == "Alex is earthy.");
    CHECK(negation_toggled("Every wumpus is red.") == "Every wumpus is not red.");
    CHECK_FALSE(negation_toggled("Alex is a wumpus.").has_value());
    CHECK_FALSE(negation_toggled("free-form text").has_value());
}

TEST_CASE("spurious verifier rewards lexical overlap and ignores negation") {
    const auto v = spurious_verifier();
    CHECK(v->entail_prob("Alex is earthy.", "Alex is earthy.") > 0.95);
    CHECK(v->entail_prob("Alex is earthy.", "quartz granite feldspar.") < 0.05);
    // the designed failure: negation flips meaning but barely moves the score
    CHECK(v->entail_prob("Alex is not earthy.", "Alex is earthy.") > 0.9);
}

TEST_CASE("adversarial negatives maximize overlap among non-provable goals") {
    const auto inst = generate_instance(2, 2, true, 321);

    SUBCASE("singleton pool") {
        const std::string candidate = "Milo is luminous.";
        REQUIRE_FALSE(is_provable(inst.theory, candidate));
        CHECK(adversarial_negative_goal(inst.theory, {candidate}) == candidate);
    }
    SUBCASE("higher-overlap candidate wins; provable ones are excluded") {
        const std::string provable = inst.goal;  // max overlap but provable
        const auto high = negation_toggled(inst.goal);
        REQUIRE(high.has_value());
        const std::string low = "Milo is luminous.";
        CHECK(adversarial_negative_goal(inst.theory, {provable, low, *high}) == *high);
    }
    SUBCASE("all-provable pools are rejected") {
        CHECK_THROWS_AS(adversarial_negative_goal(inst.theory, {inst.goal}), NoValidCandidate);
    }
}

TEST_CASE("rendering uses the right article") {
    CHECK(render(EntityFact{"Alex", "impus"}) == "Alex is an impus.");
    CHECK(render(SubtypeRule{"jompus", "impus"}) == "Each jompus is an impus.");
    CHECK(render(AttributeRule{"vumpus", "opaque", true}) == "Every vumpus is not opaque.");
    const auto parsed = parse_sentence("Each jompus is an impus.");
    REQUIRE(parsed.subtype_rule.has_value());
    CHECK(parsed.subtype_rule->from == "jompus");
    CHECK(parsed.subtype_rule->to == "impus");
}
