#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "proofbeam/verifier.hpp"

namespace proofbeam::synth {

// ---------------------------------------------------------------------------
// Grammar: four sentence templates plus negated attributes.
//   "<Name> is a <category>."        entity fact
//   "Each <A> is a <B>."             subtype rule
//   "Every <A> is [not] <adj>."      attribute rule
//   "<Name> is [not] <adj>."         derived attribute fact
// ---------------------------------------------------------------------------

struct EntityFact {
    std::string entity;
    std::string category;
};

struct AttributeFact {
    std::string entity;
    std::string adjective;
    bool negated = false;
};

struct SubtypeRule {
    std::string from;
    std::string to;
};

struct AttributeRule {
    std::string category;
    std::string adjective;
    bool negated = false;
};

std::string render(const EntityFact&);
std::string render(const AttributeFact&);
std::string render(const SubtypeRule&);
std::string render(const AttributeRule&);

struct ParsedSentence {
    std::optional<EntityFact> entity_fact;
    std::optional<AttributeFact> attribute_fact;
    std::optional<SubtypeRule> subtype_rule;
    std::optional<AttributeRule> attribute_rule;

    bool is_fact() const { return entity_fact || attribute_fact; }
    bool is_rule() const { return subtype_rule || attribute_rule; }
};

/// Parses one sentence of the synthetic grammar. Throws GrammarError with the
/// offending sentence.
ParsedSentence parse_sentence(const std::string& sentence);

/// A generated fictional ontology: a subtype chain ending in the target
/// attribute, plus distractor branches unreachable from the entity's chain.
struct Ontology {
    std::vector<std::string> categories;  // chain categories, in order
    std::vector<SubtypeRule> subtype_rules;
    std::vector<AttributeRule> attribute_rules;
    EntityFact entity_fact;
    std::string target_adjective;
};

struct GoldStep {
    std::pair<int, int> premise_ids;  // (fact id, rule id) in the theory
    std::string conclusion;
};

struct SyntheticInstance {
    Theory theory;
    std::string goal;
    bool provable = false;
    std::vector<GoldStep> gold_path;  // length == depth when provable
    int depth = 0;
    int num_distractors = 0;
    std::uint64_t seed = 0;
};

/// Deterministic generator. Provable instances carry a gold path of exactly
/// `depth` modus-ponens steps ending at the goal; non-provable goals are the
/// negated target attribute or an attribute only reachable on a distractor
/// branch, and are guaranteed absent from the closure.
SyntheticInstance generate_instance(int depth, int num_distractors, bool provable,
                                    std::uint64_t seed);

/// Least fixed point of modus ponens over (fact, rule) pairs: every derivable
/// fact sentence, including the given ones. Throws GrammarError on sentences
/// outside the grammar.
std::set<std::string> forward_chain(const Theory& theory);

bool is_provable(const Theory& theory, const std::string& goal);

/// The (fact, rule) application that advances the derivation of `target` from
/// the current theory, or nullopt when target is underivable or already
/// present.
struct NextApplication {
    int fact_id = 0;
    int rule_id = 0;
    std::string conclusion;
};
std::optional<NextApplication> next_application(const Theory& theory, const std::string& target);

/// First modus-ponens conclusion over the given sentences, scanning facts and
/// rules in input order. Sentences outside the grammar are skipped.
std::optional<std::string> modus_ponens(const std::vector<std::string>& texts);

// ---------------------------------------------------------------------------
// Oracle backends: exact test doubles for the three model roles.
// ---------------------------------------------------------------------------

/// Goal-directed selection: the two statements firing the next applicable
/// rule toward the goal get probability 1 - eps. Everything else sits at the
/// eps scale, tilted by lexical overlap with the goal so that ties break by
/// relevance when no derivation exists.
class OracleSelectionModel final : public PremiseScoringSelectionModel {
public:
    explicit OracleSelectionModel(double eps = 1e-6) : eps_(eps) {}
    bool concurrency_safe() const override { return true; }
    PremiseProbabilities premise_probabilities(const Theory& theory,
                                               const std::string& goal) const override;

private:
    double eps_;
};

/// Applies modus ponens deterministically with log-probability log(1 - eps);
/// when nothing fires, restates the first selected premise at log(eps).
class OracleDeductionModel final : public DeductionModel {
public:
    explicit OracleDeductionModel(double eps = 1e-6) : eps_(eps) {}
    bool concurrency_safe() const override { return true; }
    std::vector<ScoredDeduction> deduce(const std::vector<std::string>& selected_texts,
                                        int max_candidates) const override;

private:
    double eps_;
};

/// Exact-match verification: 1 - eps on the goal text, eps otherwise. The
/// contradiction probability is 1 - eps exactly on the negation-toggled goal.
class OracleVerificationModel final : public VerificationModel {
public:
    explicit OracleVerificationModel(double eps = 1e-6) : eps_(eps) {}
    bool concurrency_safe() const override { return true; }
    double entail_prob(const std::string& goal, const std::string& statement) const override;
    bool has_contradiction() const override { return true; }
    double contradict_prob(const std::string& goal, const std::string& statement) const override;

private:
    double eps_;
};

struct OracleBackends {
    std::shared_ptr<SelectionModel> selection;
    std::shared_ptr<DeductionModel> deduction;
    std::shared_ptr<VerificationModel> verification;
};

OracleBackends oracle_backends(double eps = 1e-6);

/// Toggles "not" in an attribute sentence; nullopt outside the grammar.
std::optional<std::string> negation_toggled(const std::string& sentence);

/// Parameters of the intentionally exploitable lexical verifier: a steep
/// sigmoid over token-overlap Jaccard alone.
VerifierParams spurious_params();

/// Verifier scoring by token-overlap Jaccard through a fixed sigmoid --
/// blind to negation, so planning can game it.
std::shared_ptr<VerificationModel> spurious_verifier(double prob_floor = 1e-6);

/// The non-provable pool goal with maximum lexical overlap against the
/// theory (max over statements of token Jaccard; ties keep pool order).
/// Throws NoValidCandidate when every pool entry is provable.
std::string adversarial_negative_goal(const Theory& theory, const std::vector<std::string>& goal_pool);

}  // namespace proofbeam::synth
