#pragma once

#include <memory>
#include <string>
#include <vector>

#include "proofbeam/core.hpp"

namespace proofbeam {

/// Per-statement selection probabilities for the current theory, clamped into
/// [prob_floor, 1 - prob_floor].
struct PremiseProbabilities {
    std::vector<double> probs;

    std::size_t size() const { return probs.size(); }
};

/// Limits handed to selection backends for one proposal call.
struct SelectionLimits {
    int max_candidates = 5;  // B_sel
    int arity = 2;           // k
    int top_premises = 4;    // candidate-pool pruning; >= theory size disables
    double prob_floor = 1e-6;
};

/// Selection role: proposes scored multi-premise selections for a theory and
/// goal, best first. Scoring calls must be pure functions of their inputs.
class SelectionModel {
public:
    virtual ~SelectionModel() = default;
    virtual bool concurrency_safe() const = 0;
    virtual std::vector<Selection> propose(const Theory& theory, const std::string& goal,
                                           const SelectionLimits& limits) const = 0;
};

struct ScoredDeduction {
    std::string text;
    double logprob = 0.0;
};

/// Deduction role: draws scored deductions from the selected premise texts,
/// in descending score order.
class DeductionModel {
public:
    virtual ~DeductionModel() = default;
    virtual bool concurrency_safe() const = 0;
    virtual std::vector<ScoredDeduction> deduce(const std::vector<std::string>& selected_texts,
                                                int max_candidates) const = 0;
};

/// Verification role: probability in (0,1) that `statement` proves `goal`.
/// Backends may additionally expose a contradiction probability.
class VerificationModel {
public:
    virtual ~VerificationModel() = default;
    virtual bool concurrency_safe() const = 0;
    virtual double entail_prob(const std::string& goal, const std::string& statement) const = 0;
    virtual bool has_contradiction() const { return false; }
    virtual double contradict_prob(const std::string& goal, const std::string& statement) const {
        (void)goal;
        (void)statement;
        throw ContradictionUnsupported("backend exposes no contradiction probability");
    }
};

/// Selection backends that score each statement independently. propose() is
/// derived from the per-premise probabilities via enumerate_pair_selections.
class PremiseScoringSelectionModel : public SelectionModel {
public:
    virtual PremiseProbabilities premise_probabilities(const Theory& theory,
                                                       const std::string& goal) const = 0;
    std::vector<Selection> propose(const Theory& theory, const std::string& goal,
                                   const SelectionLimits& limits) const override;
};

/// log p of selecting exactly the given subset under the independent-Bernoulli
/// factorization: sum of log p over members plus sum of log(1-p) over the rest.
double subset_selection_score(const PremiseProbabilities& probs, const std::vector<int>& member_ids);

/// Two-premise specialization: log p_i + log p_j + sum_{l != i,j} log(1 - p_l).
double pair_selection_score(const PremiseProbabilities& probs, int i, int j);

/// Enumerates arity-k selections over the top_premises highest-probability
/// statements, sorted by score descending with lexicographic tie-break.
/// Returns at most max_candidates entries. Throws TheoryTooSmall when fewer
/// than k statements exist.
std::vector<Selection> enumerate_pair_selections(const PremiseProbabilities& probs,
                                                 const SelectionLimits& limits);

/// Highest-scored selection proposed by the backend for this theory and goal.
Selection one_best_select(const Theory& theory, const std::string& goal,
                          const SelectionModel& model, const SelectionLimits& limits);

/// Backend's top-scored deduction for the selection. Throws NoDeduction when
/// the backend returns an empty list.
Deduction one_best_deduce(const Theory& theory, const Selection& selection,
                          const DeductionModel& model, int max_candidates = 1);

/// Resolves a selection's member ids to their texts in the theory.
std::vector<std::string> selection_texts(const Theory& theory, const Selection& selection);

}  // namespace proofbeam
