#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "proofbeam/inference.hpp"

namespace proofbeam {

// ---------------------------------------------------------------------------
// Lexical features and the trainable logistic verifier
// ---------------------------------------------------------------------------

/// Lowercased alphanumeric tokens of a sentence.
std::vector<std::string> tokenize(const std::string& text);

/// Jaccard overlap of the two token sets; 0 when both are empty.
double token_jaccard(const std::string& a, const std::string& b);

/// Feature names in their canonical order.
const std::vector<std::string>& verifier_feature_names();

/// Feature vector for a (statement, goal) pair, aligned with
/// verifier_feature_names(): token-overlap Jaccard, containment of the goal's
/// tokens in the statement, containment of the statement's tokens in the
/// goal, normalized length difference, exact-match flag, shared-bigram ratio.
std::vector<double> verifier_features(const std::string& statement, const std::string& goal);

/// Trainable parameters of the logistic verification model.
struct VerifierParams {
    std::vector<std::string> feature_spec;  // ordered feature names
    std::vector<double> weights;            // same length as feature_spec
    double bias = 0.0;

    static VerifierParams zeros();
    void check() const;  // |weights| == |feature_spec| and all values finite

    bool operator==(const VerifierParams&) const = default;
};

/// sigmoid(weights . features(statement, goal) + bias), clamped into
/// [prob_floor, 1 - prob_floor]. Features are looked up by name, so the score
/// is invariant under a matching permutation of feature_spec and weights.
double verifier_score(const VerifierParams& params, const std::string& goal,
                      const std::string& statement, double prob_floor = 1e-6);

/// VerificationModel backed by VerifierParams.
class LogisticVerifier final : public VerificationModel {
public:
    explicit LogisticVerifier(VerifierParams params, double prob_floor = 1e-6);

    bool concurrency_safe() const override { return true; }
    double entail_prob(const std::string& goal, const std::string& statement) const override;

    const VerifierParams& params() const { return params_; }
    double prob_floor() const { return prob_floor_; }

private:
    VerifierParams params_;
    double prob_floor_;
};

// ---------------------------------------------------------------------------
// Losses
// ---------------------------------------------------------------------------

/// Contrastive loss log p_bar - log(p_bar + p): always negative, decreasing in
/// p and increasing in p_bar. Throws DomainError outside (0,1).
double contrastive_loss(double p_bar, double p);

/// Cross-entropy of the tuned score p against the frozen score p_frozen:
/// -p_frozen log p - (1 - p_frozen) log(1 - p). Minimized at p = p_frozen.
double regularizer(double p_frozen, double p);

/// Negative log-likelihood of a gold selection under per-premise
/// probabilities: -sum_{i in sel} log p_i - sum_{i not in sel} log(1 - p_i).
/// Throws DomainError when any probability sits on 0 or 1.
double loss_sel(const std::vector<int>& gold_member_ids, const PremiseProbabilities& probs);

/// Negation of a gold deduction's log-probability. Throws DomainError on a
/// positive input.
double loss_ded(double gold_deduction_logprob);

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

/// One contrastive training pair: a provable goal with the deductions of a
/// gold path, against a non-provable goal with the deductions of a mined
/// (planning-generated) path.
struct TrainPair {
    std::string provable_goal;
    std::vector<std::string> provable_deductions;
    std::string nonprovable_goal;
    std::vector<std::string> nonprovable_deductions;
};

struct AdamConfig {
    double learning_rate = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    int batch_size = 16;  // full-batch fallback when fewer pairs exist
};

/// First/second-moment accumulators for one parameter vector.
struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    long step = 0;

    explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

/// In-place Adam update of `params` given the gradient.
void adam_step(std::vector<double>& params, const std::vector<double>& grad, AdamState& state,
               const AdamConfig& cfg);

struct RefineOptions {
    AdamConfig optimizer;
    int epochs = 200;
    double omega_weight = 1.0;  // 0 trains without the regularizer
    std::uint64_t seed = 0;
    double prob_floor = 1e-6;
};

struct RefineResult {
    VerifierParams params;
    std::vector<double> epoch_mean_loss;  // one entry per epoch
};

/// Analytic gradient of contrastive_loss + omega_weight * regularizer for one
/// pair, accumulated into grad (layout: weights..., bias). Returns the loss.
/// p_bar comes from (nonprovable goal, ybar); p from (provable goal, y); the
/// regularizer's target is the frozen model's score on the provable pair.
double pair_loss_and_grad(const VerifierParams& params, const VerifierParams& frozen,
                          const std::string& provable_goal, const std::string& y,
                          const std::string& nonprovable_goal, const std::string& ybar,
                          double omega_weight, double prob_floor, std::vector<double>* grad);

/// Contrastive refinement: per epoch, draws one deduction from each side of
/// every pair (reseeded per epoch), averages analytic gradients over batches,
/// and takes Adam steps. frozen stays untouched. Throws EmptyPairSet.
RefineResult refine_verifier(const VerifierParams& initial, const VerifierParams& frozen,
                             const std::vector<TrainPair>& pairs, const RefineOptions& options);

/// Runs the planning engine against a goal that must not be provable; the
/// caller supplies the provability oracle used to enforce that precondition.
/// Returns the best path the planner found (the would-be exploit).
ReasoningPath mine_negative_path(
    const Theory& theory, const std::string& nonprovable_goal, const SelectionModel& sel,
    const DeductionModel& ded, const VerificationModel& ver, const EngineConfig& cfg,
    const std::function<bool(const Theory&, const std::string&)>& is_provable);

}  // namespace proofbeam
