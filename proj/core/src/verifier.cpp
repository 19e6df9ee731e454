#include "proofbeam/verifier.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <set>
#include <unordered_map>

namespace proofbeam {

namespace {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

std::set<std::string> token_set(const std::string& text) {
    auto toks = tokenize(text);
    return {toks.begin(), toks.end()};
}

std::set<std::string> bigram_set(const std::string& text) {
    auto toks = tokenize(text);
    std::set<std::string> out;
    for (std::size_t i = 0; i + 1 < toks.size(); ++i) out.insert(toks[i] + ' ' + toks[i + 1]);
    return out;
}

double set_jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::size_t inter = 0;
    for (const auto& t : a) inter += b.count(t);
    return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

void check_unit_interval(double p, const char* name) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError(std::string(name) + " must lie in (0,1), got " + std::to_string(p));
    }
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

double token_jaccard(const std::string& a, const std::string& b) {
    return set_jaccard(token_set(a), token_set(b));
}

const std::vector<std::string>& verifier_feature_names() {
    static const std::vector<std::string> names = {
        "token_jaccard", "goal_containment", "statement_containment",
        "length_difference", "exact_match", "bigram_jaccard",
    };
    return names;
}

std::vector<double> verifier_features(const std::string& statement, const std::string& goal) {
    const auto stmt_tokens = token_set(statement);
    const auto goal_tokens = token_set(goal);
    std::size_t inter = 0;
    for (const auto& t : stmt_tokens) inter += goal_tokens.count(t);

    const double n_union = static_cast<double>(stmt_tokens.size() + goal_tokens.size() - inter);
    const double jaccard = n_union == 0.0 ? 0.0 : static_cast<double>(inter) / n_union;
    const double goal_cont =
        goal_tokens.empty() ? 0.0 : static_cast<double>(inter) / static_cast<double>(goal_tokens.size());
    const double stmt_cont =
        stmt_tokens.empty() ? 0.0 : static_cast<double>(inter) / static_cast<double>(stmt_tokens.size());
    const double longer = static_cast<double>(std::max<std::size_t>(
        1, std::max(stmt_tokens.size(), goal_tokens.size())));
    const double length_diff =
        std::abs(static_cast<double>(stmt_tokens.size()) - static_cast<double>(goal_tokens.size())) / longer;
    const double exact = statement == goal ? 1.0 : 0.0;
    const double bigram = set_jaccard(bigram_set(statement), bigram_set(goal));

    return {jaccard, goal_cont, stmt_cont, length_diff, exact, bigram};
}

VerifierParams VerifierParams::zeros() {
    VerifierParams p;
    p.feature_spec = verifier_feature_names();
    p.weights.assign(p.feature_spec.size(), 0.0);
    p.bias = 0.0;
    return p;
}

void VerifierParams::check() const {
    if (weights.size() != feature_spec.size()) {
        throw DomainError("weights/feature_spec size mismatch");
    }
    for (double w : weights) {
        if (!std::isfinite(w)) throw DomainError("non-finite verifier weight");
    }
    if (!std::isfinite(bias)) throw DomainError("non-finite verifier bias");
}

namespace {

// z = w . phi + b with features looked up by name.
double verifier_logit(const VerifierParams& params, const std::vector<double>& canonical_features) {
    const auto& names = verifier_feature_names();
    double z = params.bias;
    for (std::size_t i = 0; i < params.feature_spec.size(); ++i) {
        auto it = std::find(names.begin(), names.end(), params.feature_spec[i]);
        if (it == names.end()) {
            throw DomainError("unknown verifier feature: " + params.feature_spec[i]);
        }
        z += params.weights[i] * canonical_features[static_cast<std::size_t>(it - names.begin())];
    }
    return z;
}

}  // namespace

double verifier_score(const VerifierParams& params, const std::string& goal,
                      const std::string& statement, double prob_floor) {
    params.check();
    const double z = verifier_logit(params, verifier_features(statement, goal));
    return clamp_probability(sigmoid(z), prob_floor);
}

LogisticVerifier::LogisticVerifier(VerifierParams params, double prob_floor)
    : params_(std::move(params)), prob_floor_(prob_floor) {
    params_.check();
}

double LogisticVerifier::entail_prob(const std::string& goal, const std::string& statement) const {
    return verifier_score(params_, goal, statement, prob_floor_);
}

double contrastive_loss(double p_bar, double p) {
    check_unit_interval(p_bar, "p_bar");
    check_unit_interval(p, "p");
    return std::log(p_bar) - std::log(p_bar + p);
}

double regularizer(double p_frozen, double p) {
    check_unit_interval(p_frozen, "p_frozen");
    check_unit_interval(p, "p");
    return -p_frozen * std::log(p) - (1.0 - p_frozen) * std::log1p(-p);
}

double loss_sel(const std::vector<int>& gold_member_ids, const PremiseProbabilities& probs) {
    for (double p : probs.probs) check_unit_interval(p, "selection probability");
    return -subset_selection_score(probs, gold_member_ids);
}

double loss_ded(double gold_deduction_logprob) {
    if (gold_deduction_logprob > 0.0) {
        throw DomainError("log-probability must be <= 0");
    }
    return -gold_deduction_logprob;
}

void adam_step(std::vector<double>& params, const std::vector<double>& grad, AdamState& state,
               const AdamConfig& cfg) {
    if (params.size() != grad.size() || params.size() != state.m.size()) {
        throw DomainError("adam_step shape mismatch");
    }
    state.step += 1;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * grad[i];
        state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
        const double m_hat = state.m[i] / bc1;
        const double v_hat = state.v[i] / bc2;
        params[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    }
}

namespace {

struct ScoreWithGrad {
    double p = 0.0;       // clamped probability
    double dp_dz = 0.0;   // 0 where the clamp is active
    std::vector<double> features;  // aligned with params.feature_spec
};

ScoreWithGrad score_with_grad(const VerifierParams& params, const std::string& goal,
                              const std::string& statement, double prob_floor) {
    const auto canonical = verifier_features(statement, goal);
    const auto& names = verifier_feature_names();
    ScoreWithGrad out;
    out.features.resize(params.feature_spec.size());
    double z = params.bias;
    for (std::size_t i = 0; i < params.feature_spec.size(); ++i) {
        auto it = std::find(names.begin(), names.end(), params.feature_spec[i]);
        if (it == names.end()) throw DomainError("unknown verifier feature: " + params.feature_spec[i]);
        out.features[i] = canonical[static_cast<std::size_t>(it - names.begin())];
        z += params.weights[i] * out.features[i];
    }
    const double raw = sigmoid(z);
    out.p = clamp_probability(raw, prob_floor);
    out.dp_dz = (raw > prob_floor && raw < 1.0 - prob_floor) ? raw * (1.0 - raw) : 0.0;
    return out;
}

}  // namespace

double pair_loss_and_grad(const VerifierParams& params, const VerifierParams& frozen,
                          const std::string& provable_goal, const std::string& y,
                          const std::string& nonprovable_goal, const std::string& ybar,
                          double omega_weight, double prob_floor, std::vector<double>* grad) {
    params.check();
    const ScoreWithGrad pos = score_with_grad(params, provable_goal, y, prob_floor);
    const ScoreWithGrad neg = score_with_grad(params, nonprovable_goal, ybar, prob_floor);
    const double p_frozen = verifier_score(frozen, provable_goal, y, prob_floor);

    double loss = contrastive_loss(neg.p, pos.p);
    if (omega_weight != 0.0) loss += omega_weight * regularizer(p_frozen, pos.p);

    if (grad != nullptr) {
        const std::size_t n = params.weights.size();
        if (grad->size() != n + 1) throw DomainError("gradient buffer shape mismatch");
        const double dl_dpbar = 1.0 / neg.p - 1.0 / (neg.p + pos.p);
        double dl_dp = -1.0 / (neg.p + pos.p);
        if (omega_weight != 0.0) {
            dl_dp += omega_weight * (-p_frozen / pos.p + (1.0 - p_frozen) / (1.0 - pos.p));
        }
        const double gbar = dl_dpbar * neg.dp_dz;
        const double gpos = dl_dp * pos.dp_dz;
        for (std::size_t i = 0; i < n; ++i) {
            (*grad)[i] += gbar * neg.features[i] + gpos * pos.features[i];
        }
        (*grad)[n] += gbar + gpos;
    }
    return loss;
}

RefineResult refine_verifier(const VerifierParams& initial, const VerifierParams& frozen,
                             const std::vector<TrainPair>& pairs, const RefineOptions& options) {
    if (pairs.empty()) throw EmptyPairSet("refine_verifier needs at least one training pair");
    for (const auto& pair : pairs) {
        if (pair.provable_deductions.empty() || pair.nonprovable_deductions.empty()) {
            throw PreconditionViolated("train pair is missing deductions on one side");
        }
    }
    initial.check();
    frozen.check();

    RefineResult result;
    result.params = initial;
    const std::size_t n = result.params.weights.size();
    AdamState state(n + 1);
    std::vector<double> theta(result.params.weights);
    theta.push_back(result.params.bias);

    const std::size_t batch =
        std::min<std::size_t>(pairs.size(), static_cast<std::size_t>(std::max(1, options.optimizer.batch_size)));

    for (int epoch = 0; epoch < options.epochs; ++epoch) {
        std::mt19937_64 rng(mix_seed(options.seed, static_cast<std::uint64_t>(epoch)));
        std::vector<std::pair<std::size_t, std::size_t>> draws(pairs.size());
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            draws[i] = {rng() % pairs[i].provable_deductions.size(),
                        rng() % pairs[i].nonprovable_deductions.size()};
        }

        double epoch_loss = 0.0;
        for (std::size_t begin = 0; begin < pairs.size(); begin += batch) {
            const std::size_t end = std::min(pairs.size(), begin + batch);
            std::vector<double> grad(n + 1, 0.0);
            VerifierParams current = result.params;
            current.weights.assign(theta.begin(), theta.begin() + static_cast<long>(n));
            current.bias = theta[n];
            for (std::size_t i = begin; i < end; ++i) {
                const auto& pair = pairs[i];
                epoch_loss += pair_loss_and_grad(
                    current, frozen, pair.provable_goal, pair.provable_deductions[draws[i].first],
                    pair.nonprovable_goal, pair.nonprovable_deductions[draws[i].second],
                    options.omega_weight, options.prob_floor, &grad);
            }
            const double inv = 1.0 / static_cast<double>(end - begin);
            for (double& g : grad) g *= inv;
            adam_step(theta, grad, state, options.optimizer);
        }
        result.epoch_mean_loss.push_back(epoch_loss / static_cast<double>(pairs.size()));
    }

    result.params.weights.assign(theta.begin(), theta.begin() + static_cast<long>(n));
    result.params.bias = theta[n];
    return result;
}

ReasoningPath mine_negative_path(
    const Theory& theory, const std::string& nonprovable_goal, const SelectionModel& sel,
    const DeductionModel& ded, const VerificationModel& ver, const EngineConfig& cfg,
    const std::function<bool(const Theory&, const std::string&)>& is_provable) {
    if (!cfg.planning_enabled()) {
        throw ConfigConflict("mine_negative_path requires a planning configuration");
    }
    if (is_provable && is_provable(theory, nonprovable_goal)) {
        throw PreconditionViolated("goal is provable; negatives must not be");
    }
    return infer(theory, nonprovable_goal, sel, ded, ver, cfg).best_path;
}

}  // namespace proofbeam
