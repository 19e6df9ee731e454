#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "proofbeam/models.hpp"

namespace pbtest {

using namespace proofbeam;

inline Theory make_theory(std::vector<std::string> sentences) {
    return Theory::from_sentences(sentences);
}

/// Selection backend driven by a probability function of (theory, goal).
class FnSelection final : public PremiseScoringSelectionModel {
public:
    using Fn = std::function<PremiseProbabilities(const Theory&, const std::string&)>;
    explicit FnSelection(Fn fn, bool safe = true) : fn_(std::move(fn)), safe_(safe) {}

    static FnSelection fixed(std::vector<double> probs) {
        return FnSelection([probs](const Theory& theory, const std::string&) {
            PremiseProbabilities p;
            p.probs = probs;
            p.probs.resize(theory.size(), 1e-6);
            return p;
        });
    }

    /// probs[i] grows with i: the newest statements look most relevant.
    static FnSelection favor_recent() {
        return FnSelection([](const Theory& theory, const std::string&) {
            PremiseProbabilities p;
            const double n = static_cast<double>(theory.size());
            for (std::size_t i = 0; i < theory.size(); ++i) {
                p.probs.push_back(static_cast<double>(i + 1) / (n + 1.0));
            }
            return p;
        });
    }

    bool concurrency_safe() const override { return safe_; }
    PremiseProbabilities premise_probabilities(const Theory& theory,
                                               const std::string& goal) const override {
        return fn_(theory, goal);
    }

private:
    Fn fn_;
    bool safe_;
};

/// Deduction backend driven by a function of the selected texts.
class FnDeduction final : public DeductionModel {
public:
    using Fn = std::function<std::vector<ScoredDeduction>(const std::vector<std::string>&, int)>;
    explicit FnDeduction(Fn fn, bool safe = true) : fn_(std::move(fn)), safe_(safe) {}

    /// Keyed on the newline-joined selected texts; unmatched selections
    /// produce `fallback` (empty fallback means no deduction).
    static FnDeduction keyed(std::map<std::string, std::string> table, std::string fallback = "") {
        return FnDeduction([table = std::move(table), fallback = std::move(fallback)](
                               const std::vector<std::string>& texts, int) {
            std::string key;
            for (const auto& t : texts) {
                if (!key.empty()) key += '\n';
                key += t;
            }
            std::vector<ScoredDeduction> out;
            if (auto it = table.find(key); it != table.end()) {
                out.push_back({it->second, -0.01});
            } else if (!fallback.empty()) {
                out.push_back({fallback, -1.0});
            }
            return out;
        });
    }

    /// Always produces `count` distinct deductions derived from the input.
    static FnDeduction wide(int count) {
        return FnDeduction([count](const std::vector<std::string>& texts, int max_candidates) {
            std::size_t h = 1469598103934665603ULL;
            for (const auto& t : texts) {
                for (char c : t) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ULL;
            }
            std::vector<ScoredDeduction> out;
            const int n = std::min(count, max_candidates);
            for (int i = 0; i < n; ++i) {
                out.push_back({"fact-" + std::to_string(h % 100000) + "-" + std::to_string(i),
                               -0.1 * (i + 1)});
            }
            return out;
        });
    }

    bool concurrency_safe() const override { return safe_; }
    std::vector<ScoredDeduction> deduce(const std::vector<std::string>& texts,
                                        int max_candidates) const override {
        return fn_(texts, max_candidates);
    }

private:
    Fn fn_;
    bool safe_;
};

/// Verifier with per-text scores and a fallback, optionally with
/// contradiction scores.
class MapVerifier final : public VerificationModel {
public:
    explicit MapVerifier(std::map<std::string, double> scores, double fallback = 1e-6)
        : scores_(std::move(scores)), fallback_(fallback) {}

    MapVerifier& with_contradictions(std::map<std::string, double> scores) {
        con_scores_ = std::move(scores);
        has_con_ = true;
        return *this;
    }

    bool concurrency_safe() const override { return true; }
    double entail_prob(const std::string&, const std::string& statement) const override {
        auto it = scores_.find(statement);
        return it == scores_.end() ? fallback_ : it->second;
    }
    bool has_contradiction() const override { return has_con_; }
    double contradict_prob(const std::string& goal, const std::string& statement) const override {
        if (!has_con_) return VerificationModel::contradict_prob(goal, statement);
        auto it = con_scores_.find(statement);
        return it == con_scores_.end() ? fallback_ : it->second;
    }

private:
    std::map<std::string, double> scores_;
    double fallback_;
    std::map<std::string, double> con_scores_;
    bool has_con_ = false;
};

}  // namespace pbtest
