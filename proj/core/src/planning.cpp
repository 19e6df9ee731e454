#include "proofbeam/planning.hpp"

#include <algorithm>
#include <cmath>

namespace proofbeam {

namespace {

SelectionLimits limits_from(const EngineConfig& cfg) {
    return SelectionLimits{cfg.selection_width, cfg.arity, cfg.top_premises, cfg.prob_floor};
}

RolloutEntry score_entry(const std::string& goal, std::string text, const VerificationModel& ver,
                         const EngineConfig& cfg) {
    RolloutEntry entry;
    entry.text = std::move(text);
    entry.p_ver = ver.entail_prob(goal, entry.text);
    if (cfg.use_contradiction) {
        if (!ver.has_contradiction()) {
            throw ContradictionUnsupported("use_contradiction set but backend has no p_con");
        }
        entry.p_con = ver.contradict_prob(goal, entry.text);
    }
    return entry;
}

double trace_score(const std::vector<RolloutEntry>& entries, double extra_prob,
                   double prob_floor) {
    double best = extra_prob;
    for (const auto& e : entries) best = std::max(best, e.effective());
    if (best <= 0.0) best = prob_floor;  // empty trace sentinel
    return std::log(best);
}

}  // namespace

double generalized_verify(const std::string& goal, const std::string& statement,
                          const VerificationModel& verifier) {
    if (!verifier.has_contradiction()) {
        throw ContradictionUnsupported("backend exposes no contradiction probability");
    }
    return std::max(verifier.entail_prob(goal, statement), verifier.contradict_prob(goal, statement));
}

std::string RolloutMemo::key(const Theory& theory, const std::string& goal, int depth,
                             bool use_contradiction) {
    std::string k;
    k.reserve(goal.size() + theory.size() * 24);
    for (const auto& st : theory.statements()) {
        k += st.text;
        k += '\x1f';
    }
    k += '\x1e';
    k += goal;
    k += '\x1e';
    k += std::to_string(depth);
    k += use_contradiction ? "+c" : "-c";
    return k;
}

const RollOutTrace* RolloutMemo::find(const std::string& key) const {
    auto it = cache_.find(key);
    return it == cache_.end() ? nullptr : &it->second;
}

void RolloutMemo::insert(const std::string& key, RollOutTrace trace) {
    cache_.emplace(key, std::move(trace));
}

RollOutTrace roll_out(const Theory& theory, const std::string& goal, const SelectionModel& sel,
                      const DeductionModel& ded, const VerificationModel& ver, int depth,
                      const EngineConfig& cfg, OpCounts* ops, RolloutMemo* memo) {
    if (depth < 1) throw PreconditionViolated("roll_out depth must be >= 1");

    std::string key;
    if (memo != nullptr) {
        key = RolloutMemo::key(theory, goal, depth, cfg.use_contradiction);
        if (const RollOutTrace* hit = memo->find(key)) {
            if (ops != nullptr) {
                *ops += hit->cost;
                ops->rollout_cache_hits += 1;
            }
            return *hit;
        }
    }

    RollOutTrace trace;
    trace.depth = depth;
    Theory scratch = theory;  // the caller's theory stays untouched
    const SelectionLimits limits = limits_from(cfg);
    for (int d = 1; d <= depth; ++d) {
        Selection next_sel = one_best_select(scratch, goal, sel, limits);
        trace.cost.select += 1;
        Deduction next_ded;
        try {
            next_ded = one_best_deduce(scratch, next_sel, ded);
            trace.cost.deduce += 1;
        } catch (const NoDeduction&) {
            trace.cost.deduce += 1;
            trace.truncated = true;
            break;
        }
        scratch = scratch.extended_with(next_ded.text);
        trace.entries.push_back(score_entry(goal, next_ded.text, ver, cfg));
        trace.cost.verify += 1;
    }
    trace.score = trace_score(trace.entries, 0.0, cfg.prob_floor);

    if (ops != nullptr) *ops += trace.cost;
    if (memo != nullptr) memo->insert(key, trace);
    return trace;
}

std::vector<PlannedSelection> plan_selections(const Theory& theory, const std::string& goal,
                                              std::vector<Selection> candidates,
                                              const SelectionModel& sel, const DeductionModel& ded,
                                              const VerificationModel& ver, const EngineConfig& cfg,
                                              OpCounts* ops, RolloutMemo* memo) {
    if (candidates.empty()) throw PreconditionViolated("plan_selections needs candidates");

    std::vector<PlannedSelection> planned;
    planned.reserve(candidates.size());
    for (auto& cand : candidates) {
        PlannedSelection p;
        p.base_u = cand.u;
        p.selection = std::move(cand);
        try {
            std::optional<RolloutEntry> hypo;
            try {
                Deduction hypo_ded = one_best_deduce(theory, p.selection, ded);
                if (ops != nullptr) ops->aux_deduce += 1;
                hypo = score_entry(goal, hypo_ded.text, ver, cfg);
                if (ops != nullptr) ops->aux_verify += 1;
            } catch (const NoDeduction&) {
                if (ops != nullptr) ops->aux_deduce += 1;
                // no next deduction exists: delta falls back to the floor sentinel
            }
            if (hypo) {
                p.hypothetical_text = hypo->text;
                p.hypothetical_prob = hypo->effective();
                Theory extended = theory.extended_with(hypo->text);
                p.trace = roll_out(extended, goal, sel, ded, ver, cfg.selection_depth, cfg, ops, memo);
                p.delta_u = std::max(std::log(p.hypothetical_prob), p.trace.score);
            } else {
                p.trace.depth = cfg.selection_depth;
                p.trace.score = std::log(cfg.prob_floor);
                p.trace.truncated = true;
                p.delta_u = p.trace.score;
            }
            p.selection.u = p.base_u + cfg.alpha * p.delta_u;
        } catch (const Error&) {
            p.failed = true;  // keeps its uncorrected u
            p.selection.u = p.base_u;
            p.delta_u = 0.0;
        }
        planned.push_back(std::move(p));
    }

    std::stable_sort(planned.begin(), planned.end(), [](const PlannedSelection& a, const PlannedSelection& b) {
        return a.selection.u > b.selection.u;
    });
    return planned;
}

std::vector<PlannedDeduction> plan_deductions(const Theory& theory, const std::string& goal,
                                              std::vector<Deduction> candidates,
                                              const SelectionModel& sel, const DeductionModel& ded,
                                              const VerificationModel& ver, const EngineConfig& cfg,
                                              OpCounts* ops, RolloutMemo* memo) {
    if (candidates.empty()) throw PreconditionViolated("plan_deductions needs candidates");

    std::vector<PlannedDeduction> planned;
    planned.reserve(candidates.size());
    for (auto& cand : candidates) {
        PlannedDeduction p;
        p.base_v = cand.v;
        p.deduction = std::move(cand);
        try {
            Theory extended = theory.extended_with(p.deduction.text);
            p.trace = roll_out(extended, goal, sel, ded, ver, cfg.deduction_depth, cfg, ops, memo);
            p.delta_v = p.trace.score;
            p.deduction.v = p.base_v + cfg.beta * p.delta_v;
        } catch (const Error&) {
            p.failed = true;
            p.deduction.v = p.base_v;
            p.delta_v = 0.0;
        }
        planned.push_back(std::move(p));
    }

    std::stable_sort(planned.begin(), planned.end(), [](const PlannedDeduction& a, const PlannedDeduction& b) {
        return a.deduction.v > b.deduction.v;
    });
    return planned;
}

}  // namespace proofbeam
