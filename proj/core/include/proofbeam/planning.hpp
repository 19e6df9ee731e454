#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "proofbeam/models.hpp"

namespace proofbeam {

struct RolloutEntry {
    std::string text;
    double p_ver = 0.0;
    std::optional<double> p_con;  // present when the generalized score is in use

    /// max(p_ver, p_con) when a contradiction probability exists, else p_ver.
    double effective() const { return p_con ? std::max(p_ver, *p_con) : p_ver; }
};

/// Record of one D-step greedy look-ahead. score is the log of the best
/// effective verifier probability over the trace; an empty trace scores
/// log(prob_floor). cost is what executing the trace spent, replayed on
/// cache hits.
struct RollOutTrace {
    int depth = 0;  // requested depth D
    std::vector<RolloutEntry> entries;
    double score = 0.0;
    bool truncated = false;  // a cycle ended early with no deduction
    OpCounts cost;
};

/// Per-phase cache of roll-out traces keyed on the scratch theory, goal and
/// depth. Purely an execution shortcut: backends are pure, so a cached trace
/// equals a recomputed one.
class RolloutMemo {
public:
    static std::string key(const Theory& theory, const std::string& goal, int depth,
                           bool use_contradiction);
    const RollOutTrace* find(const std::string& key) const;
    void insert(const std::string& key, RollOutTrace trace);

private:
    std::unordered_map<std::string, RollOutTrace> cache_;
};

/// max(p_ver, p_con) for backends that expose a contradiction probability.
/// Throws ContradictionUnsupported otherwise.
double generalized_verify(const std::string& goal, const std::string& statement,
                          const VerificationModel& verifier);

/// Performs `depth` greedy select->deduce cycles on a scratch copy of the
/// theory, scoring each new deduction with the verifier (generalized score
/// when cfg.use_contradiction). The caller's theory is never modified. A
/// NoDeduction mid-way truncates the trace; what exists is scored.
RollOutTrace roll_out(const Theory& theory, const std::string& goal, const SelectionModel& sel,
                      const DeductionModel& ded, const VerificationModel& ver, int depth,
                      const EngineConfig& cfg, OpCounts* ops = nullptr, RolloutMemo* memo = nullptr);

struct PlannedSelection {
    Selection selection;  // u already corrected by alpha * delta
    double base_u = 0.0;
    double delta_u = 0.0;
    std::string hypothetical_text;  // the candidate's one-best next deduction
    double hypothetical_prob = 0.0;
    RollOutTrace trace;
    bool failed = false;  // backend error: kept its uncorrected u
};

/// Re-ranks candidate selections by look-ahead. Each candidate's hypothetical
/// one-best deduction extends a scratch theory that is then rolled out
/// cfg.selection_depth cycles; delta_u is the log of the best verifier score
/// over the hypothetical deduction and the rolled-out ones, and
/// u <- u + alpha * delta_u. Output sorted by corrected u descending, ties by
/// input order. A candidate whose hypothetical deduction does not exist gets
/// delta_u = log(prob_floor); a candidate hitting a backend error keeps its
/// uncorrected u and is flagged. Either way the phase continues.
std::vector<PlannedSelection> plan_selections(const Theory& theory, const std::string& goal,
                                              std::vector<Selection> candidates,
                                              const SelectionModel& sel, const DeductionModel& ded,
                                              const VerificationModel& ver, const EngineConfig& cfg,
                                              OpCounts* ops = nullptr, RolloutMemo* memo = nullptr);

struct PlannedDeduction {
    Deduction deduction;  // v already corrected by beta * delta
    double base_v = 0.0;
    double delta_v = 0.0;
    RollOutTrace trace;
    bool failed = false;
};

/// Re-ranks candidate deductions: each one extends a scratch theory that is
/// rolled out cfg.deduction_depth cycles, and v <- v + beta * delta_v.
/// Ordering and failure handling as in plan_selections.
std::vector<PlannedDeduction> plan_deductions(const Theory& theory, const std::string& goal,
                                              std::vector<Deduction> candidates,
                                              const SelectionModel& sel, const DeductionModel& ded,
                                              const VerificationModel& ver, const EngineConfig& cfg,
                                              OpCounts* ops = nullptr, RolloutMemo* memo = nullptr);

}  // namespace proofbeam
