#pragma once

#include <string>
#include <vector>

#include "proofbeam/planning.hpp"

namespace proofbeam {

/// Provenance for one candidate expansion examined during a phase.
struct CandidateRecord {
    std::vector<int> member_ids;  // selection candidates
    std::string text;             // deduction candidates
    double base_score = 0.0;
    double delta = 0.0;
    double corrected_score = 0.0;
    std::string hypothetical_text;  // selection planning only
    double hypothetical_prob = 0.0;
    RollOutTrace trace;  // empty when planning is off
    bool failed = false;
};

/// Provenance for one path's expansion within a phase.
struct PhaseRecord {
    int step = 0;  // 1-based
    bool selection_phase = true;
    int path_rank = 0;  // position of the expanded path in the buffer order
    std::vector<CandidateRecord> candidates;
};

struct StepStats {
    OpCounts ops;
    int kept_after_selection = 0;
    int kept_after_deduction = 0;
};

struct InferenceResult {
    ReasoningPath best_path;
    double f = 0.0;
    std::vector<ReasoningPath> final_paths;  // buffer contents in priority order
    OpCounts op_counts;
    std::vector<StepStats> per_step;
    std::vector<PhaseRecord> provenance;
    int steps_run = 0;
};

/// Beam inference: alternating selection and deduction phases over a buffer
/// of ongoing paths, proof scores updated on each kept path's newest
/// deduction, best-f path returned. Planning re-ranks candidates when the
/// configured roll-out depths are positive. With beam_width 1 this reduces to
/// chained one-best decoding.
InferenceResult infer(const Theory& theory, const std::string& goal, const SelectionModel& sel,
                      const DeductionModel& ded, const VerificationModel& ver,
                      const EngineConfig& cfg);

/// Per-step operation counts in the cost model of the planning analysis.
struct OperationCountReport {
    long base = 0;      // 3B
    long planning = 0;  // 3B + 3B^2 (D_sel + D_ded)
    double ratio = 1.0;
};

OperationCountReport step_operation_count(const EngineConfig& cfg);

/// Recomputes the proof score from scratch: the max verifier probability over
/// the path's deductions (or over the whole extended theory in full_theory
/// mode); 0 for a path with no deductions.
double proof_score(const ReasoningPath& path, const std::string& goal,
                   const VerificationModel& verifier,
                   ProofScoreMode mode = ProofScoreMode::deductions_only);

}  // namespace proofbeam
