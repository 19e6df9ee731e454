#include "proofbeam/inference.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace proofbeam {

namespace {

CandidateRecord record_of(const PlannedSelection& p) {
    CandidateRecord r;
    r.member_ids = p.selection.member_ids;
    r.base_score = p.base_u;
    r.delta = p.delta_u;
    r.corrected_score = p.selection.u;
    r.hypothetical_text = p.hypothetical_text;
    r.hypothetical_prob = p.hypothetical_prob;
    r.trace = p.trace;
    r.failed = p.failed;
    return r;
}

CandidateRecord record_of(const PlannedDeduction& p) {
    CandidateRecord r;
    r.text = p.deduction.text;
    r.base_score = p.base_v;
    r.delta = p.delta_v;
    r.corrected_score = p.deduction.v;
    r.trace = p.trace;
    r.failed = p.failed;
    return r;
}

std::string step_context(const char* phase, int step, const std::string& detail) {
    std::string msg = std::string(phase) + " phase produced no candidates at step " + std::to_string(step);
    if (!detail.empty()) msg += ": " + detail;
    return msg;
}

}  // namespace

InferenceResult infer(const Theory& theory, const std::string& goal, const SelectionModel& sel,
                      const DeductionModel& ded, const VerificationModel& ver,
                      const EngineConfig& cfg) {
    cfg.validate();
    if (theory.size() < static_cast<std::size_t>(cfg.arity)) {
        throw TheoryTooSmall("theory of " + std::to_string(theory.size()) +
                             " statements cannot support arity " + std::to_string(cfg.arity));
    }

    InferenceResult result;
    const SelectionLimits limits{cfg.selection_width, cfg.arity, cfg.top_premises, cfg.prob_floor};

    Buffer buffer(static_cast<std::size_t>(cfg.beam_width));
    ReasoningPath root(theory);
    if (cfg.proof_score_mode == ProofScoreMode::full_theory) {
        // premises participate in the proof score under the full-theory mode
        double f0 = 0.0;
        for (const auto& st : theory.statements()) {
            f0 = std::max(f0, ver.entail_prob(goal, st.text));
            result.op_counts.verify += 1;
        }
        root = root.with_verifier_score(f0);
    }
    buffer.add(std::move(root));

    for (int m = 1; m <= cfg.max_steps; ++m) {
        StepStats stats;

        // -- selection phase --
        {
            auto paths = buffer.ordered();
            Buffer next(static_cast<std::size_t>(cfg.beam_width));
            RolloutMemo memo;
            int survivors = 0;
            std::string first_error;
            for (std::size_t pi = 0; pi < paths.size(); ++pi) {
                const ReasoningPath& path = paths[pi];
                try {
                    auto candidates = sel.propose(path.theory(), goal, limits);
                    stats.ops.select += 1;
                    if (candidates.empty()) continue;
                    PhaseRecord rec{m, true, static_cast<int>(pi), {}};
                    if (cfg.selection_depth > 0) {
                        auto planned =
                            plan_selections(path.theory(), goal, std::move(candidates), sel, ded,
                                            ver, cfg, &stats.ops,
                                            cfg.memoize_rollouts ? &memo : nullptr);
                        for (auto& p : planned) {
                            rec.candidates.push_back(record_of(p));
                            next.add(path.with_selection(std::move(p.selection)));
                            ++survivors;
                        }
                    } else {
                        for (auto& c : candidates) {
                            CandidateRecord r;
                            r.member_ids = c.member_ids;
                            r.base_score = c.u;
                            r.corrected_score = c.u;
                            rec.candidates.push_back(std::move(r));
                            next.add(path.with_selection(std::move(c)));
                            ++survivors;
                        }
                    }
                    result.provenance.push_back(std::move(rec));
                } catch (const Error& e) {
                    if (first_error.empty()) first_error = e.what();
                }
            }
            if (survivors == 0) {
                throw BackendFailure(step_context("selection", m, first_error));
            }
            buffer = std::move(next);
            stats.kept_after_selection = static_cast<int>(buffer.size());
        }

        // -- deduction phase --
        {
            auto paths = buffer.ordered();
            Buffer next(static_cast<std::size_t>(cfg.beam_width));
            RolloutMemo memo;
            int survivors = 0;
            std::string first_error;
            for (std::size_t pi = 0; pi < paths.size(); ++pi) {
                const ReasoningPath& path = paths[pi];
                try {
                    const Selection* last_sel = path.last_selection();
                    auto scored = ded.deduce(selection_texts(path.theory(), *last_sel),
                                             cfg.deduction_width);
                    stats.ops.deduce += 1;
                    std::vector<Deduction> candidates;
                    candidates.reserve(scored.size());
                    for (auto& sd : scored) {
                        if (cfg.dedup_deductions && path.theory().contains_text(sd.text)) continue;
                        candidates.push_back(Deduction{std::move(sd.text), sd.logprob, *last_sel});
                    }
                    if (candidates.empty()) continue;  // nothing to deduce: path drops out
                    PhaseRecord rec{m, false, static_cast<int>(pi), {}};
                    if (cfg.deduction_depth > 0) {
                        auto planned =
                            plan_deductions(path.theory(), goal, std::move(candidates), sel, ded,
                                            ver, cfg, &stats.ops,
                                            cfg.memoize_rollouts ? &memo : nullptr);
                        for (auto& p : planned) {
                            rec.candidates.push_back(record_of(p));
                            next.add(path.with_deduction(std::move(p.deduction)));
                            ++survivors;
                        }
                    } else {
                        for (auto& d : candidates) {
                            CandidateRecord r;
                            r.text = d.text;
                            r.base_score = d.v;
                            r.corrected_score = d.v;
                            rec.candidates.push_back(std::move(r));
                            next.add(path.with_deduction(std::move(d)));
                            ++survivors;
                        }
                    }
                    result.provenance.push_back(std::move(rec));
                } catch (const Error& e) {
                    if (first_error.empty()) first_error = e.what();
                }
            }
            if (survivors == 0) {
                throw BackendFailure(step_context("deduction", m, first_error));
            }
            buffer = std::move(next);
            stats.kept_after_deduction = static_cast<int>(buffer.size());
        }

        // -- proof-score update on each kept path's newest deduction --
        {
            auto paths = buffer.ordered();
            Buffer rescored(static_cast<std::size_t>(cfg.beam_width));
            for (const auto& path : paths) {
                const Deduction* newest = path.last_deduction();
                const double score = ver.entail_prob(goal, newest->text);
                stats.ops.verify += 1;
                rescored.add(path.with_verifier_score(score));
            }
            buffer = std::move(rescored);
        }

        result.op_counts += stats.ops;
        result.per_step.push_back(stats);
        result.steps_run = m;

        if (cfg.early_stop_f) {
            double best = 0.0;
            for (const auto& p : buffer.ordered()) best = std::max(best, p.f());
            if (best >= *cfg.early_stop_f) break;
        }
    }

    result.final_paths = buffer.ordered();
    const ReasoningPath* best = &result.final_paths.front();
    for (const auto& p : result.final_paths) {
        if (p.f() > best->f()) best = &p;
    }
    result.best_path = *best;
    result.f = best->f();
    return result;
}

OperationCountReport step_operation_count(const EngineConfig& cfg) {
    OperationCountReport report;
    const long b = cfg.beam_width;
    report.base = 3 * b;
    report.planning = 3 * b + 3 * b * b * (cfg.selection_depth + cfg.deduction_depth);
    report.ratio = static_cast<double>(report.planning) / static_cast<double>(report.base);
    return report;
}

double proof_score(const ReasoningPath& path, const std::string& goal,
                   const VerificationModel& verifier, ProofScoreMode mode) {
    double best = 0.0;
    if (mode == ProofScoreMode::full_theory) {
        for (const auto& st : path.theory().statements()) {
            best = std::max(best, verifier.entail_prob(goal, st.text));
        }
        return best;
    }
    for (const Deduction* ded : path.deductions()) {
        best = std::max(best, verifier.entail_prob(goal, ded->text));
    }
    return best;
}

}  // namespace proofbeam
