#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "proofbeam/errors.hpp"

namespace proofbeam {

enum class Origin { premise, deduction };

/// One sentence of a theory. Ids are dense integers assigned at ingestion;
/// deductions continue the sequence. step_index is 0 for premises and m >= 1
/// for the deduction produced at reasoning step m.
struct Statement {
    int id = 0;
    std::string text;
    Origin origin = Origin::premise;
    int step_index = 0;

    bool operator==(const Statement&) const = default;
};

/// An ordered set of statements: all premises first, then deductions ordered
/// by step_index. Immutable after construction; extension returns a new value.
class Theory {
public:
    Theory() = default;

    static Theory from_sentences(const std::vector<std::string>& premises);

    std::size_t size() const { return statements_.size(); }
    bool empty() const { return statements_.empty(); }
    const Statement& at(int id) const;
    const std::vector<Statement>& statements() const { return statements_; }

    std::size_t premise_count() const { return premise_count_; }
    int next_step_index() const { return next_step_index_; }
    bool contains_text(const std::string& text) const;

    /// New theory with one more deduction appended (id continues the sequence).
    Theory extended_with(std::string deduction_text) const;

    bool operator==(const Theory&) const = default;

private:
    std::vector<Statement> statements_;
    std::size_t premise_count_ = 0;
    int next_step_index_ = 1;
};

/// A k-premise selection (default k = 2) with its log-domain score u.
/// Scores are <= 0 before planning correction and unrestricted afterwards.
struct Selection {
    std::vector<int> member_ids;  // distinct, each resolves in the current theory
    double u = 0.0;

    bool operator==(const Selection&) const = default;
};

/// A generated sentence with its log-domain score v and the selection it was
/// drawn from.
struct Deduction {
    std::string text;
    double v = 0.0;
    Selection parent;

    bool operator==(const Deduction&) const = default;
};

using Step = std::variant<Selection, Deduction>;

/// An alternating sequence of selections and deductions over a growing
/// theory. g is the cumulative log-score of accepted steps (the buffer
/// priority); f is the proof score, the running max of verifier scores over
/// appended deductions. Values are immutable: extension returns a new path.
class ReasoningPath {
public:
    ReasoningPath() = default;
    explicit ReasoningPath(Theory initial_theory);

    const Theory& theory() const { return theory_; }
    Theory initial_theory() const;
    const std::vector<Step>& steps() const { return steps_; }
    double g() const { return g_; }
    double f() const { return f_; }

    std::size_t deduction_count() const { return deduction_count_; }
    bool expects_selection() const;  // true when steps alternate onto a selection next
    const Selection* last_selection() const;
    const Deduction* last_deduction() const;
    std::vector<const Deduction*> deductions() const;

    /// Appends a selection; g grows by sel.u. Throws AlternationViolated when
    /// the last step is already a selection.
    ReasoningPath with_selection(Selection sel) const;

    /// Appends a deduction without a verifier evaluation: g grows by ded.v and
    /// the theory gains the new sentence with the next step_index.
    ReasoningPath with_deduction(Deduction ded) const;

    /// Folds one verifier evaluation into the proof score: f' = max(f, score).
    ReasoningPath with_verifier_score(double score) const;

    bool operator==(const ReasoningPath&) const = default;

private:
    Theory theory_;             // initial theory extended with all deductions
    std::size_t initial_size_ = 0;
    std::vector<Step> steps_;
    std::size_t deduction_count_ = 0;
    double g_ = 0.0;
    double f_ = 0.0;
};

/// Appends `ded` and folds its verifier score in: g' = g + v, f' = max(f, s).
ReasoningPath extend_with_deduction(const ReasoningPath& path, Deduction ded, double ver_score);

/// Bounded max-priority collection of ongoing paths keyed on g.
/// Ties resolve FIFO: the earlier-inserted entry wins, so runs are
/// reproducible. Eviction of the minimum-priority entry is normal behavior.
class Buffer {
public:
    explicit Buffer(std::size_t capacity);

    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    void add(ReasoningPath path);

    /// Entries ordered by (g desc, insertion asc).
    std::vector<ReasoningPath> ordered() const;

private:
    struct Entry {
        ReasoningPath path;
        std::uint64_t seq;
    };

    // true if a outranks b
    static bool outranks(const Entry& a, const Entry& b);

    std::size_t capacity_;
    std::uint64_t next_seq_ = 0;
    std::vector<Entry> entries_;
};

inline Buffer buffer_add(Buffer buffer, ReasoningPath path) {
    buffer.add(std::move(path));
    return buffer;
}

/// Which statements the proof score maximizes over. deductions_only is the
/// default; full_theory also scans the initial premises.
enum class ProofScoreMode { deductions_only, full_theory };

struct EngineConfig {
    int max_steps = 20;         // M
    int beam_width = 5;         // B_inf
    int selection_width = 5;    // B_sel
    int deduction_width = 5;    // B_ded
    int selection_depth = 0;    // D_sel roll-out depth; 0 disables planning
    int deduction_depth = 0;    // D_ded roll-out depth; 0 disables planning
    double alpha = 10.0;        // scale on selection corrections
    double beta = 0.5;          // scale on deduction corrections
    int arity = 2;              // k premises per selection
    int top_premises = 4;       // candidate-pool pruning; theory size disables
    bool use_contradiction = false;
    double prob_floor = 1e-6;
    ProofScoreMode proof_score_mode = ProofScoreMode::deductions_only;
    bool dedup_deductions = false;
    std::optional<double> early_stop_f;  // stop once f reaches the threshold
    bool memoize_rollouts = true;
    std::uint64_t seed = 0;

    bool planning_enabled() const { return selection_depth > 0 || deduction_depth > 0; }

    bool operator==(const EngineConfig&) const = default;

    /// Throws InvalidConfig unless M >= 1, widths >= 1, depths >= 0 and
    /// 0 < prob_floor < 0.5.
    void validate() const;
};

/// Clamp a probability into [floor, 1 - floor] before taking logs.
double clamp_probability(double p, double prob_floor);

/// Operation tallies in the cost model of the planning analysis: one unit per
/// phase expansion call, three per roll-out cycle (its select, deduce and
/// verify), one per proof-score verification. The extra call selection
/// planning spends on each candidate's hypothetical deduction is tallied
/// separately under aux_*; roll-out cache hits replay the cost of the cached
/// trace, so tallies are independent of caching.
struct OpCounts {
    long select = 0;
    long deduce = 0;
    long verify = 0;
    long aux_deduce = 0;
    long aux_verify = 0;
    long rollout_cache_hits = 0;

    long total() const { return select + deduce + verify; }

    OpCounts& operator+=(const OpCounts& o) {
        select += o.select;
        deduce += o.deduce;
        verify += o.verify;
        aux_deduce += o.aux_deduce;
        aux_verify += o.aux_verify;
        rollout_cache_hits += o.rollout_cache_hits;
        return *this;
    }
};

}  // namespace proofbeam
