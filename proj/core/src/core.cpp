#include "proofbeam/core.hpp"

#include <algorithm>
#include <utility>

namespace proofbeam {

Theory Theory::from_sentences(const std::vector<std::string>& premises) {
    Theory t;
    t.statements_.reserve(premises.size());
    int id = 0;
    for (const auto& text : premises) {
        t.statements_.push_back(Statement{id++, text, Origin::premise, 0});
    }
    t.premise_count_ = premises.size();
    t.next_step_index_ = 1;
    return t;
}

const Statement& Theory::at(int id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= statements_.size()) {
        throw IndexOutOfRange("statement id " + std::to_string(id) + " outside theory of size " +
                              std::to_string(statements_.size()));
    }
    return statements_[static_cast<std::size_t>(id)];
}

bool Theory::contains_text(const std::string& text) const {
    return std::any_of(statements_.begin(), statements_.end(),
                       [&](const Statement& s) { return s.text == text; });
}

Theory Theory::extended_with(std::string deduction_text) const {
    Theory t = *this;
    const int id = static_cast<int>(t.statements_.size());
    t.statements_.push_back(Statement{id, std::move(deduction_text), Origin::deduction, t.next_step_index_});
    t.next_step_index_ += 1;
    return t;
}

ReasoningPath::ReasoningPath(Theory initial_theory)
    : theory_(std::move(initial_theory)), initial_size_(theory_.size()) {}

Theory ReasoningPath::initial_theory() const {
    std::vector<std::string> premises;
    premises.reserve(initial_size_);
    for (std::size_t i = 0; i < initial_size_; ++i) {
        premises.push_back(theory_.statements()[i].text);
    }
    return Theory::from_sentences(premises);
}

bool ReasoningPath::expects_selection() const {
    return steps_.empty() || std::holds_alternative<Deduction>(steps_.back());
}

const Selection* ReasoningPath::last_selection() const {
    for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
        if (const auto* sel = std::get_if<Selection>(&*it)) return sel;
    }
    return nullptr;
}

const Deduction* ReasoningPath::last_deduction() const {
    for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
        if (const auto* ded = std::get_if<Deduction>(&*it)) return ded;
    }
    return nullptr;
}

std::vector<const Deduction*> ReasoningPath::deductions() const {
    std::vector<const Deduction*> out;
    out.reserve(deduction_count_);
    for (const auto& step : steps_) {
        if (const auto* ded = std::get_if<Deduction>(&step)) out.push_back(ded);
    }
    return out;
}

ReasoningPath ReasoningPath::with_selection(Selection sel) const {
    if (!expects_selection()) {
        throw AlternationViolated("selection appended after a selection");
    }
    ReasoningPath next = *this;
    next.g_ += sel.u;
    next.steps_.emplace_back(std::move(sel));
    return next;
}

ReasoningPath ReasoningPath::with_deduction(Deduction ded) const {
    if (expects_selection()) {
        throw AlternationViolated("deduction appended without a preceding selection");
    }
    ReasoningPath next = *this;
    next.g_ += ded.v;
    next.theory_ = next.theory_.extended_with(ded.text);
    next.deduction_count_ += 1;
    next.steps_.emplace_back(std::move(ded));
    return next;
}

ReasoningPath ReasoningPath::with_verifier_score(double score) const {
    ReasoningPath next = *this;
    next.f_ = std::max(next.f_, score);
    return next;
}

ReasoningPath extend_with_deduction(const ReasoningPath& path, Deduction ded, double ver_score) {
    return path.with_deduction(std::move(ded)).with_verifier_score(ver_score);
}

Buffer::Buffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ < 1) throw InvalidConfig("buffer capacity must be >= 1");
    entries_.reserve(capacity_ + 1);
}

bool Buffer::outranks(const Entry& a, const Entry& b) {
    if (a.path.g() != b.path.g()) return a.path.g() > b.path.g();
    return a.seq < b.seq;  // earlier insertion wins ties
}

void Buffer::add(ReasoningPath path) {
    entries_.push_back(Entry{std::move(path), next_seq_++});
    if (entries_.size() <= capacity_) return;
    auto lowest = std::max_element(entries_.begin(), entries_.end(),
                                   [](const Entry& a, const Entry& b) { return outranks(a, b); });
    entries_.erase(lowest);
}

std::vector<ReasoningPath> Buffer::ordered() const {
    std::vector<const Entry*> by_rank;
    by_rank.reserve(entries_.size());
    for (const auto& e : entries_) by_rank.push_back(&e);
    std::sort(by_rank.begin(), by_rank.end(),
              [](const Entry* a, const Entry* b) { return outranks(*a, *b); });
    std::vector<ReasoningPath> out;
    out.reserve(by_rank.size());
    for (const Entry* e : by_rank) out.push_back(e->path);
    return out;
}

void EngineConfig::validate() const {
    if (max_steps < 1) throw InvalidConfig("max_steps must be >= 1");
    if (beam_width < 1 || selection_width < 1 || deduction_width < 1) {
        throw InvalidConfig("beam widths must be >= 1");
    }
    if (selection_depth < 0 || deduction_depth < 0) {
        throw InvalidConfig("roll-out depths must be >= 0");
    }
    if (arity < 1) throw InvalidConfig("selection arity must be >= 1");
    if (top_premises < arity) throw InvalidConfig("top_premises must be >= arity");
    if (!(prob_floor > 0.0 && prob_floor < 0.5)) {
        throw InvalidConfig("prob_floor must lie in (0, 0.5)");
    }
}

double clamp_probability(double p, double prob_floor) {
    return std::clamp(p, prob_floor, 1.0 - prob_floor);
}

}  // namespace proofbeam
