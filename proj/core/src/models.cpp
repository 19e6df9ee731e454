#include "proofbeam/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace proofbeam {

namespace {

void check_index(const PremiseProbabilities& probs, int i) {
    if (i < 0 || static_cast<std::size_t>(i) >= probs.size()) {
        throw IndexOutOfRange("premise index " + std::to_string(i) + " outside [0, " +
                              std::to_string(probs.size()) + ")");
    }
}

// Next k-combination of pool indices in lexicographic order.
bool next_combination(std::vector<std::size_t>& comb, std::size_t n) {
    const std::size_t k = comb.size();
    for (std::size_t i = k; i-- > 0;) {
        if (comb[i] < n - (k - i)) {
            ++comb[i];
            for (std::size_t j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

double subset_selection_score(const PremiseProbabilities& probs, const std::vector<int>& member_ids) {
    std::vector<bool> selected(probs.size(), false);
    for (int id : member_ids) {
        check_index(probs, id);
        if (selected[static_cast<std::size_t>(id)]) {
            throw IndexOutOfRange("duplicate member id " + std::to_string(id));
        }
        selected[static_cast<std::size_t>(id)] = true;
    }
    double score = 0.0;
    for (std::size_t n = 0; n < probs.size(); ++n) {
        score += selected[n] ? std::log(probs.probs[n]) : std::log1p(-probs.probs[n]);
    }
    return score;
}

double pair_selection_score(const PremiseProbabilities& probs, int i, int j) {
    if (i == j) throw IndexOutOfRange("pair indices must differ");
    return subset_selection_score(probs, {i, j});
}

std::vector<Selection> enumerate_pair_selections(const PremiseProbabilities& probs,
                                                 const SelectionLimits& limits) {
    const std::size_t n = probs.size();
    const std::size_t k = static_cast<std::size_t>(limits.arity);
    if (n < k) {
        throw TheoryTooSmall("theory has " + std::to_string(n) + " statements; selection needs " +
                             std::to_string(k));
    }

    // Candidate pool: top_premises statements by probability, ties by index.
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    std::stable_sort(pool.begin(), pool.end(), [&](int a, int b) {
        return probs.probs[static_cast<std::size_t>(a)] > probs.probs[static_cast<std::size_t>(b)];
    });
    const std::size_t pool_size = std::min<std::size_t>(
        n, std::max<std::size_t>(k, static_cast<std::size_t>(limits.top_premises)));
    pool.resize(pool_size);
    std::sort(pool.begin(), pool.end());

    std::vector<Selection> all;
    std::vector<std::size_t> comb(k);
    std::iota(comb.begin(), comb.end(), 0);
    do {
        Selection sel;
        sel.member_ids.reserve(k);
        for (std::size_t c : comb) sel.member_ids.push_back(pool[c]);
        sel.u = subset_selection_score(probs, sel.member_ids);
        all.push_back(std::move(sel));
    } while (next_combination(comb, pool_size));

    std::stable_sort(all.begin(), all.end(), [](const Selection& a, const Selection& b) {
        if (a.u != b.u) return a.u > b.u;
        return a.member_ids < b.member_ids;  // lexicographic tie-break
    });
    if (all.size() > static_cast<std::size_t>(limits.max_candidates)) {
        all.resize(static_cast<std::size_t>(limits.max_candidates));
    }
    return all;
}

std::vector<Selection> PremiseScoringSelectionModel::propose(const Theory& theory,
                                                             const std::string& goal,
                                                             const SelectionLimits& limits) const {
    PremiseProbabilities probs = premise_probabilities(theory, goal);
    for (double& p : probs.probs) p = clamp_probability(p, limits.prob_floor);
    return enumerate_pair_selections(probs, limits);
}

Selection one_best_select(const Theory& theory, const std::string& goal,
                          const SelectionModel& model, const SelectionLimits& limits) {
    SelectionLimits one = limits;
    one.max_candidates = 1;
    auto proposals = model.propose(theory, goal, one);
    if (proposals.empty()) {
        throw BackendFailure("selection backend returned no proposals");
    }
    return proposals.front();
}

Deduction one_best_deduce(const Theory& theory, const Selection& selection,
                          const DeductionModel& model, int max_candidates) {
    auto scored = model.deduce(selection_texts(theory, selection), max_candidates);
    if (scored.empty()) {
        throw NoDeduction("deduction backend returned an empty list");
    }
    return Deduction{scored.front().text, scored.front().logprob, selection};
}

std::vector<std::string> selection_texts(const Theory& theory, const Selection& selection) {
    std::vector<std::string> texts;
    texts.reserve(selection.member_ids.size());
    for (int id : selection.member_ids) texts.push_back(theory.at(id).text);
    return texts;
}

}  // namespace proofbeam
