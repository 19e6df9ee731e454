#include "proofbeam/synthlogic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

namespace proofbeam::synth {

namespace {

const std::vector<std::string>& category_pool() {
    static const std::vector<std::string> pool = {
        "wumpus",  "vumpus",  "zumpus",  "numpus",  "dumpus",  "yumpus",  "rompus",
        "jompus",  "impus",   "tumpus",  "grimpus", "lorpus",  "shumpus", "brimpus",
        "sterpus", "felpus",  "quimpus", "dolpus",  "harpus",  "lempus",
    };
    return pool;
}

const std::vector<std::string>& adjective_pool() {
    static const std::vector<std::string> pool = {
        "earthy",  "bitter", "cold",  "aggressive", "opaque", "metallic", "hot",
        "red",     "small",  "dull",  "shy",        "floral", "kind",     "brown",
        "fast",    "sweet",  "spicy", "mellow",     "pale",   "luminous",
    };
    return pool;
}

const std::vector<std::string>& name_pool() {
    static const std::vector<std::string> pool = {
        "Alex", "Sally", "Polly", "Sam", "Max", "Rex", "Fae", "Wren", "Stella", "Milo",
    };
    return pool;
}

bool starts_with_vowel(const std::string& word) {
    if (word.empty()) return false;
    switch (word.front()) {
        case 'a': case 'e': case 'i': case 'o': case 'u':
        case 'A': case 'E': case 'I': case 'O': case 'U':
            return true;
        default:
            return false;
    }
}

std::string article(const std::string& noun) { return starts_with_vowel(noun) ? "an" : "a"; }

std::vector<std::string> split_words(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

// Deterministic draws independent of standard-library distribution details.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(gen_() % n); }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace

std::string render(const EntityFact& f) {
    return f.entity + " is " + article(f.category) + " " + f.category + ".";
}

std::string render(const AttributeFact& f) {
    return f.entity + " is " + (f.negated ? "not " : "") + f.adjective + ".";
}

std::string render(const SubtypeRule& r) {
    return "Each " + r.from + " is " + article(r.to) + " " + r.to + ".";
}

std::string render(const AttributeRule& r) {
    return "Every " + r.category + " is " + (r.negated ? "not " : "") + r.adjective + ".";
}

ParsedSentence parse_sentence(const std::string& sentence) {
    const auto fail = [&]() -> ParsedSentence {
        throw GrammarError("sentence outside the synthetic grammar: \"" + sentence + "\"");
    };
    if (sentence.empty() || sentence.back() != '.') return fail();
    const auto words = split_words(sentence.substr(0, sentence.size() - 1));
    if (words.size() < 3) return fail();

    ParsedSentence out;
    if (words[0] == "Each") {
        // Each <A> is a <B>
        if (words.size() == 5 && words[2] == "is" && (words[3] == "a" || words[3] == "an")) {
            out.subtype_rule = SubtypeRule{words[1], words[4]};
            return out;
        }
        return fail();
    }
    if (words[0] == "Every") {
        if (words.size() == 4 && words[2] == "is") {
            out.attribute_rule = AttributeRule{words[1], words[3], false};
            return out;
        }
        if (words.size() == 5 && words[2] == "is" && words[3] == "not") {
            out.attribute_rule = AttributeRule{words[1], words[4], true};
            return out;
        }
        return fail();
    }
    // entity forms: name starts uppercase
    if (words[1] != "is" || words[0].empty() || std::islower(static_cast<unsigned char>(words[0][0]))) {
        return fail();
    }
    if (words.size() == 4 && (words[2] == "a" || words[2] == "an")) {
        out.entity_fact = EntityFact{words[0], words[3]};
        return out;
    }
    if (words.size() == 3) {
        out.attribute_fact = AttributeFact{words[0], words[2], false};
        return out;
    }
    if (words.size() == 4 && words[2] == "not") {
        out.attribute_fact = AttributeFact{words[0], words[3], true};
        return out;
    }
    return fail();
}

namespace {

struct ChainData {
    std::set<std::string> closure;
    // derived sentence -> (producing fact sentence, rule statement id)
    std::map<std::string, std::pair<std::string, int>> parent;
};

ChainData chain_with_parents(const Theory& theory) {
    std::vector<std::pair<int, SubtypeRule>> subtypes;
    std::vector<std::pair<int, AttributeRule>> attributes;
    std::vector<std::pair<std::string, EntityFact>> queue;  // category facts to expand
    ChainData out;

    for (const auto& st : theory.statements()) {
        const ParsedSentence p = parse_sentence(st.text);
        if (p.entity_fact) {
            if (out.closure.insert(st.text).second) queue.emplace_back(st.text, *p.entity_fact);
        } else if (p.attribute_fact) {
            out.closure.insert(st.text);
        } else if (p.subtype_rule) {
            subtypes.emplace_back(st.id, *p.subtype_rule);
        } else if (p.attribute_rule) {
            attributes.emplace_back(st.id, *p.attribute_rule);
        }
    }

    for (std::size_t head = 0; head < queue.size(); ++head) {
        const auto [fact_sentence, fact] = queue[head];
        for (const auto& [rule_id, rule] : subtypes) {
            if (rule.from != fact.category) continue;
            const EntityFact derived{fact.entity, rule.to};
            const std::string text = render(derived);
            if (out.closure.insert(text).second) {
                out.parent.emplace(text, std::make_pair(fact_sentence, rule_id));
                queue.emplace_back(text, derived);
            }
        }
        for (const auto& [rule_id, rule] : attributes) {
            if (rule.category != fact.category) continue;
            const std::string text = render(AttributeFact{fact.entity, rule.adjective, rule.negated});
            if (out.closure.insert(text).second) {
                out.parent.emplace(text, std::make_pair(fact_sentence, rule_id));
            }
        }
    }
    return out;
}

int first_statement_with_text(const Theory& theory, const std::string& text) {
    for (const auto& st : theory.statements()) {
        if (st.text == text) return st.id;
    }
    return -1;
}

}  // namespace

std::set<std::string> forward_chain(const Theory& theory) {
    return chain_with_parents(theory).closure;
}

bool is_provable(const Theory& theory, const std::string& goal) {
    return forward_chain(theory).count(goal) > 0;
}

std::optional<NextApplication> next_application(const Theory& theory, const std::string& target) {
    if (theory.contains_text(target)) return std::nullopt;
    const ChainData chain = chain_with_parents(theory);
    if (chain.closure.count(target) == 0) return std::nullopt;

    // ascend to the earliest conclusion whose producing fact is already present
    std::string cur = target;
    while (true) {
        const auto& [fact_sentence, rule_id] = chain.parent.at(cur);
        const int fact_id = first_statement_with_text(theory, fact_sentence);
        if (fact_id >= 0) {
            return NextApplication{fact_id, rule_id, cur};
        }
        cur = fact_sentence;
    }
}

std::optional<std::string> modus_ponens(const std::vector<std::string>& texts) {
    std::vector<EntityFact> facts;
    std::vector<SubtypeRule> subtypes;
    std::vector<AttributeRule> attributes;
    std::vector<int> fact_order, sub_order, attr_order;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        ParsedSentence p;
        try {
            p = parse_sentence(texts[i]);
        } catch (const GrammarError&) {
            continue;  // tolerate free-form text in selections
        }
        if (p.entity_fact) facts.push_back(*p.entity_fact);
        if (p.subtype_rule) subtypes.push_back(*p.subtype_rule);
        if (p.attribute_rule) attributes.push_back(*p.attribute_rule);
    }
    for (const auto& fact : facts) {
        for (const auto& rule : subtypes) {
            if (rule.from == fact.category) return render(EntityFact{fact.entity, rule.to});
        }
        for (const auto& rule : attributes) {
            if (rule.category == fact.category) {
                return render(AttributeFact{fact.entity, rule.adjective, rule.negated});
            }
        }
    }
    return std::nullopt;
}

SyntheticInstance generate_instance(int depth, int num_distractors, bool provable,
                                    std::uint64_t seed) {
    if (depth < 1) throw PreconditionViolated("instance depth must be >= 1");
    Rng rng(seed);

    auto cats = category_pool();
    rng.shuffle(cats);
    auto adjs = adjective_pool();
    rng.shuffle(adjs);
    const std::string name = name_pool()[rng.below(name_pool().size())];
    const std::string target_adj = adjs[0];

    const std::size_t chain_len = static_cast<std::size_t>(depth);
    std::vector<std::string> chain(cats.begin(), cats.begin() + static_cast<long>(chain_len));

    std::vector<std::string> sentences;
    sentences.push_back(render(EntityFact{name, chain[0]}));
    for (std::size_t i = 0; i + 1 < chain_len; ++i) {
        sentences.push_back(render(SubtypeRule{chain[i], chain[i + 1]}));
    }
    sentences.push_back(render(AttributeRule{chain[chain_len - 1], target_adj, false}));
    // one reachable negated attribute on the chain: a true but goal-irrelevant
    // fact that lexically collides with negated goals
    const std::string near_adj = adjs[1];
    sentences.push_back(render(AttributeRule{chain[std::min<std::size_t>(1, chain_len - 1)],
                                             near_adj, true}));

    // Distractor branches over categories unreachable from the entity's chain.
    const std::size_t fresh_count = cats.size() - chain_len;
    auto fresh_cat = [&](std::size_t k) { return cats[chain_len + (k % fresh_count)]; };
    std::size_t next_fresh = 0;
    std::size_t next_adj = 2;  // 0 is the target, 1 the reachable negated one
    std::string offbranch_adj;
    for (int d = 0; d < num_distractors; ++d) {
        switch (d % 3) {
            case 0: {
                const std::string from = fresh_cat(next_fresh);
                const std::string to = fresh_cat(next_fresh + 1);
                next_fresh += 1;
                sentences.push_back(render(SubtypeRule{from, to}));
                break;
            }
            case 1: {
                const std::string adj = adjs[next_adj % adjs.size()];
                next_adj += 1;
                if (offbranch_adj.empty()) offbranch_adj = adj;
                sentences.push_back(render(AttributeRule{fresh_cat(next_fresh), adj, false}));
                next_fresh += 1;
                break;
            }
            default: {
                sentences.push_back(render(AttributeRule{fresh_cat(next_fresh), target_adj, true}));
                next_fresh += 1;
                break;
            }
        }
    }

    rng.shuffle(sentences);
    Theory theory = Theory::from_sentences(sentences);

    SyntheticInstance instance;
    instance.depth = depth;
    instance.num_distractors = num_distractors;
    instance.seed = seed;
    instance.provable = provable;

    if (provable) {
        instance.goal = render(AttributeFact{name, target_adj, false});
        int fact_id = first_statement_with_text(theory, render(EntityFact{name, chain[0]}));
        for (int m = 1; m <= depth; ++m) {
            const bool last = m == depth;
            const std::string rule_text =
                last ? render(AttributeRule{chain[chain_len - 1], target_adj, false})
                     : render(SubtypeRule{chain[static_cast<std::size_t>(m - 1)],
                                          chain[static_cast<std::size_t>(m)]});
            const std::string conclusion =
                last ? instance.goal : render(EntityFact{name, chain[static_cast<std::size_t>(m)]});
            const int rule_id = first_statement_with_text(theory, rule_text);
            instance.gold_path.push_back(GoldStep{{fact_id, rule_id}, conclusion});
            fact_id = static_cast<int>(theory.size()) + m - 1;  // the deduction just produced
        }
    } else {
        const bool use_offbranch = !offbranch_adj.empty() && rng.below(4) == 0;
        instance.goal = use_offbranch ? render(AttributeFact{name, offbranch_adj, false})
                                      : render(AttributeFact{name, target_adj, true});
    }
    instance.theory = std::move(theory);

    if (is_provable(instance.theory, instance.goal) != provable) {
        throw Error("generator produced a mislabeled instance (seed " + std::to_string(seed) + ")");
    }
    return instance;
}

PremiseProbabilities OracleSelectionModel::premise_probabilities(const Theory& theory,
                                                                 const std::string& goal) const {
    PremiseProbabilities probs;
    probs.probs.resize(theory.size());
    for (std::size_t i = 0; i < theory.size(); ++i) {
        // eps scale, tilted by lexical relevance so ties break meaningfully
        probs.probs[i] = eps_ * (1.0 + token_jaccard(theory.statements()[i].text, goal));
    }
    std::optional<NextApplication> next;
    try {
        next = next_application(theory, goal);
    } catch (const GrammarError&) {
        next = std::nullopt;  // non-synthetic sentences: fall back to the lexical tilt
    }
    if (next) {
        probs.probs[static_cast<std::size_t>(next->fact_id)] = 1.0 - eps_;
        probs.probs[static_cast<std::size_t>(next->rule_id)] = 1.0 - eps_;
    }
    return probs;
}

std::vector<ScoredDeduction> OracleDeductionModel::deduce(
    const std::vector<std::string>& selected_texts, int max_candidates) const {
    if (max_candidates < 1 || selected_texts.empty()) return {};
    if (auto conclusion = modus_ponens(selected_texts)) {
        return {ScoredDeduction{*conclusion, std::log1p(-eps_)}};
    }
    // nothing fires: restate the first premise (sound but uninformative).
    // Same log-probability as a firing rule, so path priorities are driven by
    // the selection scores rather than by which pairs happen to fire.
    return {ScoredDeduction{selected_texts.front(), std::log1p(-eps_)}};
}

double OracleVerificationModel::entail_prob(const std::string& goal,
                                            const std::string& statement) const {
    return statement == goal ? 1.0 - eps_ : eps_;
}

double OracleVerificationModel::contradict_prob(const std::string& goal,
                                                const std::string& statement) const {
    const auto toggled = negation_toggled(goal);
    return (toggled && statement == *toggled) ? 1.0 - eps_ : eps_;
}

OracleBackends oracle_backends(double eps) {
    return OracleBackends{
        std::make_shared<OracleSelectionModel>(eps),
        std::make_shared<OracleDeductionModel>(eps),
        std::make_shared<OracleVerificationModel>(eps),
    };
}

std::optional<std::string> negation_toggled(const std::string& sentence) {
    ParsedSentence p;
    try {
        p = parse_sentence(sentence);
    } catch (const GrammarError&) {
        return std::nullopt;
    }
    if (p.attribute_fact) {
        AttributeFact f = *p.attribute_fact;
        f.negated = !f.negated;
        return render(f);
    }
    if (p.attribute_rule) {
        AttributeRule r = *p.attribute_rule;
        r.negated = !r.negated;
        return render(r);
    }
    return std::nullopt;
}

VerifierParams spurious_params() {
    VerifierParams params = VerifierParams::zeros();
    for (std::size_t i = 0; i < params.feature_spec.size(); ++i) {
        if (params.feature_spec[i] == "token_jaccard") params.weights[i] = 12.0;
    }
    params.bias = -6.0;
    return params;
}

std::shared_ptr<VerificationModel> spurious_verifier(double prob_floor) {
    return std::make_shared<LogisticVerifier>(spurious_params(), prob_floor);
}

std::string adversarial_negative_goal(const Theory& theory,
                                      const std::vector<std::string>& goal_pool) {
    if (goal_pool.empty()) throw NoValidCandidate("empty goal pool");
    int best = -1;
    double best_overlap = -1.0;
    for (std::size_t i = 0; i < goal_pool.size(); ++i) {
        if (is_provable(theory, goal_pool[i])) continue;
        double overlap = 0.0;
        for (const auto& st : theory.statements()) {
            overlap = std::max(overlap, token_jaccard(st.text, goal_pool[i]));
        }
        if (overlap > best_overlap) {
            best_overlap = overlap;
            best = static_cast<int>(i);
        }
    }
    if (best < 0) throw NoValidCandidate("every pool goal is provable under the theory");
    return goal_pool[static_cast<std::size_t>(best)];
}

}  // namespace proofbeam::synth
