#include "proofbeam/llm.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <random>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace proofbeam::llm {

namespace {

using nlohmann::json;

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += sep;
        out += parts[i];
    }
    return out;
}

std::string numbered_facts(const std::vector<std::string>& facts) {
    std::string out;
    for (std::size_t i = 0; i < facts.size(); ++i) {
        out += std::to_string(i) + "." + facts[i] + "\n";
    }
    return out;
}

std::vector<std::string> theory_texts(const Theory& theory) {
    std::vector<std::string> out;
    out.reserve(theory.size());
    for (const auto& st : theory.statements()) out.push_back(st.text);
    return out;
}

std::string fact_question_block(const std::vector<std::string>& facts, const std::string& question) {
    return "Based on the facts:\n" + numbered_facts(facts) + "Question: True or false: " + question +
           "\n\nAnswer:\n";
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur)) lines.push_back(cur);
    return lines;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

LlmConfig default_llm_config() {
    LlmConfig cfg;
    cfg.selection_demos = {
        SelectionDemo{
            {"Milo is a shumpus.", "Each shumpus is a felpus.", "Each felpus is a dolpus.",
             "Every dolpus is spicy.", "Every harpus is not spicy.", "Each quimpus is a harpus."},
            "Milo is spicy.",
            {"Milo is a shumpus.", "Each shumpus is a felpus."},
        },
        SelectionDemo{
            {"Wren is a grimpus.", "Each grimpus is a lorpus.", "Every lorpus is brown.",
             "Every sterpus is pale."},
            "Wren is pale.",
            {"Wren is a grimpus.", "Each grimpus is a lorpus."},
        },
    };
    cfg.deduction_demos = {
        DeductionDemo{{"Sally is a tumpus.", "Every tumpus is hot."}, "Sally is hot."},
        DeductionDemo{{"Rex is a lempus.", "Every dolpus is shy."}, "None"},
    };
    cfg.verdict_demos = {
        VerdictDemo{
            {"Sally is a tumpus.", "Every tumpus is hot."},
            {"Sally is hot."},
            "Sally is hot.",
            true,
        },
        VerdictDemo{
            {"Wren is a grimpus.", "Each grimpus is a lorpus.", "Every lorpus is brown."},
            {"Wren is a lorpus.", "Wren is brown."},
            "Wren is not brown.",
            false,
        },
    };
    return cfg;
}

// ---------------------------------------------------------------------------
// client
// ---------------------------------------------------------------------------

class LlmClient::FlightSlot {
public:
    explicit FlightSlot(const LlmClient& client) : client_(client) {
        std::unique_lock lock(client_.mutex_);
        client_.slot_free_.wait(lock, [&] {
            return client_.in_flight_ < client_.cfg_.max_concurrent_requests;
        });
        client_.in_flight_ += 1;
    }
    ~FlightSlot() {
        {
            std::lock_guard lock(client_.mutex_);
            client_.in_flight_ -= 1;
        }
        client_.slot_free_.notify_one();
    }

private:
    const LlmClient& client_;
};

LlmClient::LlmClient(LlmConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.max_retries < 0) throw InvalidConfig("max_retries must be >= 0");
    if (cfg_.temperature < 0.0) throw InvalidConfig("temperature must be >= 0");
    if (cfg_.max_concurrent_requests < 1) throw InvalidConfig("max_concurrent_requests must be >= 1");
    if (const char* token = std::getenv(kBearerTokenEnv)) bearer_token_ = token;
}

std::string LlmClient::complete_once(const std::string& user_prompt, int attempt,
                                     const std::string& parsed_summary_hint) const {
    json body;
    body["model"] = cfg_.model;
    body["temperature"] = cfg_.temperature;
    body["messages"] = json::array({
        json{{"role", "system"}, {"content", cfg_.system_message}},
        json{{"role", "user"}, {"content", user_prompt}},
    });
    const std::string request_body = body.dump();

    LlmTranscript transcript;
    transcript.request_body = request_body;
    transcript.attempt = attempt;
    transcript.parsed_summary = parsed_summary_hint;

    const auto started = std::chrono::steady_clock::now();
    httplib::Result result;
    {
        FlightSlot slot(*this);
        httplib::Client http(cfg_.endpoint);
        http.set_connection_timeout(0, cfg_.timeout_ms * 1000LL);
        http.set_read_timeout(cfg_.timeout_ms / 1000, (cfg_.timeout_ms % 1000) * 1000);
        http.set_write_timeout(cfg_.timeout_ms / 1000, (cfg_.timeout_ms % 1000) * 1000);
        httplib::Headers headers;
        if (!bearer_token_.empty()) headers.emplace("Authorization", "Bearer " + bearer_token_);
        result = http.Post("/v1/chat/completions", headers, request_body, "application/json");
    }
    transcript.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                std::chrono::steady_clock::now() - started)
                                .count();

    std::string error;
    std::string content;
    if (!result) {
        error = "connection failure: " + httplib::to_string(result.error());
    } else {
        transcript.http_status = result->status;
        transcript.response_body = result->body;
        if (result->status != 200) {
            error = "http status " + std::to_string(result->status);
        } else {
            try {
                const json payload = json::parse(result->body);
                content = payload.at("choices").at(0).at("message").at("content").get<std::string>();
            } catch (const json::exception& e) {
                error = std::string("malformed completion payload: ") + e.what();
            }
        }
    }

    {
        std::lock_guard lock(mutex_);
        transcript_log_.push_back(std::move(transcript));
    }
    if (!error.empty()) throw TransportError(error);
    return content;
}

long LlmClient::backoff_ms(int attempt) const {
    long delay = cfg_.backoff_base_ms;
    for (int i = 1; i < attempt; ++i) delay *= 2;
    if (cfg_.backoff_jitter) {
        thread_local std::mt19937_64 rng{std::random_device{}()};
        delay += static_cast<long>(rng() % static_cast<std::uint64_t>(std::max(1L, delay / 2)));
    }
    return delay;
}

void LlmClient::sleep_for_backoff(int attempt) const {
    std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms(attempt)));
}

std::vector<LlmTranscript> LlmClient::transcripts() const {
    std::lock_guard lock(mutex_);
    return transcript_log_;
}

std::size_t LlmClient::request_count() const {
    std::lock_guard lock(mutex_);
    return transcript_log_.size();
}

std::string LlmClient::transcripts_jsonl() const {
    std::string out;
    for (const auto& t : transcripts()) {
        json line{
            {"request", t.request_body},   {"response", t.response_body},
            {"parsed", t.parsed_summary},  {"latency_ms", t.latency_ms},
            {"attempt", t.attempt},        {"status", t.http_status},
        };
        out += line.dump() + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// prompts
// ---------------------------------------------------------------------------

std::string selection_prompt(const Theory& theory, const std::string& goal, const LlmConfig& cfg) {
    std::string out =
        "You are doing a true-false question test, and this is a subtask. Given the facts and a "
        "question, please select facts that are most useful for answering the question.\n\nHere are "
        "a few examples with explanations.\n\n";
    for (const auto& demo : cfg.selection_demos) {
        out += fact_question_block(demo.facts, demo.question);
        for (const auto& fact : demo.answer_facts) out += fact + "\n";
        out += "\n";
    }
    out += "Please refer to these examples and try to generate correct answer\n\n";
    out += fact_question_block(theory_texts(theory), goal);
    return out;
}

std::string deduction_prompt(const std::vector<std::string>& selected_texts, const LlmConfig& cfg) {
    std::string out =
        "You are doing a true-false question test, and this is a subtask. Given the facts, please "
        "deduce a new fact that is logically reasonable. When there is no such deduction, say "
        "None.\n\nHere are a few examples with explanations.\n\n";
    for (const auto& demo : cfg.deduction_demos) {
        out += "Based on the facts:\n" + join(demo.facts, " ") + "\nAnswer:\n" + demo.answer + "\n\n";
    }
    out += "Please refer to these examples and try to generate correct answer.\n\n";
    out += "Based on the facts:\n" + join(selected_texts, " ") + "\nAnswer:\n";
    return out;
}

std::string verify_prompt(const Theory& initial_theory, const std::vector<std::string>& reasoning,
                          const std::string& goal, const LlmConfig& cfg) {
    const auto block = [](const std::vector<std::string>& facts,
                          const std::vector<std::string>& steps, const std::string& question) {
        std::string s = "Based on the facts:\n" + numbered_facts(facts) + "Reasoning:\n";
        for (const auto& step : steps) s += step + "\n";
        s += "Question: True or false: " + question + "\n\nAnswer:\n";
        return s;
    };
    std::string out =
        "You are doing a true-false question test. Given the facts and a reasoning process, please "
        "judge whether the question statement is true or false. Answer True or False.\n\nHere are a "
        "few examples with explanations.\n\n";
    for (const auto& demo : cfg.verdict_demos) {
        out += block(demo.facts, demo.reasoning, demo.question);
        out += demo.verdict ? "True\n\n" : "False\n\n";
    }
    out += "Please refer to these examples and try to generate correct answer.\n\n";
    out += block(theory_texts(initial_theory), reasoning, goal);
    return out;
}

std::string normalize_whitespace(const std::string& text) {
    std::string out;
    bool in_space = false;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            in_space = !out.empty();
        } else {
            if (in_space) out += ' ';
            in_space = false;
            out += c;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// operations
// ---------------------------------------------------------------------------

namespace {

std::vector<Selection> parse_selection_response(const std::string& content, const Theory& theory,
                                                int cap) {
    std::vector<std::vector<std::string>> blocks(1);
    for (const auto& raw : split_lines(content)) {
        const std::string line = trim(raw);
        if (line.empty()) {
            if (!blocks.back().empty()) blocks.emplace_back();
        } else {
            blocks.back().push_back(line);
        }
    }
    if (!blocks.empty() && blocks.back().empty()) blocks.pop_back();

    std::vector<Selection> selections;
    for (const auto& block : blocks) {
        Selection sel;
        for (const auto& line : block) {
            const std::string norm = normalize_whitespace(line);
            int match = -1;
            for (const auto& st : theory.statements()) {
                if (normalize_whitespace(st.text) == norm) {
                    match = st.id;
                    break;
                }
            }
            if (match < 0) {
                throw ParseMismatch("returned line matches no statement: \"" + line + "\"");
            }
            if (std::find(sel.member_ids.begin(), sel.member_ids.end(), match) ==
                sel.member_ids.end()) {
                sel.member_ids.push_back(match);
            }
        }
        if (sel.member_ids.empty()) continue;
        sel.u = 0.0;  // this backend never scores
        const bool duplicate = std::any_of(selections.begin(), selections.end(), [&](const Selection& s) {
            return s.member_ids == sel.member_ids;
        });
        if (!duplicate) selections.push_back(std::move(sel));
        if (static_cast<int>(selections.size()) >= cap) break;
    }
    if (selections.empty()) {
        throw TooFewSelections("response contained no usable selections");
    }
    return selections;
}

template <class Fn>
auto with_retries(const LlmClient& client, Fn&& fn) {
    const int max_retries = client.config().max_retries;
    for (int attempt = 0;; ++attempt) {
        try {
            return fn(attempt);
        } catch (const ParseMismatch&) {
            if (attempt >= max_retries) throw;
        } catch (const TransportError&) {
            if (attempt >= max_retries) throw;
        }
        client.sleep_for_backoff(attempt + 1);
    }
}

}  // namespace

std::vector<Selection> llm_select(const Theory& theory, const std::string& goal,
                                  const LlmClient& client, int max_candidates) {
    const std::string prompt = selection_prompt(theory, goal, client.config());
    const int cap = std::min(max_candidates, client.config().max_proposals);
    return with_retries(client, [&](int attempt) {
        const std::string content = client.complete_once(prompt, attempt, "select");
        return parse_selection_response(content, theory, cap);
    });
}

std::vector<ScoredDeduction> llm_deduce(const std::vector<std::string>& selected_texts,
                                        const LlmClient& client, int max_candidates) {
    const std::string prompt = deduction_prompt(selected_texts, client.config());
    const int cap = std::min(max_candidates, client.config().max_deductions);
    return with_retries(client, [&](int attempt) -> std::vector<ScoredDeduction> {
        const std::string content = client.complete_once(prompt, attempt, "deduce");
        if (trim(content).empty()) throw EmptyResponse("deduction response was blank");
        if (lowercase(trim(content)) == "none") return {};
        std::vector<ScoredDeduction> out;
        for (const auto& raw : split_lines(content)) {
            const std::string line = trim(raw);
            if (line.empty()) continue;
            out.push_back(ScoredDeduction{line, 0.0});  // v = 0 for this backend
            if (static_cast<int>(out.size()) >= cap) break;
        }
        return out;
    });
}

Verdict parse_verdict(const std::string& response) {
    std::string token = trim(response);
    while (!token.empty() && (token.back() == '.' || token.back() == '!' || token.back() == ',' ||
                              token.back() == ';')) {
        token.pop_back();
    }
    token = lowercase(token);
    if (token == "true") return Verdict::yes;
    if (token == "false") return Verdict::no;
    return Verdict::unknown;
}

Verdict llm_verify_final(const ReasoningPath& path, const std::string& goal,
                         const LlmClient& client) {
    if (path.deduction_count() == 0) {
        throw PreconditionViolated("final verification needs at least one deduction");
    }
    std::vector<std::string> reasoning;
    for (const Deduction* ded : path.deductions()) reasoning.push_back(ded->text);
    const std::string prompt =
        verify_prompt(path.initial_theory(), reasoning, goal, client.config());

    const int max_retries = client.config().max_retries;
    for (int attempt = 0;; ++attempt) {
        std::string content;
        try {
            content = client.complete_once(prompt, attempt, "verify-final");
        } catch (const TransportError&) {
            if (attempt >= max_retries) throw;
            client.sleep_for_backoff(attempt + 1);
            continue;
        }
        const Verdict verdict = parse_verdict(content);
        if (verdict != Verdict::unknown) return verdict;
        if (attempt >= max_retries) return Verdict::unknown;
        client.sleep_for_backoff(attempt + 1);
    }
}

std::vector<Selection> LlmSelectionModel::propose(const Theory& theory, const std::string& goal,
                                                  const SelectionLimits& limits) const {
    return llm_select(theory, goal, *client_, limits.max_candidates);
}

std::vector<ScoredDeduction> LlmDeductionModel::deduce(
    const std::vector<std::string>& selected_texts, int max_candidates) const {
    return llm_deduce(selected_texts, *client_, max_candidates);
}

}  // namespace proofbeam::llm
