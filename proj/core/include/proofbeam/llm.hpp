#pragma once

#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "proofbeam/models.hpp"

namespace proofbeam::llm {

/// Environment variable holding the bearer token sent with each request.
inline constexpr const char* kBearerTokenEnv = "PROOFBEAM_LLM_TOKEN";

struct SelectionDemo {
    std::vector<std::string> facts;
    std::string question;
    std::vector<std::string> answer_facts;
};

struct DeductionDemo {
    std::vector<std::string> facts;  // rendered on one line, space-joined
    std::string answer;              // a deduction, or "None"
};

struct VerdictDemo {
    std::vector<std::string> facts;
    std::vector<std::string> reasoning;  // deduction lines of the path
    std::string question;
    bool verdict = true;
};

struct LlmConfig {
    std::string endpoint = "http://127.0.0.1:8080";
    std::string model = "gpt-3.5-turbo";
    double temperature = 0.0;
    std::string system_message = "You are an AI assistant that speaks English.";
    int max_retries = 2;        // extra attempts after the first, shared by
                                // transport and parse failures
    int timeout_ms = 30000;
    int max_concurrent_requests = 4;
    int backoff_base_ms = 1000;  // doubles per retry
    bool backoff_jitter = false;
    int max_proposals = 3;  // selections parsed per response
    int max_deductions = 1;
    std::vector<SelectionDemo> selection_demos;
    std::vector<DeductionDemo> deduction_demos;
    std::vector<VerdictDemo> verdict_demos;
};

/// Config preloaded with the default few-shot demonstrations.
LlmConfig default_llm_config();

/// Audit record stored for every HTTP request the client makes.
struct LlmTranscript {
    std::string request_body;
    std::string response_body;
    std::string parsed_summary;
    long latency_ms = 0;
    int attempt = 0;  // 0 for the first try of a logical call
    int http_status = 0;
};

/// Chat-completion client: POST {endpoint}/v1/chat/completions with a
/// system+user message pair. Shareable across threads; a semaphore-style
/// bound keeps in-flight requests at or below max_concurrent_requests.
class LlmClient {
public:
    explicit LlmClient(LlmConfig cfg);

    const LlmConfig& config() const { return cfg_; }

    /// One HTTP round trip (no retry). Returns the first choice's message
    /// content. Throws TransportError on connection failures, non-200
    /// statuses, or malformed completion payloads.
    std::string complete_once(const std::string& user_prompt, int attempt,
                              const std::string& parsed_summary_hint = "") const;

    /// Backoff delay before retry `attempt` (1-based), milliseconds.
    long backoff_ms(int attempt) const;
    void sleep_for_backoff(int attempt) const;

    std::vector<LlmTranscript> transcripts() const;
    std::size_t request_count() const;
    std::string transcripts_jsonl() const;

private:
    class FlightSlot;

    LlmConfig cfg_;
    std::string bearer_token_;
    mutable std::mutex mutex_;
    mutable std::condition_variable slot_free_;
    mutable int in_flight_ = 0;
    mutable std::vector<LlmTranscript> transcript_log_;
};

// -- prompt rendering (pinned by golden fixtures) ---------------------------

std::string selection_prompt(const Theory& theory, const std::string& goal, const LlmConfig& cfg);
std::string deduction_prompt(const std::vector<std::string>& selected_texts, const LlmConfig& cfg);
std::string verify_prompt(const Theory& initial_theory, const std::vector<std::string>& reasoning,
                          const std::string& goal, const LlmConfig& cfg);

/// Trims and collapses internal whitespace; used for matching returned fact
/// lines back to statements.
std::string normalize_whitespace(const std::string& text);

// -- operations ---------------------------------------------------------------

/// Prompts for selections and parses returned fact blocks back to statement
/// ids by exact text match after whitespace normalization. Every selection
/// carries u = 0. Blocks are separated by blank lines. Retries (same prompt)
/// on ParseMismatch and transport failures up to cfg.max_retries.
std::vector<Selection> llm_select(const Theory& theory, const std::string& goal,
                                  const LlmClient& client, int max_candidates);

/// Prompts for deductions from the selected texts; each response line is one
/// deduction with v = 0. A response of "None" yields an empty list. Throws
/// EmptyResponse on a blank response.
std::vector<ScoredDeduction> llm_deduce(const std::vector<std::string>& selected_texts,
                                        const LlmClient& client, int max_candidates);

enum class Verdict { yes, no, unknown };

/// Maps a verdict token ("True", "false.", ...) to a Verdict; unknown when
/// unparseable.
Verdict parse_verdict(const std::string& response);

/// Renders the path as a proof transcript and asks for a True/False judgment.
/// Unparseable verdicts retry; after retries the verdict is unknown.
Verdict llm_verify_final(const ReasoningPath& path, const std::string& goal,
                         const LlmClient& client);

// -- engine backends -----------------------------------------------------------

class LlmSelectionModel final : public SelectionModel {
public:
    explicit LlmSelectionModel(std::shared_ptr<LlmClient> client) : client_(std::move(client)) {}
    bool concurrency_safe() const override { return true; }
    std::vector<Selection> propose(const Theory& theory, const std::string& goal,
                                   const SelectionLimits& limits) const override;

private:
    std::shared_ptr<LlmClient> client_;
};

class LlmDeductionModel final : public DeductionModel {
public:
    explicit LlmDeductionModel(std::shared_ptr<LlmClient> client) : client_(std::move(client)) {}
    bool concurrency_safe() const override { return true; }
    std::vector<ScoredDeduction> deduce(const std::vector<std::string>& selected_texts,
                                        int max_candidates) const override;

private:
    std::shared_ptr<LlmClient> client_;
};

}  // namespace proofbeam::llm
