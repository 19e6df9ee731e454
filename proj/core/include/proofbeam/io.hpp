#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "proofbeam/engine.hpp"
#include "proofbeam/eval.hpp"
#include "proofbeam/synthlogic.hpp"
#include "proofbeam/verifier.hpp"

namespace proofbeam::io {

// ---------------------------------------------------------------------------
// Records (UTF-8 line-delimited JSON, one record per line)
// ---------------------------------------------------------------------------

struct GoldStepRecord {
    std::vector<int> premise_ids;
    std::string conclusion;

    bool operator==(const GoldStepRecord&) const = default;
};

struct DatasetRecord {
    std::string id;
    std::vector<std::string> theory;
    std::string goal;
    std::optional<bool> provable;  // label, when known
    std::optional<std::vector<GoldStepRecord>> gold_path;
    std::map<std::string, std::string> meta;

    bool operator==(const DatasetRecord&) const = default;
};

struct McqaRecord {
    std::string id;
    std::vector<std::string> theory;
    std::vector<std::string> choices;
    int answer = 0;  // gold choice index
    std::map<std::string, std::string> meta;

    bool operator==(const McqaRecord&) const = default;
};

std::string to_json_line(const DatasetRecord& record);
DatasetRecord dataset_record_from_json(const std::string& line);

std::string to_json_line(const McqaRecord& record);
McqaRecord mcqa_record_from_json(const std::string& line);

DatasetRecord record_from_instance(const synth::SyntheticInstance& instance, std::string id);

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

struct LlmRunConfig {
    std::string endpoint = "http://127.0.0.1:8080";
    std::string model = "gpt-3.5-turbo";
    double temperature = 0.0;
    int max_retries = 2;
    int timeout_ms = 30000;
    int max_concurrent_requests = 4;
    int backoff_base_ms = 1000;
    int max_proposals = 3;
    int max_deductions = 1;

    bool operator==(const LlmRunConfig&) const = default;
};

/// One config drives every subcommand; flags override individual fields.
struct RunConfig {
    EngineConfig engine;
    std::string system = "base";    // base | system_a | system_b
    std::string backend = "oracle";  // oracle | logistic | llm
    std::string data;
    std::string dev_data;
    std::string out;
    std::string params;         // verifier params file (logistic / llm backends)
    std::string frozen_params;  // regularization target; defaults to `params`
    // refine
    int epochs = 200;
    double learning_rate = 0.01;
    int batch_size = 16;
    double omega_weight = 1.0;
    // gen-data
    std::vector<int> depths = {1, 2, 3};
    int per_cell = 10;
    int distractors = 3;
    std::string gen_mode = "binary";  // binary | mcqa
    // execution
    int jobs = 1;
    std::uint64_t seed = 0;
    std::optional<LlmRunConfig> llm;

    bool operator==(const RunConfig&) const = default;
};

std::string to_json(const EngineConfig& cfg);
EngineConfig engine_config_from_json(const std::string& text);

std::string to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const std::string& text);

/// First line of every JSONL output: {"config": <RunConfig>, "type": "config"}.
std::string config_header_line(const RunConfig& cfg);

// ---------------------------------------------------------------------------
// Results and parameter files
// ---------------------------------------------------------------------------

/// Full inference result with per-step provenance as one JSON line.
std::string result_record_json(const std::string& id, const std::string& goal,
                               const InferenceResult& result);

/// Versioned verifier parameter file.
std::string verifier_params_json(const VerifierParams& params,
                                 const std::map<std::string, std::string>& metadata,
                                 const RunConfig* config = nullptr);
VerifierParams verifier_params_from_json(const std::string& text,
                                         std::map<std::string, std::string>* metadata = nullptr);

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

struct JsonlFile {
    std::optional<RunConfig> embedded_config;
    std::vector<std::string> record_lines;  // config header excluded
};

/// Splits a JSONL file into its optional config header and record lines.
JsonlFile read_jsonl(const std::string& path);

/// Loads a RunConfig from either a config JSON file or any output file with
/// an embedded config (JSONL header or top-level "config" member).
RunConfig load_run_config(const std::string& path);

}  // namespace proofbeam::io
