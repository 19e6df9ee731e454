#include "proofbeam/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace proofbeam::io {

namespace {

using nlohmann::json;

json meta_to_json(const std::map<std::string, std::string>& meta) {
    json j = json::object();
    for (const auto& [k, v] : meta) j[k] = v;
    return j;
}

std::map<std::string, std::string> meta_from_json(const json& j) {
    std::map<std::string, std::string> out;
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) out[k] = v.get<std::string>();
    }
    return out;
}

json engine_to_json(const EngineConfig& cfg) {
    json j;
    j["alpha"] = cfg.alpha;
    j["arity"] = cfg.arity;
    j["beam_width"] = cfg.beam_width;
    j["deduction_depth"] = cfg.deduction_depth;
    j["deduction_width"] = cfg.deduction_width;
    j["dedup_deductions"] = cfg.dedup_deductions;
    if (cfg.early_stop_f) {
        j["early_stop_f"] = *cfg.early_stop_f;
    } else {
        j["early_stop_f"] = nullptr;
    }
    j["beta"] = cfg.beta;
    j["max_steps"] = cfg.max_steps;
    j["memoize_rollouts"] = cfg.memoize_rollouts;
    j["prob_floor"] = cfg.prob_floor;
    j["proof_score_mode"] =
        cfg.proof_score_mode == ProofScoreMode::full_theory ? "full_theory" : "deductions_only";
    j["seed"] = cfg.seed;
    j["selection_depth"] = cfg.selection_depth;
    j["selection_width"] = cfg.selection_width;
    j["top_premises"] = cfg.top_premises;
    j["use_contradiction"] = cfg.use_contradiction;
    return j;
}

EngineConfig engine_from_json_obj(const json& j) {
    EngineConfig cfg;
    cfg.alpha = j.value("alpha", cfg.alpha);
    cfg.arity = j.value("arity", cfg.arity);
    cfg.beam_width = j.value("beam_width", cfg.beam_width);
    cfg.beta = j.value("beta", cfg.beta);
    cfg.deduction_depth = j.value("deduction_depth", cfg.deduction_depth);
    cfg.deduction_width = j.value("deduction_width", cfg.deduction_width);
    cfg.dedup_deductions = j.value("dedup_deductions", cfg.dedup_deductions);
    if (j.contains("early_stop_f") && !j.at("early_stop_f").is_null()) {
        cfg.early_stop_f = j.at("early_stop_f").get<double>();
    }
    cfg.max_steps = j.value("max_steps", cfg.max_steps);
    cfg.memoize_rollouts = j.value("memoize_rollouts", cfg.memoize_rollouts);
    cfg.prob_floor = j.value("prob_floor", cfg.prob_floor);
    cfg.proof_score_mode = j.value("proof_score_mode", std::string("deductions_only")) == "full_theory"
                               ? ProofScoreMode::full_theory
                               : ProofScoreMode::deductions_only;
    cfg.seed = j.value("seed", cfg.seed);
    cfg.selection_depth = j.value("selection_depth", cfg.selection_depth);
    cfg.selection_width = j.value("selection_width", cfg.selection_width);
    cfg.top_premises = j.value("top_premises", cfg.top_premises);
    cfg.use_contradiction = j.value("use_contradiction", cfg.use_contradiction);
    return cfg;
}

json llm_to_json(const LlmRunConfig& cfg) {
    json j;
    j["backoff_base_ms"] = cfg.backoff_base_ms;
    j["endpoint"] = cfg.endpoint;
    j["max_concurrent_requests"] = cfg.max_concurrent_requests;
    j["max_deductions"] = cfg.max_deductions;
    j["max_proposals"] = cfg.max_proposals;
    j["max_retries"] = cfg.max_retries;
    j["model"] = cfg.model;
    j["temperature"] = cfg.temperature;
    j["timeout_ms"] = cfg.timeout_ms;
    return j;
}

LlmRunConfig llm_from_json_obj(const json& j) {
    LlmRunConfig cfg;
    cfg.backoff_base_ms = j.value("backoff_base_ms", cfg.backoff_base_ms);
    cfg.endpoint = j.value("endpoint", cfg.endpoint);
    cfg.max_concurrent_requests = j.value("max_concurrent_requests", cfg.max_concurrent_requests);
    cfg.max_deductions = j.value("max_deductions", cfg.max_deductions);
    cfg.max_proposals = j.value("max_proposals", cfg.max_proposals);
    cfg.max_retries = j.value("max_retries", cfg.max_retries);
    cfg.model = j.value("model", cfg.model);
    cfg.temperature = j.value("temperature", cfg.temperature);
    cfg.timeout_ms = j.value("timeout_ms", cfg.timeout_ms);
    return cfg;
}

json run_to_json(const RunConfig& cfg) {
    json j;
    j["backend"] = cfg.backend;
    j["batch_size"] = cfg.batch_size;
    j["data"] = cfg.data;
    j["depths"] = cfg.depths;
    j["dev_data"] = cfg.dev_data;
    j["distractors"] = cfg.distractors;
    j["engine"] = engine_to_json(cfg.engine);
    j["epochs"] = cfg.epochs;
    j["frozen_params"] = cfg.frozen_params;
    j["gen_mode"] = cfg.gen_mode;
    j["jobs"] = cfg.jobs;
    j["learning_rate"] = cfg.learning_rate;
    j["llm"] = cfg.llm ? llm_to_json(*cfg.llm) : json(nullptr);
    j["omega_weight"] = cfg.omega_weight;
    j["out"] = cfg.out;
    j["params"] = cfg.params;
    j["per_cell"] = cfg.per_cell;
    j["seed"] = cfg.seed;
    j["system"] = cfg.system;
    return j;
}

RunConfig run_from_json_obj(const json& j) {
    RunConfig cfg;
    cfg.backend = j.value("backend", cfg.backend);
    cfg.batch_size = j.value("batch_size", cfg.batch_size);
    cfg.data = j.value("data", cfg.data);
    if (j.contains("depths")) cfg.depths = j.at("depths").get<std::vector<int>>();
    cfg.dev_data = j.value("dev_data", cfg.dev_data);
    cfg.distractors = j.value("distractors", cfg.distractors);
    if (j.contains("engine")) cfg.engine = engine_from_json_obj(j.at("engine"));
    cfg.epochs = j.value("epochs", cfg.epochs);
    cfg.frozen_params = j.value("frozen_params", cfg.frozen_params);
    cfg.gen_mode = j.value("gen_mode", cfg.gen_mode);
    cfg.jobs = j.value("jobs", cfg.jobs);
    cfg.learning_rate = j.value("learning_rate", cfg.learning_rate);
    if (j.contains("llm") && !j.at("llm").is_null()) cfg.llm = llm_from_json_obj(j.at("llm"));
    cfg.omega_weight = j.value("omega_weight", cfg.omega_weight);
    cfg.out = j.value("out", cfg.out);
    cfg.params = j.value("params", cfg.params);
    cfg.per_cell = j.value("per_cell", cfg.per_cell);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.system = j.value("system", cfg.system);
    return cfg;
}

json path_to_json(const ReasoningPath& path) {
    json steps = json::array();
    for (const auto& step : path.steps()) {
        if (const auto* sel = std::get_if<Selection>(&step)) {
            steps.push_back(json{{"kind", "selection"}, {"member_ids", sel->member_ids}, {"u", sel->u}});
        } else {
            const auto& ded = std::get<Deduction>(step);
            steps.push_back(json{{"kind", "deduction"}, {"text", ded.text}, {"v", ded.v}});
        }
    }
    std::vector<std::string> initial;
    const Theory initial_theory = path.initial_theory();
    for (const auto& st : initial_theory.statements()) initial.push_back(st.text);
    return json{{"f", path.f()}, {"g", path.g()}, {"initial_theory", initial}, {"steps", steps}};
}

json ops_to_json(const OpCounts& ops) {
    return json{{"aux_deduce", ops.aux_deduce},   {"aux_verify", ops.aux_verify},
                {"deduce", ops.deduce},           {"rollout_cache_hits", ops.rollout_cache_hits},
                {"select", ops.select},           {"verify", ops.verify}};
}

json trace_to_json(const RollOutTrace& trace) {
    json entries = json::array();
    for (const auto& e : trace.entries) {
        json entry{{"p_ver", e.p_ver}, {"text", e.text}};
        if (e.p_con) entry["p_con"] = *e.p_con;
        entries.push_back(std::move(entry));
    }
    return json{{"depth", trace.depth},
                {"entries", std::move(entries)},
                {"score", trace.score},
                {"truncated", trace.truncated}};
}

json json_from_text(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("invalid JSON ") + what + ": " + e.what());
    }
}

}  // namespace

std::string to_json_line(const DatasetRecord& record) {
    json j;
    j["goal"] = record.goal;
    if (record.gold_path) {
        json steps = json::array();
        for (const auto& step : *record.gold_path) {
            steps.push_back(json{{"conclusion", step.conclusion}, {"premise_ids", step.premise_ids}});
        }
        j["gold_path"] = std::move(steps);
    }
    j["id"] = record.id;
    if (record.provable) j["label"] = *record.provable ? "provable" : "nonprovable";
    j["meta"] = meta_to_json(record.meta);
    j["theory"] = record.theory;
    return j.dump();
}

DatasetRecord dataset_record_from_json(const std::string& line) {
    const json j = json_from_text(line, "dataset record");
    try {
        DatasetRecord record;
        record.id = j.value("id", std::string{});
        record.goal = j.at("goal").get<std::string>();
        record.theory = j.at("theory").get<std::vector<std::string>>();
        if (j.contains("label")) {
            const std::string label = j.at("label").get<std::string>();
            if (label != "provable" && label != "nonprovable") {
                throw IoError("unknown label: " + label);
            }
            record.provable = label == "provable";
        }
        if (j.contains("gold_path")) {
            std::vector<GoldStepRecord> steps;
            for (const auto& s : j.at("gold_path")) {
                steps.push_back(GoldStepRecord{s.at("premise_ids").get<std::vector<int>>(),
                                               s.at("conclusion").get<std::string>()});
            }
            record.gold_path = std::move(steps);
        }
        if (j.contains("meta")) record.meta = meta_from_json(j.at("meta"));
        return record;
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed dataset record: ") + e.what());
    }
}

std::string to_json_line(const McqaRecord& record) {
    json j;
    j["answer"] = record.answer;
    j["choices"] = record.choices;
    j["id"] = record.id;
    j["meta"] = meta_to_json(record.meta);
    j["theory"] = record.theory;
    return j.dump();
}

McqaRecord mcqa_record_from_json(const std::string& line) {
    const json j = json_from_text(line, "mcqa record");
    try {
        McqaRecord record;
        record.id = j.value("id", std::string{});
        record.theory = j.at("theory").get<std::vector<std::string>>();
        record.choices = j.at("choices").get<std::vector<std::string>>();
        record.answer = j.at("answer").get<int>();
        if (j.contains("meta")) record.meta = meta_from_json(j.at("meta"));
        return record;
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed mcqa record: ") + e.what());
    }
}

DatasetRecord record_from_instance(const synth::SyntheticInstance& instance, std::string id) {
    DatasetRecord record;
    record.id = std::move(id);
    for (const auto& st : instance.theory.statements()) record.theory.push_back(st.text);
    record.goal = instance.goal;
    record.provable = instance.provable;
    if (instance.provable) {
        std::vector<GoldStepRecord> steps;
        for (const auto& step : instance.gold_path) {
            steps.push_back(
                GoldStepRecord{{step.premise_ids.first, step.premise_ids.second}, step.conclusion});
        }
        record.gold_path = std::move(steps);
    }
    record.meta["depth"] = std::to_string(instance.depth);
    record.meta["distractors"] = std::to_string(instance.num_distractors);
    record.meta["seed"] = std::to_string(instance.seed);
    return record;
}

std::string to_json(const EngineConfig& cfg) { return engine_to_json(cfg).dump(); }

EngineConfig engine_config_from_json(const std::string& text) {
    return engine_from_json_obj(json_from_text(text, "engine config"));
}

std::string to_json(const RunConfig& cfg) { return run_to_json(cfg).dump(); }

RunConfig run_config_from_json(const std::string& text) {
    return run_from_json_obj(json_from_text(text, "run config"));
}

std::string config_header_line(const RunConfig& cfg) {
    return json{{"config", run_to_json(cfg)}, {"type", "config"}}.dump();
}

std::string result_record_json(const std::string& id, const std::string& goal,
                               const InferenceResult& result) {
    json per_step = json::array();
    for (const auto& s : result.per_step) {
        json step = ops_to_json(s.ops);
        step["kept_after_deduction"] = s.kept_after_deduction;
        step["kept_after_selection"] = s.kept_after_selection;
        per_step.push_back(std::move(step));
    }
    json provenance = json::array();
    for (const auto& rec : result.provenance) {
        json candidates = json::array();
        for (const auto& c : rec.candidates) {
            json cand;
            cand["base"] = c.base_score;
            cand["corrected"] = c.corrected_score;
            cand["delta"] = c.delta;
            cand["failed"] = c.failed;
            if (!c.member_ids.empty()) cand["member_ids"] = c.member_ids;
            if (!c.text.empty()) cand["text"] = c.text;
            if (!c.hypothetical_text.empty()) {
                cand["hypothetical"] = c.hypothetical_text;
                cand["hypothetical_prob"] = c.hypothetical_prob;
            }
            if (c.trace.depth > 0) cand["rollout"] = trace_to_json(c.trace);
            candidates.push_back(std::move(cand));
        }
        provenance.push_back(json{{"candidates", std::move(candidates)},
                                  {"path_rank", rec.path_rank},
                                  {"phase", rec.selection_phase ? "selection" : "deduction"},
                                  {"step", rec.step}});
    }
    json final_paths = json::array();
    for (const auto& p : result.final_paths) final_paths.push_back(path_to_json(p));

    json j;
    j["best_path"] = path_to_json(result.best_path);
    j["f"] = result.f;
    j["final_paths"] = std::move(final_paths);
    j["goal"] = goal;
    j["id"] = id;
    j["op_counts"] = ops_to_json(result.op_counts);
    j["per_step"] = std::move(per_step);
    j["provenance"] = std::move(provenance);
    j["steps_run"] = result.steps_run;
    return j.dump();
}

std::string verifier_params_json(const VerifierParams& params,
                                 const std::map<std::string, std::string>& metadata,
                                 const RunConfig* config) {
    json j;
    j["bias"] = params.bias;
    if (config != nullptr) j["config"] = run_to_json(*config);
    j["feature_spec"] = params.feature_spec;
    j["metadata"] = meta_to_json(metadata);
    j["version"] = 1;
    j["weights"] = params.weights;
    return j.dump();
}

VerifierParams verifier_params_from_json(const std::string& text,
                                         std::map<std::string, std::string>* metadata) {
    const json j = json_from_text(text, "verifier params");
    try {
        if (j.value("version", 0) != 1) throw IoError("unsupported verifier params version");
        VerifierParams params;
        params.feature_spec = j.at("feature_spec").get<std::vector<std::string>>();
        params.weights = j.at("weights").get<std::vector<double>>();
        params.bias = j.at("bias").get<double>();
        params.check();
        if (metadata != nullptr && j.contains("metadata")) {
            *metadata = meta_from_json(j.at("metadata"));
        }
        return params;
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed verifier params: ") + e.what());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

JsonlFile read_jsonl(const std::string& path) {
    JsonlFile out;
    std::istringstream in(read_file(path));
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            const json j = json_from_text(line, "jsonl line");
            if (j.is_object() && j.value("type", std::string{}) == "config") {
                out.embedded_config = run_from_json_obj(j.at("config"));
                continue;
            }
        }
        out.record_lines.push_back(line);
    }
    return out;
}

RunConfig load_run_config(const std::string& path) {
    const std::string text = read_file(path);
    // JSONL outputs carry the config in their header line
    const std::size_t newline = text.find('\n');
    const std::string first_line = newline == std::string::npos ? text : text.substr(0, newline);
    json j;
    try {
        j = json::parse(first_line);
    } catch (const json::exception&) {
        try {
            j = json::parse(text);
        } catch (const json::exception& e) {
            throw ConfigConflict("cannot parse config from " + path + ": " + e.what());
        }
    }
    try {
        if (j.is_object() && j.contains("config")) return run_from_json_obj(j.at("config"));
        return run_from_json_obj(j);
    } catch (const json::exception& e) {
        throw ConfigConflict("cannot interpret config from " + path + ": " + e.what());
    }
}

}  // namespace proofbeam::io
