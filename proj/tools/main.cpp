// proofbeam CLI: dataset generation, reasoning runs, verifier refinement, and
// evaluation campaigns over line-delimited JSON records.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <thread>

#include "proofbeam/engine.hpp"
#include "proofbeam/eval.hpp"
#include "proofbeam/io.hpp"
#include "proofbeam/llm.hpp"
#include "proofbeam/synthlogic.hpp"
#include "proofbeam/verifier.hpp"

namespace {

using namespace proofbeam;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitBackend = 4;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void require_input(const std::string& path, const std::string& what) {
    if (path.empty()) throw ConfigConflict(what + " path is required");
    if (!std::filesystem::exists(path)) throw ConfigConflict(what + " not found: " + path);
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) throw ConfigConflict("output path is required");
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    io::write_file(path, content);
}

struct BuiltBackends {
    Backends backends;
    std::shared_ptr<llm::LlmClient> client;  // kept alive for transcripts
};

VerifierParams load_params_or_spurious(const std::string& path) {
    if (path.empty()) return synth::spurious_params();
    require_input(path, "verifier params");
    return io::verifier_params_from_json(io::read_file(path));
}

BuiltBackends build_backends(const io::RunConfig& cfg) {
    BuiltBackends out;
    const double eps = cfg.engine.prob_floor;
    if (cfg.backend == "oracle") {
        const auto oracle = synth::oracle_backends(eps);
        out.backends.selection = oracle.selection;
        out.backends.deduction = oracle.deduction;
        out.backends.verification = oracle.verification;
    } else if (cfg.backend == "logistic") {
        const auto oracle = synth::oracle_backends(eps);
        out.backends.selection = oracle.selection;
        out.backends.deduction = oracle.deduction;
        out.backends.verification =
            std::make_shared<LogisticVerifier>(load_params_or_spurious(cfg.frozen_params), eps);
    } else if (cfg.backend == "llm") {
        llm::LlmConfig lcfg = llm::default_llm_config();
        if (cfg.llm) {
            lcfg.endpoint = cfg.llm->endpoint;
            lcfg.model = cfg.llm->model;
            lcfg.temperature = cfg.llm->temperature;
            lcfg.max_retries = cfg.llm->max_retries;
            lcfg.timeout_ms = cfg.llm->timeout_ms;
            lcfg.max_concurrent_requests = cfg.llm->max_concurrent_requests;
            lcfg.backoff_base_ms = cfg.llm->backoff_base_ms;
            lcfg.max_proposals = cfg.llm->max_proposals;
            lcfg.max_deductions = cfg.llm->max_deductions;
        }
        out.client = std::make_shared<llm::LlmClient>(lcfg);
        out.backends.selection = std::make_shared<llm::LlmSelectionModel>(out.client);
        out.backends.deduction = std::make_shared<llm::LlmDeductionModel>(out.client);
        out.backends.verification =
            std::make_shared<LogisticVerifier>(load_params_or_spurious(cfg.frozen_params), eps);
    } else {
        throw ConfigConflict("unknown backend: " + cfg.backend);
    }
    if (!cfg.params.empty()) {
        require_input(cfg.params, "verifier params");
        out.backends.refined_verification = std::make_shared<LogisticVerifier>(
            io::verifier_params_from_json(io::read_file(cfg.params)), eps);
    }
    return out;
}

Engine build_engine(const io::RunConfig& cfg, const BuiltBackends& built) {
    return build_system(system_kind_from_string(cfg.system), built.backends, cfg.engine);
}

int effective_jobs(const io::RunConfig& cfg, const Backends& backends) {
    if (cfg.jobs <= 1) return 1;
    const bool safe = backends.selection->concurrency_safe() &&
                      backends.deduction->concurrency_safe() &&
                      backends.verification->concurrency_safe();
    if (!safe) {
        std::cerr << "note: backend not concurrency-safe, running with --jobs 1\n";
        return 1;
    }
    return cfg.jobs;
}

template <class Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    const int n = std::min<int>(jobs, static_cast<int>(count));
    for (int w = 0; w < n; ++w) {
        workers.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : workers) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------------------
// gen-data
// ---------------------------------------------------------------------------

std::string label_name(bool provable) { return provable ? "provable" : "nonprovable"; }

io::McqaRecord make_mcqa_record(const io::RunConfig& cfg, int depth, int index) {
    const std::uint64_t seed = mix_seed(
        cfg.seed,
        mix_seed(static_cast<std::uint64_t>(depth), 0x4d630000ULL + static_cast<std::uint64_t>(index)));
    const auto inst = synth::generate_instance(depth, cfg.distractors, true, seed);

    // negative pool: the negated goal plus goals of freshly drawn instances
    std::vector<std::string> pool;
    if (const auto toggled = synth::negation_toggled(inst.goal)) pool.push_back(*toggled);
    for (std::uint64_t k = 0; pool.size() < 12 && k < 24; ++k) {
        const auto other =
            synth::generate_instance(depth, cfg.distractors, true, mix_seed(seed, k + 1));
        if (other.goal != inst.goal) pool.push_back(other.goal);
    }
    std::vector<std::string> negatives;
    while (negatives.size() < 3) {
        if (pool.empty()) throw Error("mcqa generation ran out of negative candidates");
        const std::string pick = synth::adversarial_negative_goal(inst.theory, pool);
        pool.erase(std::find(pool.begin(), pool.end(), pick));
        if (std::find(negatives.begin(), negatives.end(), pick) == negatives.end()) {
            negatives.push_back(pick);
        }
    }

    io::McqaRecord record;
    record.id = "d" + std::to_string(depth) + "-q-" + std::to_string(index);
    for (const auto& st : inst.theory.statements()) record.theory.push_back(st.text);
    record.answer = static_cast<int>(seed % 4);
    for (int c = 0, neg = 0; c < 4; ++c) {
        record.choices.push_back(c == record.answer ? inst.goal
                                                    : negatives[static_cast<std::size_t>(neg++)]);
    }
    record.meta["depth"] = std::to_string(depth);
    record.meta["seed"] = std::to_string(seed);
    return record;
}

int cmd_gen_data(const io::RunConfig& cfg) {
    if (cfg.per_cell < 1) throw ConfigConflict("per_cell must be >= 1");
    if (cfg.depths.empty()) throw ConfigConflict("depths must be non-empty");
    if (cfg.gen_mode != "binary" && cfg.gen_mode != "mcqa") {
        throw ConfigConflict("gen_mode must be binary or mcqa");
    }

    std::string body = io::config_header_line(cfg) + "\n";
    json counts = json::object();
    long total = 0;
    if (cfg.gen_mode == "binary") {
        for (int depth : cfg.depths) {
            for (const bool provable : {true, false}) {
                for (int i = 0; i < cfg.per_cell; ++i) {
                    const std::uint64_t seed =
                        mix_seed(cfg.seed, mix_seed(static_cast<std::uint64_t>(depth),
                                                    (provable ? 1ULL : 2ULL) * 1000003ULL +
                                                        static_cast<std::uint64_t>(i)));
                    const auto inst =
                        synth::generate_instance(depth, cfg.distractors, provable, seed);
                    const std::string id = "d" + std::to_string(depth) + "-" +
                                           (provable ? "p" : "n") + "-" + std::to_string(i);
                    body += io::to_json_line(io::record_from_instance(inst, id)) + "\n";
                    ++total;
                }
                counts["depth_" + std::to_string(depth) + "_" + label_name(provable)] = cfg.per_cell;
            }
        }
    } else {
        for (int depth : cfg.depths) {
            for (int i = 0; i < cfg.per_cell; ++i) {
                body += io::to_json_line(make_mcqa_record(cfg, depth, i)) + "\n";
                ++total;
            }
            counts["depth_" + std::to_string(depth) + "_mcqa"] = cfg.per_cell;
        }
    }
    write_output(cfg.out, body);

    json manifest;
    manifest["config"] = json::parse(io::to_json(cfg));
    manifest["counts"] = counts;
    manifest["seed"] = cfg.seed;
    manifest["total"] = total;
    write_output(cfg.out + ".manifest.json", manifest.dump() + "\n");
    std::cout << "wrote " << total << " records to " << cfg.out << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// reason
// ---------------------------------------------------------------------------

std::vector<io::DatasetRecord> load_dataset(const std::string& path) {
    require_input(path, "dataset");
    const auto file = io::read_jsonl(path);
    std::vector<io::DatasetRecord> records;
    records.reserve(file.record_lines.size());
    for (const auto& line : file.record_lines) {
        records.push_back(io::dataset_record_from_json(line));
    }
    if (records.empty()) throw IoError("dataset is empty: " + path);
    return records;
}

int cmd_reason(const io::RunConfig& cfg) {
    const auto records = load_dataset(cfg.data);
    const auto built = build_backends(cfg);
    const Engine engine = build_engine(cfg, built);

    std::vector<std::string> lines(records.size());
    parallel_for(records.size(), effective_jobs(cfg, built.backends), [&](std::size_t i) {
        const Theory theory = Theory::from_sentences(records[i].theory);
        const auto result = engine.run(theory, records[i].goal);
        lines[i] = io::result_record_json(records[i].id, records[i].goal, result);
    });

    std::string body = io::config_header_line(cfg) + "\n";
    for (const auto& line : lines) body += line + "\n";
    write_output(cfg.out, body);
    if (built.client) {
        write_output(cfg.out + ".transcripts.jsonl", built.client->transcripts_jsonl());
    }
    std::cout << "reasoned over " << records.size() << " records -> " << cfg.out << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// refine
// ---------------------------------------------------------------------------

int cmd_refine(const io::RunConfig& cfg) {
    const auto records = load_dataset(cfg.data);

    std::vector<const io::DatasetRecord*> provable;
    std::vector<std::string> goal_pool;
    for (const auto& r : records) {
        if (!r.provable) throw IoError("refine needs labeled records (id " + r.id + ")");
        goal_pool.push_back(r.goal);
        if (*r.provable) provable.push_back(&r);
    }
    if (provable.empty()) throw IoError("refine needs provable records with gold paths");

    io::RunConfig mining_cfg = cfg;
    if (!mining_cfg.engine.planning_enabled()) {
        mining_cfg.engine.selection_depth = 3;  // negatives are mined with planning
        mining_cfg.engine.deduction_depth = 2;
    }
    const VerifierParams initial = load_params_or_spurious(cfg.params);
    const VerifierParams frozen =
        cfg.frozen_params.empty() ? initial : load_params_or_spurious(cfg.frozen_params);

    const auto oracle = synth::oracle_backends(cfg.engine.prob_floor);
    const LogisticVerifier pretrained(frozen, cfg.engine.prob_floor);

    std::vector<TrainPair> pairs(provable.size());
    parallel_for(provable.size(), cfg.jobs, [&](std::size_t i) {
        const auto& record = *provable[i];
        if (!record.gold_path || record.gold_path->empty()) {
            throw IoError("provable record lacks a gold path: " + record.id);
        }
        const Theory theory = Theory::from_sentences(record.theory);

        std::vector<std::string> pool;
        for (const auto& g : goal_pool) {
            if (g != record.goal) pool.push_back(g);
        }
        const std::string negative_goal = synth::adversarial_negative_goal(theory, pool);
        const auto mined =
            mine_negative_path(theory, negative_goal, *oracle.selection, *oracle.deduction,
                               pretrained, mining_cfg.engine, synth::is_provable);

        TrainPair pair;
        pair.provable_goal = record.goal;
        for (const auto& step : *record.gold_path) {
            pair.provable_deductions.push_back(step.conclusion);
        }
        pair.nonprovable_goal = negative_goal;
        for (const Deduction* ded : mined.deductions()) {
            pair.nonprovable_deductions.push_back(ded->text);
        }
        pairs[i] = std::move(pair);
    });

    RefineOptions options;
    options.optimizer.learning_rate = cfg.learning_rate;
    options.optimizer.batch_size = cfg.batch_size;
    options.epochs = cfg.epochs;
    options.omega_weight = cfg.omega_weight;
    options.seed = cfg.seed;
    options.prob_floor = cfg.engine.prob_floor;
    const auto result = refine_verifier(initial, frozen, pairs, options);

    std::map<std::string, std::string> metadata = {
        {"batch_size", std::to_string(cfg.batch_size)},
        {"epochs", std::to_string(cfg.epochs)},
        {"learning_rate", std::to_string(cfg.learning_rate)},
        {"omega_weight", std::to_string(cfg.omega_weight)},
        {"pairs", std::to_string(pairs.size())},
        {"seed", std::to_string(cfg.seed)},
    };
    write_output(cfg.out, io::verifier_params_json(result.params, metadata, &cfg) + "\n");

    std::string log = io::config_header_line(cfg) + "\n";
    for (std::size_t e = 0; e < result.epoch_mean_loss.size(); ++e) {
        log += json{{"epoch", e}, {"mean_loss", result.epoch_mean_loss[e]}}.dump() + "\n";
    }
    write_output(cfg.out + ".log.jsonl", log);
    std::cout << "refined verifier on " << pairs.size() << " pairs -> " << cfg.out << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

json ci_json(const eval::BootstrapCI& ci) { return json::array({ci.lo, ci.hi}); }

json ops_json(const OpCounts& ops) {
    return json{{"aux_deduce", ops.aux_deduce}, {"aux_verify", ops.aux_verify},
                {"deduce", ops.deduce},         {"select", ops.select},
                {"total", ops.total()},         {"verify", ops.verify}};
}

std::vector<eval::ScoredExample> score_dataset(const Engine& engine,
                                               const std::vector<io::DatasetRecord>& records,
                                               OpCounts* ops, int jobs) {
    std::vector<eval::ScoredExample> examples(records.size());
    std::vector<OpCounts> per_record(records.size());
    parallel_for(records.size(), jobs, [&](std::size_t i) {
        if (!records[i].provable) {
            throw IoError("binary evaluation needs labels: " + records[i].id);
        }
        const Theory theory = Theory::from_sentences(records[i].theory);
        const auto result = engine.run(theory, records[i].goal);
        examples[i] = eval::ScoredExample{result.f, *records[i].provable, records[i].id};
        per_record[i] = result.op_counts;
    });
    if (ops != nullptr) {
        for (const auto& o : per_record) *ops += o;
    }
    return examples;
}

int cmd_eval_binary(const io::RunConfig& cfg) {
    const auto records = load_dataset(cfg.data);
    const auto built = build_backends(cfg);
    const Engine engine = build_engine(cfg, built);
    const int jobs = effective_jobs(cfg, built.backends);

    OpCounts ops;
    const auto test = score_dataset(engine, records, &ops, jobs);
    std::vector<eval::ScoredExample> dev = test;
    if (!cfg.dev_data.empty()) {
        dev = score_dataset(engine, load_dataset(cfg.dev_data), &ops, jobs);
    }

    const auto roc = eval::roc_auroc(test);
    const double auacc_pos = eval::auacc(test, true);
    const double auacc_neg = eval::auacc(test, false);
    const auto f1 = eval::f1_at_threshold(dev, test);

    const int resamples = 10000;
    const auto auroc_ci = eval::bootstrap_ci(
        [](const std::vector<eval::ScoredExample>& e) { return eval::roc_auroc(e).auroc; }, test,
        resamples, 0.95, mix_seed(cfg.seed, 1));
    const auto pos_ci = eval::bootstrap_ci(
        [](const std::vector<eval::ScoredExample>& e) { return eval::auacc(e, true); }, test,
        resamples, 0.95, mix_seed(cfg.seed, 2));
    const auto neg_ci = eval::bootstrap_ci(
        [](const std::vector<eval::ScoredExample>& e) { return eval::auacc(e, false); }, test,
        resamples, 0.95, mix_seed(cfg.seed, 3));
    const auto f1_ci = eval::bootstrap_ci(
        [&](const std::vector<eval::ScoredExample>& e) { return eval::f1_score(e, f1.threshold); },
        test, resamples, 0.95, mix_seed(cfg.seed, 4));

    const auto formula = step_operation_count(cfg.engine);
    long positives = 0, negatives = 0;
    for (const auto& e : test) (e.positive ? positives : negatives) += 1;

    const std::string csv_path = cfg.out + ".curve.csv";
    json report;
    report["auacc_neg"] = auacc_neg;
    report["auacc_neg_ci"] = ci_json(neg_ci);
    report["auacc_pos"] = auacc_pos;
    report["auacc_pos_ci"] = ci_json(pos_ci);
    report["auroc"] = roc.auroc;
    report["auroc_ci"] = ci_json(auroc_ci);
    report["config"] = json::parse(io::to_json(cfg));
    report["curve_csv"] = csv_path;
    report["examples"] = json{{"negative", negatives}, {"positive", positives}};
    report["f1"] = f1.f1;
    report["f1_ci"] = ci_json(f1_ci);
    report["f1_dev"] = f1.dev_f1;
    report["f1_threshold"] = f1.threshold;
    report["mode"] = "binary";
    report["op_counts"] = ops_json(ops);
    report["op_ratio_vs_base"] = formula.ratio;
    report["ops_per_step_base"] = formula.base;
    report["ops_per_step_planning"] = formula.planning;

    write_output(cfg.out, report.dump() + "\n");
    write_output(csv_path, eval::curve_csv(roc.curve));
    if (built.client) {
        write_output(cfg.out + ".transcripts.jsonl", built.client->transcripts_jsonl());
    }
    std::cout << "auroc " << roc.auroc << " auacc_pos " << auacc_pos << " auacc_neg " << auacc_neg
              << " f1 " << f1.f1 << " -> " << cfg.out << "\n";
    return kExitOk;
}

int cmd_eval_mcqa(const io::RunConfig& cfg) {
    require_input(cfg.data, "dataset");
    const auto file = io::read_jsonl(cfg.data);
    std::vector<io::McqaRecord> records;
    for (const auto& line : file.record_lines) {
        records.push_back(io::mcqa_record_from_json(line));
    }
    if (records.empty()) throw IoError("dataset is empty: " + cfg.data);

    const auto built = build_backends(cfg);
    const Engine engine = build_engine(cfg, built);
    const int jobs = effective_jobs(cfg, built.backends);

    std::vector<int> chosen(records.size());
    std::vector<OpCounts> per_record(records.size());
    parallel_for(records.size(), jobs, [&](std::size_t i) {
        const Theory theory = Theory::from_sentences(records[i].theory);
        OpCounts ops;
        chosen[i] = eval::mcqa_rank(
            theory, records[i].choices,
            [&](const Theory& t, const std::string& goal) {
                const auto result = engine.run(t, goal);
                ops += result.op_counts;
                return result.f;
            },
            static_cast<int>(records[i].choices.size()));
        per_record[i] = ops;
    });

    OpCounts ops;
    std::vector<eval::ScoredExample> correctness;
    long correct = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        ops += per_record[i];
        const bool hit = chosen[i] == records[i].answer;
        correct += hit ? 1 : 0;
        correctness.push_back(eval::ScoredExample{hit ? 1.0 : 0.0, true, records[i].id});
    }
    const double accuracy = static_cast<double>(correct) / static_cast<double>(records.size());
    const auto acc_ci = eval::bootstrap_ci(
        [](const std::vector<eval::ScoredExample>& e) {
            double s = 0.0;
            for (const auto& x : e) s += x.f;
            return s / static_cast<double>(e.size());
        },
        correctness, 10000, 0.95, mix_seed(cfg.seed, 5));

    const auto formula = step_operation_count(cfg.engine);
    json report;
    report["accuracy"] = accuracy;
    report["accuracy_ci"] = ci_json(acc_ci);
    report["config"] = json::parse(io::to_json(cfg));
    report["examples"] = records.size();
    report["mode"] = "mcqa";
    report["op_counts"] = ops_json(ops);
    report["op_ratio_vs_base"] = formula.ratio;
    report["ops_per_step_base"] = formula.base;
    report["ops_per_step_planning"] = formula.planning;
    write_output(cfg.out, report.dump() + "\n");
    if (built.client) {
        write_output(cfg.out + ".transcripts.jsonl", built.client->transcripts_jsonl());
    }
    std::cout << "mcqa accuracy " << accuracy << " -> " << cfg.out << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// wiring
// ---------------------------------------------------------------------------

std::string preload_config_path(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if ((arg == "--config" || arg == "-c") && i + 1 < argc) return argv[i + 1];
        if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
    }
    return {};
}

void add_common_options(CLI::App* cmd, io::RunConfig& cfg) {
    cmd->add_option("-c,--config", "base config file or any output with an embedded config");
    cmd->add_option("--data", cfg.data, "input dataset (JSONL)");
    cmd->add_option("--dev-data", cfg.dev_data, "dev split for threshold selection");
    cmd->add_option("--out", cfg.out, "output path");
    cmd->add_option("--params", cfg.params, "refined verifier params file");
    cmd->add_option("--frozen-params", cfg.frozen_params, "pretrained verifier params file");
    cmd->add_option("--system", cfg.system, "base | system_a | system_b");
    cmd->add_option("--backend", cfg.backend, "oracle | logistic | llm");
    cmd->add_option("--seed", cfg.seed, "master seed");
    cmd->add_option("--jobs", cfg.jobs, "dataset-level parallelism bound");
    cmd->add_option("--max-steps", cfg.engine.max_steps, "reasoning steps");
    cmd->add_option("--beam-width", cfg.engine.beam_width, "buffer capacity");
    cmd->add_option("--selection-width", cfg.engine.selection_width, "selection beam");
    cmd->add_option("--deduction-width", cfg.engine.deduction_width, "deduction beam");
    cmd->add_option("--selection-depth", cfg.engine.selection_depth,
                    "roll-out depth for selections");
    cmd->add_option("--deduction-depth", cfg.engine.deduction_depth,
                    "roll-out depth for deductions");
    cmd->add_option("--alpha", cfg.engine.alpha, "selection correction scale");
    cmd->add_option("--beta", cfg.engine.beta, "deduction correction scale");
    cmd->add_option("--top-premises", cfg.engine.top_premises, "selection pool pruning");
    cmd->add_flag("--use-contradiction", cfg.engine.use_contradiction,
                  "use the generalized score in roll-outs");
}

int dispatch(const std::string& command, const io::RunConfig& cfg) {
    if (command == "gen-data") return cmd_gen_data(cfg);
    if (command == "reason") return cmd_reason(cfg);
    if (command == "refine") return cmd_refine(cfg);
    if (command == "eval-binary") return cmd_eval_binary(cfg);
    if (command == "eval-mcqa") return cmd_eval_mcqa(cfg);
    throw ConfigConflict("unknown command: " + command);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-step logical reasoning engine with look-ahead planning"};
    app.require_subcommand(1);

    io::RunConfig cfg;
    try {
        const std::string config_path = preload_config_path(argc, argv);
        if (!config_path.empty()) {
            require_input(config_path, "config");
            cfg = io::load_run_config(config_path);
        }
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    auto* gen = app.add_subcommand("gen-data", "generate a synthetic dataset");
    add_common_options(gen, cfg);
    gen->add_option("--per-cell", cfg.per_cell, "instances per (depth,label) cell");
    gen->add_option("--depths", cfg.depths, "depth list")->delimiter(',');
    gen->add_option("--distractors", cfg.distractors, "distractor statements per instance");
    gen->add_option("--mode", cfg.gen_mode, "binary | mcqa");

    auto* reason = app.add_subcommand("reason", "run the engine over a dataset");
    add_common_options(reason, cfg);

    auto* refine = app.add_subcommand("refine", "contrastively refine the verifier");
    add_common_options(refine, cfg);
    refine->add_option("--epochs", cfg.epochs, "training epochs");
    refine->add_option("--learning-rate", cfg.learning_rate, "Adam learning rate");
    refine->add_option("--batch-size", cfg.batch_size, "pairs per Adam step");
    refine->add_option("--omega-weight", cfg.omega_weight, "regularizer weight (0 disables)");

    auto* eval_binary = app.add_subcommand("eval-binary", "binary provability metrics");
    add_common_options(eval_binary, cfg);

    auto* eval_mcqa = app.add_subcommand("eval-mcqa", "multiple-choice accuracy");
    add_common_options(eval_mcqa, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        cfg.engine.validate();
        return dispatch(app.get_subcommands().front()->get_name(), cfg);
    } catch (const ConfigConflict& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InvalidConfig& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const GrammarError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const DegenerateLabels& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const TransportError& e) {
        std::cerr << "backend error: " << e.what() << "\n";
        return kExitBackend;
    } catch (const BackendFailure& e) {
        std::cerr << "backend error: " << e.what() << "\n";
        return kExitBackend;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
