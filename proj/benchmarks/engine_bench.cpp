#include <benchmark/benchmark.h>

#include <random>

#include "proofbeam/engine.hpp"
#include "proofbeam/eval.hpp"
#include "proofbeam/synthlogic.hpp"
#include "proofbeam/verifier.hpp"

using namespace proofbeam;

namespace {

const synth::SyntheticInstance& depth3_instance() {
    static const auto inst = synth::generate_instance(3, 4, true, 4242);
    return inst;
}

EngineConfig inference_config(int d_sel, int d_ded) {
    EngineConfig cfg;
    cfg.max_steps = 5;
    cfg.beam_width = 5;
    cfg.selection_depth = d_sel;
    cfg.deduction_depth = d_ded;
    return cfg;
}

void BM_BaseInference(benchmark::State& state) {
    const auto& inst = depth3_instance();
    const auto oracle = synth::oracle_backends();
    const auto cfg = inference_config(0, 0);
    for (auto _ : state) {
        auto result = infer(inst.theory, inst.goal, *oracle.selection, *oracle.deduction,
                            *oracle.verification, cfg);
        benchmark::DoNotOptimize(result.f);
    }
}
BENCHMARK(BM_BaseInference);

void BM_PlanningInference(benchmark::State& state) {
    const auto& inst = depth3_instance();
    const auto oracle = synth::oracle_backends();
    const auto spurious = synth::spurious_verifier();
    const auto cfg = inference_config(static_cast<int>(state.range(0)),
                                      static_cast<int>(state.range(1)));
    for (auto _ : state) {
        auto result =
            infer(inst.theory, inst.goal, *oracle.selection, *oracle.deduction, *spurious, cfg);
        benchmark::DoNotOptimize(result.f);
    }
}
BENCHMARK(BM_PlanningInference)->Args({2, 2})->Args({3, 2});

void BM_ForwardChain(benchmark::State& state) {
    const auto inst = synth::generate_instance(static_cast<int>(state.range(0)), 6, true, 7);
    for (auto _ : state) {
        auto closure = synth::forward_chain(inst.theory);
        benchmark::DoNotOptimize(closure.size());
    }
}
BENCHMARK(BM_ForwardChain)->Arg(1)->Arg(3)->Arg(5);

void BM_PairEnumeration(benchmark::State& state) {
    PremiseProbabilities probs;
    std::mt19937_64 rng(3);
    for (int i = 0; i < 24; ++i) {
        probs.probs.push_back(clamp_probability(static_cast<double>(rng() % 1000) / 1000.0, 1e-6));
    }
    SelectionLimits limits;
    limits.max_candidates = 5;
    limits.top_premises = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto out = enumerate_pair_selections(probs, limits);
        benchmark::DoNotOptimize(out.size());
    }
}
BENCHMARK(BM_PairEnumeration)->Arg(4)->Arg(24);

void BM_Auroc(benchmark::State& state) {
    std::mt19937_64 rng(11);
    std::vector<eval::ScoredExample> examples;
    for (long i = 0; i < state.range(0); ++i) {
        examples.push_back({static_cast<double>(rng() % 1000) / 1000.0, i % 2 == 0, ""});
    }
    for (auto _ : state) {
        auto roc = eval::roc_auroc(examples);
        benchmark::DoNotOptimize(roc.auroc);
    }
}
BENCHMARK(BM_Auroc)->Arg(200)->Arg(2000);

void BM_RefineEpoch(benchmark::State& state) {
    std::vector<TrainPair> pairs;
    for (int i = 0; i < 64; ++i) {
        const std::string tag = std::to_string(i);
        pairs.push_back(TrainPair{"Rex is sweet " + tag + ".",
                                  {"Rex is sweet " + tag + ".", "Rex is a pivot " + tag + "."},
                                  "Rex is not sweet " + tag + ".",
                                  {"Rex is sweet " + tag + "."}});
    }
    const auto initial = synth::spurious_params();
    RefineOptions options;
    options.epochs = 1;
    for (auto _ : state) {
        auto result = refine_verifier(initial, initial, pairs, options);
        benchmark::DoNotOptimize(result.params.bias);
    }
}
BENCHMARK(BM_RefineEpoch);

void BM_VerifierScore(benchmark::State& state) {
    const auto params = synth::spurious_params();
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            verifier_score(params, "Polly is not metallic.", "Polly is a dumpus."));
    }
}
BENCHMARK(BM_VerifierScore);

}  // namespace

BENCHMARK_MAIN();
