#include "proofbeam/engine.hpp"

namespace proofbeam {

std::string to_string(SystemKind kind) {
    switch (kind) {
        case SystemKind::base: return "base";
        case SystemKind::system_a: return "system_a";
        case SystemKind::system_b: return "system_b";
    }
    return "base";
}

SystemKind system_kind_from_string(const std::string& name) {
    if (name == "base") return SystemKind::base;
    if (name == "system_a") return SystemKind::system_a;
    if (name == "system_b") return SystemKind::system_b;
    throw ConfigConflict("unknown system kind: " + name);
}

Engine::Engine(SystemKind kind, std::shared_ptr<const SelectionModel> sel,
               std::shared_ptr<const DeductionModel> ded,
               std::shared_ptr<const VerificationModel> ver, EngineConfig cfg)
    : kind_(kind),
      selection_(std::move(sel)),
      deduction_(std::move(ded)),
      verification_(std::move(ver)),
      config_(cfg) {}

InferenceResult Engine::run(const Theory& theory, const std::string& goal) const {
    return infer(theory, goal, *selection_, *deduction_, *verification_, config_);
}

double Engine::prove(const Theory& theory, const std::string& goal) const {
    return run(theory, goal).f;
}

Engine build_system(SystemKind kind, const Backends& backends, const EngineConfig& cfg) {
    cfg.validate();
    if (!backends.selection || !backends.deduction || !backends.verification) {
        throw ConfigConflict("selection, deduction and verification backends are all required");
    }
    switch (kind) {
        case SystemKind::base:
            if (cfg.planning_enabled()) {
                throw ConfigConflict("base system requires both roll-out depths to be 0");
            }
            return Engine(kind, backends.selection, backends.deduction, backends.verification, cfg);
        case SystemKind::system_a:
            if (!cfg.planning_enabled()) {
                throw ConfigConflict("system_a requires a positive roll-out depth");
            }
            return Engine(kind, backends.selection, backends.deduction, backends.verification, cfg);
        case SystemKind::system_b:
            if (!cfg.planning_enabled()) {
                throw ConfigConflict("system_b requires a positive roll-out depth");
            }
            if (!backends.refined_verification) {
                throw ConfigConflict("system_b requires refined verifier parameters");
            }
            return Engine(kind, backends.selection, backends.deduction,
                          backends.refined_verification, cfg);
    }
    throw ConfigConflict("unreachable system kind");
}

}  // namespace proofbeam
