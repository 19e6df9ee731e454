#pragma once

#include <memory>
#include <string>

#include "proofbeam/inference.hpp"

namespace proofbeam {

/// The three named systems: the no-planning engine, the planning engine with
/// the pretrained (frozen) verifier, and the planning engine with refined
/// verifier parameters. They differ only in these knobs.
enum class SystemKind { base, system_a, system_b };

std::string to_string(SystemKind kind);
SystemKind system_kind_from_string(const std::string& name);

struct Backends {
    std::shared_ptr<const SelectionModel> selection;
    std::shared_ptr<const DeductionModel> deduction;
    std::shared_ptr<const VerificationModel> verification;          // pretrained / frozen
    std::shared_ptr<const VerificationModel> refined_verification;  // system_b only
};

/// A configured engine: run() is infer() with the wired models.
class Engine {
public:
    Engine(SystemKind kind, std::shared_ptr<const SelectionModel> sel,
           std::shared_ptr<const DeductionModel> ded, std::shared_ptr<const VerificationModel> ver,
           EngineConfig cfg);

    InferenceResult run(const Theory& theory, const std::string& goal) const;
    double prove(const Theory& theory, const std::string& goal) const;  // best f only

    SystemKind kind() const { return kind_; }
    const EngineConfig& config() const { return config_; }
    const VerificationModel& verifier() const { return *verification_; }

private:
    SystemKind kind_;
    std::shared_ptr<const SelectionModel> selection_;
    std::shared_ptr<const DeductionModel> deduction_;
    std::shared_ptr<const VerificationModel> verification_;
    EngineConfig config_;
};

/// Wires models and config into one of the named systems, rejecting
/// inconsistent combinations: base requires both roll-out depths to be 0,
/// the planning systems require a positive depth, and system_b additionally
/// requires the refined verifier.
Engine build_system(SystemKind kind, const Backends& backends, const EngineConfig& cfg);

}  // namespace proofbeam
