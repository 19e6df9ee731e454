#pragma once

#include <stdexcept>
#include <string>

namespace proofbeam {

// Base class for every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// -- core --------------------------------------------------------------
struct AlternationViolated : Error { using Error::Error; };
struct InvalidConfig : Error { using Error::Error; };

// -- models ------------------------------------------------------------
struct IndexOutOfRange : Error { using Error::Error; };
struct TheoryTooSmall : Error { using Error::Error; };
struct NoDeduction : Error { using Error::Error; };

// -- inference / planning ----------------------------------------------
struct BackendFailure : Error { using Error::Error; };
struct ContradictionUnsupported : Error { using Error::Error; };

// -- refine ------------------------------------------------------------
struct DomainError : Error { using Error::Error; };
struct EmptyPairSet : Error { using Error::Error; };
struct PreconditionViolated : Error { using Error::Error; };

// -- synthlogic ---------------------------------------------------------
struct GrammarError : Error { using Error::Error; };
struct NoValidCandidate : Error { using Error::Error; };

// -- llm ----------------------------------------------------------------
struct TransportError : Error { using Error::Error; };
struct ParseMismatch : Error { using Error::Error; };
struct TooFewSelections : Error { using Error::Error; };
struct EmptyResponse : Error { using Error::Error; };

// -- eval ----------------------------------------------------------------
struct DegenerateLabels : Error { using Error::Error; };

// -- engine facade / cli --------------------------------------------------
struct ConfigConflict : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace proofbeam
