#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "proofbeam/core.hpp"

namespace proofbeam::eval {

struct ScoredExample {
    double f = 0.0;  // proof score in [0,1]
    bool positive = false;
    std::string id;
};

struct CurvePoint {
    double tau = 0.0;
    double tpr = 0.0;
    double fpr = 0.0;
    double acc_pos = 0.0;  // fraction of positives with f >= tau
    double acc_neg = 0.0;  // fraction of negatives with f < tau
};

struct RocResult {
    std::vector<CurvePoint> curve;  // thresholds ascending; endpoints (1,1) .. (0,0)
    double auroc = 0.0;             // trapezoid over the exact threshold grid
    double auroc_rank = 0.0;        // Mann-Whitney pair statistic, 0.5 credit on ties
};

/// Exact ROC over the unique-score threshold grid with {0,1} sentinels.
/// Throws DegenerateLabels without at least one positive and one negative.
RocResult roc_auroc(const std::vector<ScoredExample>& examples);

/// Area under the accuracy-vs-threshold curve over tau in [0,1].
/// positive side: fraction with f >= tau; negative side: fraction with f < tau.
/// Equals the mean positive score (resp. 1 - mean negative score).
double auacc(const std::vector<ScoredExample>& examples, bool positive_side);

struct F1Result {
    double threshold = 0.0;  // dev-optimal tau (ties keep the smallest)
    double f1 = 0.0;         // test F1 at that tau
    double dev_f1 = 0.0;
};

/// F1 with "provable" meaning f >= tau; zero predicted positives score 0.
double f1_score(const std::vector<ScoredExample>& examples, double tau);

F1Result f1_at_threshold(const std::vector<ScoredExample>& dev,
                         const std::vector<ScoredExample>& test);

/// Proof-scores each choice with `prove` and returns the argmax index
/// (lowest index on ties). Throws PreconditionViolated unless exactly
/// `expected_choices` goals are given.
int mcqa_rank(const Theory& theory, const std::vector<std::string>& choices,
              const std::function<double(const Theory&, const std::string&)>& prove,
              int expected_choices = 4);

struct BootstrapCI {
    double lo = 0.0;
    double hi = 0.0;
};

/// Seeded percentile bootstrap of `statistic` over resamples of the examples.
BootstrapCI bootstrap_ci(const std::function<double(const std::vector<ScoredExample>&)>& statistic,
                         const std::vector<ScoredExample>& examples, int resamples, double level,
                         std::uint64_t seed);

/// Plot-ready CSV: tau,tpr,fpr,acc_pos,acc_neg.
std::string curve_csv(const std::vector<CurvePoint>& curve);

}  // namespace proofbeam::eval
