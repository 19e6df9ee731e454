#include "proofbeam/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "proofbeam/errors.hpp"

namespace proofbeam::eval {

namespace {

std::vector<double> threshold_grid(const std::vector<ScoredExample>& examples) {
    std::vector<double> grid;
    grid.reserve(examples.size() + 2);
    grid.push_back(0.0);
    grid.push_back(1.0);
    for (const auto& e : examples) grid.push_back(e.f);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

void split_counts(const std::vector<ScoredExample>& examples, long& positives, long& negatives) {
    positives = negatives = 0;
    for (const auto& e : examples) (e.positive ? positives : negatives) += 1;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

RocResult roc_auroc(const std::vector<ScoredExample>& examples) {
    long positives = 0, negatives = 0;
    split_counts(examples, positives, negatives);
    if (positives == 0 || negatives == 0) {
        throw DegenerateLabels("ROC needs at least one positive and one negative");
    }

    const auto grid = threshold_grid(examples);
    RocResult out;
    out.curve.reserve(grid.size() + 1);
    std::vector<std::pair<long, long>> counts;  // (pos with f >= tau, neg with f >= tau)
    counts.reserve(grid.size() + 1);
    for (double tau : grid) {
        long cp = 0, cn = 0;
        for (const auto& e : examples) {
            if (e.f >= tau) (e.positive ? cp : cn) += 1;
        }
        counts.emplace_back(cp, cn);
        CurvePoint pt;
        pt.tau = tau;
        pt.tpr = static_cast<double>(cp) / static_cast<double>(positives);
        pt.fpr = static_cast<double>(cn) / static_cast<double>(negatives);
        pt.acc_pos = pt.tpr;
        pt.acc_neg = static_cast<double>(negatives - cn) / static_cast<double>(negatives);
        out.curve.push_back(pt);
    }
    if (counts.back().first != 0 || counts.back().second != 0) {
        // some score sits exactly at 1: close the curve at (0,0)
        counts.emplace_back(0, 0);
        out.curve.push_back(CurvePoint{1.0, 0.0, 0.0, 0.0, 1.0});
    }

    // Trapezoid over the exact step curve, kept in integer numerators so the
    // Mann-Whitney route agrees to the last bit.
    long long twice_area = 0;
    for (std::size_t i = 0; i + 1 < counts.size(); ++i) {
        const long long dn = counts[i].second - counts[i + 1].second;
        const long long sp = counts[i].first + counts[i + 1].first;
        twice_area += dn * sp;
    }
    out.auroc = static_cast<double>(twice_area) /
                (2.0 * static_cast<double>(positives) * static_cast<double>(negatives));

    long long twice_rank = 0;
    for (const auto& pos : examples) {
        if (!pos.positive) continue;
        for (const auto& neg : examples) {
            if (neg.positive) continue;
            if (pos.f > neg.f) {
                twice_rank += 2;
            } else if (pos.f == neg.f) {
                twice_rank += 1;  // tie credit
            }
        }
    }
    out.auroc_rank = static_cast<double>(twice_rank) /
                     (2.0 * static_cast<double>(positives) * static_cast<double>(negatives));
    return out;
}

double auacc(const std::vector<ScoredExample>& examples, bool positive_side) {
    std::vector<double> scores;
    for (const auto& e : examples) {
        if (e.positive == positive_side) scores.push_back(e.f);
    }
    if (scores.empty()) {
        throw DegenerateLabels(positive_side ? "no positive examples" : "no negative examples");
    }

    std::vector<double> grid = scores;
    grid.push_back(0.0);
    grid.push_back(1.0);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    double area = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        long count = 0;
        for (double s : scores) {
            if (positive_side ? s > grid[i] : s <= grid[i]) count += 1;
        }
        area += (grid[i + 1] - grid[i]) * static_cast<double>(count);
    }
    return area / static_cast<double>(scores.size());
}

double f1_score(const std::vector<ScoredExample>& examples, double tau) {
    long tp = 0, fp = 0, fn = 0;
    for (const auto& e : examples) {
        const bool predicted = e.f >= tau;
        if (predicted && e.positive) tp += 1;
        if (predicted && !e.positive) fp += 1;
        if (!predicted && e.positive) fn += 1;
    }
    if (tp + fp == 0) return 0.0;  // empty predicted-positive set
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    const double recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

F1Result f1_at_threshold(const std::vector<ScoredExample>& dev,
                         const std::vector<ScoredExample>& test) {
    long p = 0, n = 0;
    split_counts(dev, p, n);
    if (p == 0 || n == 0) throw DegenerateLabels("dev set has one class only");
    split_counts(test, p, n);
    if (p == 0 || n == 0) throw DegenerateLabels("test set has one class only");

    F1Result out;
    out.dev_f1 = -1.0;
    for (double tau : threshold_grid(dev)) {
        const double f1 = f1_score(dev, tau);
        if (f1 > out.dev_f1) {  // ties keep the smallest tau
            out.dev_f1 = f1;
            out.threshold = tau;
        }
    }
    out.f1 = f1_score(test, out.threshold);
    return out;
}

int mcqa_rank(const Theory& theory, const std::vector<std::string>& choices,
              const std::function<double(const Theory&, const std::string&)>& prove,
              int expected_choices) {
    if (static_cast<int>(choices.size()) != expected_choices) {
        throw PreconditionViolated("expected " + std::to_string(expected_choices) + " choices, got " +
                                   std::to_string(choices.size()));
    }
    int best = 0;
    double best_f = -1.0;
    for (std::size_t i = 0; i < choices.size(); ++i) {
        const double f = prove(theory, choices[i]);
        if (f > best_f) {
            best_f = f;
            best = static_cast<int>(i);
        }
    }
    return best;
}

BootstrapCI bootstrap_ci(const std::function<double(const std::vector<ScoredExample>&)>& statistic,
                         const std::vector<ScoredExample>& examples, int resamples, double level,
                         std::uint64_t seed) {
    if (resamples < 1) throw PreconditionViolated("bootstrap needs resamples >= 1");
    if (examples.empty()) throw DegenerateLabels("bootstrap needs examples");
    std::mt19937_64 rng(seed);
    std::vector<double> stats;
    stats.reserve(static_cast<std::size_t>(resamples));
    std::vector<ScoredExample> sample(examples.size());
    for (int r = 0; r < resamples; ++r) {
        for (auto& slot : sample) {
            slot = examples[static_cast<std::size_t>(rng() % examples.size())];
        }
        stats.push_back(statistic(sample));
    }
    std::sort(stats.begin(), stats.end());

    const auto quantile = [&](double q) {
        const double x = q * static_cast<double>(stats.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(std::floor(x));
        const std::size_t hi = std::min(stats.size() - 1, lo + 1);
        const double frac = x - std::floor(x);
        return stats[lo] + frac * (stats[hi] - stats[lo]);
    };
    const double alpha = 1.0 - level;
    return BootstrapCI{quantile(alpha / 2.0), quantile(1.0 - alpha / 2.0)};
}

std::string curve_csv(const std::vector<CurvePoint>& curve) {
    std::string out = "tau,tpr,fpr,acc_pos,acc_neg\n";
    for (const auto& pt : curve) {
        out += format_double(pt.tau) + ',' + format_double(pt.tpr) + ',' + format_double(pt.fpr) +
               ',' + format_double(pt.acc_pos) + ',' + format_double(pt.acc_neg) + '\n';
    }
    return out;
}

}  // namespace proofbeam::eval
