#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ftlearn/learner.hpp"

namespace ftlearn {

struct EvalRow {
    std::string formula;
    std::string pretty;
    double train_score = 0.0;
    double accuracy_pct = 0.0;
    int ops_budget = 0;
    int quantifiers = 0;
};

struct EvalReport {
    std::vector<EvalRow> rows;

    std::string to_csv() const;
    //! Best accuracy per (operator budget, quantifier count) cell.
    std::string to_markdown() const;
};

//! Proportion of test traces classified correctly by each formula: a
//! positive trace counts when satisfied, a negative one when falsified.
EvalReport evaluate(const std::vector<FoundFormula>& formulas, const ScoredSet& test,
                    const Domain& d, const CheckOptions& opts = {});

//! Learning task built from a set cover question: one single-state trace per
//! universe element, a mock negative trace, one type per subset. A cover of
//! size <= k exists iff some formula within the budgets reaches `threshold`.
struct SetCoverTask {
    std::shared_ptr<const Domain> domain;
    ScoredSet traces;
    int max_ops = 0;          // m - 1
    int max_quantifiers = 0;  // k
    double threshold = 0.0;   // sum of the positive trace scores
};

//! Universe elements are 1..n; sets are given as element lists.
SetCoverTask gen_setcover_instance(int n, const std::vector<std::vector<int>>& sets,
                                   int k);

struct BruteForceResult {
    std::optional<double> best_score;  // empty when nothing discriminates
    std::optional<Formula> best_formula;
    uint64_t labelings = 0;
};

//! Exhaustively labels one chain with every connector/predicate/variable
//! choice (respecting type consistency and the redundancy bans), scores each
//! discriminating formula with the model checker, and returns the maximum.
//! This is the independent oracle for the encoder's optimality.
BruteForceResult brute_force_best(const ShapeConfig& cfg, const Domain& d,
                                  const ScoredSet& ts,
                                  const EncoderOptions& opts = {},
                                  uint64_t space_bound = 1'000'000);

}  // namespace ftlearn
