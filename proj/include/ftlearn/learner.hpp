#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ftlearn/encoder.hpp"
#include "ftlearn/maxsat.hpp"
#include "ftlearn/shape.hpp"

namespace ftlearn {

struct LearnOptions {
    int max_ops = 1;          // operator budget r; all budgets 0..r are run
    int max_quantifiers = 1;  // quantifier budget q; budgets 1..q are run
    EncoderOptions encoder;
    SolveBudget per_config;
    //! When set, solve via this external WCNF command instead of the
    //! embedded engine; {file} expands to the instance path.
    std::string external_cmd;
    double global_timeout_s = -1.0;
    int workers = 1;
    std::optional<double> min_score;
    //! Stop as soon as some formula separates the training set perfectly.
    bool first_perfect = false;
};

struct FoundFormula {
    Formula formula;
    double train_score = 0.0;
    bool optimum = true;  // false when the per-config budget cut the search
    std::string chain_id;
    std::string prefix;
    std::vector<std::string> types;
    int64_t solve_time_ms = 0;
    int ops_budget = 0;
    int quantifiers = 0;
};

struct LearnResult {
    std::vector<FoundFormula> formulas;
    uint64_t configs_attempted = 0;
    uint64_t configs_failed = 0;  // FAIL results (unsat, timeout, infeasible)
    bool timed_out = false;
};

//! Encode-solve-decode for one configuration. Returns nothing (FAIL) when
//! the configuration admits no discriminating formula or the budget runs
//! out. Every returned formula is re-verified against the model checker.
std::optional<FoundFormula> find_formula(const ShapeConfig& cfg, const Domain& d,
                                         const ScoredSet& ts,
                                         const LearnOptions& opts);

//! Full enumeration over operator budgets, chains, quantifier prefixes and
//! type tuples; results are deduplicated and ranked by train score, then by
//! (budget, quantifiers, text).
LearnResult learn(const Domain& d, const ScoredSet& ts, const LearnOptions& opts);

std::string formulas_to_json(const LearnResult& result, const Domain& d);

}  // namespace ftlearn
