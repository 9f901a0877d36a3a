#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ftlearn/cnf.hpp"

namespace ftlearn {

enum class SolveStatus { Optimum, SatisfiableBounded, Unsatisfiable, Timeout };

struct SolveBudget {
    int64_t max_conflicts = -1;  // per full solve; < 0: unlimited
    double wall_seconds = -1.0;  // < 0: unlimited
};

struct Outcome {
    SolveStatus status = SolveStatus::Timeout;
    std::optional<std::vector<bool>> model;  // indexed by var, slot 0 unused
    int64_t cost = -1;                       // sum of falsified soft weights

    bool has_model() const { return model.has_value(); }
};

//! Minimizes the falsified soft weight by linear SAT-UNSAT search: solve,
//! bound the relaxation sum below the incumbent cost with a totalizer,
//! repeat until unsatisfiable.
Outcome solve(const WCNF& f, const SolveBudget& budget = {});

//! Runs an external WCNF solver. The command template is expanded with
//! {file} (input path); the returned model is re-verified against the hard
//! clauses and its cost recomputed before acceptance.
Outcome solve_external(const WCNF& f, const std::string& cmd_template);

//! True iff the assignment satisfies every hard clause.
bool model_satisfies_hard(const WCNF& f, const std::vector<bool>& model);

//! Sum of the weights of soft clauses falsified by the assignment.
int64_t model_cost(const WCNF& f, const std::vector<bool>& model);

}  // namespace ftlearn
