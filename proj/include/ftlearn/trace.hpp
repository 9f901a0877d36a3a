#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ftlearn/pddl.hpp"

namespace ftlearn {

//! A finite state sequence tied to its instance, with a real-valued score.
//! The sign of the score decides the positive/negative partition.
struct InstantiatedTrace {
    std::shared_ptr<const Instance> instance;
    std::vector<State> states;
    double score = 1.0;
    std::string id;

    int length() const { return static_cast<int>(states.size()); }
    bool positive() const { return score >= 0.0; }
};

struct ScoredSet {
    std::vector<InstantiatedTrace> traces;

    std::vector<size_t> positives() const;
    std::vector<size_t> negatives() const;
    double sum_positive_scores() const;
};

//! Parsed plan step: action name plus object names.
struct PlanStep {
    std::string action;
    std::vector<std::string> args;
};

//! Loads a trace document (JSON with fields `instance`, `score`, `states`).
//! Fluents are strings of the form "pred obj1 obj2". Score defaults to +1.
InstantiatedTrace load_trace(const std::string& json_text, const Domain& d,
                             std::shared_ptr<const Instance> inst);

std::string serialize_trace(const InstantiatedTrace& t, const Domain& d);

//! One "(action obj ...)" per line; ';' starts a comment.
std::vector<PlanStep> parse_plan(std::string_view text);

//! Replays a plan from the instance's initial state. Fails with the step
//! index if some operator is inapplicable. Goal satisfaction is not required.
InstantiatedTrace plan_to_trace(std::shared_ptr<const Instance> inst,
                                const std::vector<PlanStep>& plan, const Domain& d);

//! Applies per-trace scores by id; every id in the map must resolve.
ScoredSet assign_scores(std::vector<InstantiatedTrace> traces,
                        const std::map<std::string, double>& labeling);

}  // namespace ftlearn
