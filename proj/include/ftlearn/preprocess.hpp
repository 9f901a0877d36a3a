#pragma once

#include "ftlearn/pddl.hpp"
#include "ftlearn/trace.hpp"

namespace ftlearn {

//! Replaces every predicate of arity > max_arity by its projections:
//! p_ij over argument pairs for max_arity = 2, p_i over single arguments for
//! max_arity = 1. Fluents in trace states and in instance init/goal states are
//! projected accordingly; action schemas are carried through unchanged.
std::pair<Domain, ScoredSet> split_predicates(const Domain& d, const ScoredSet& ts,
                                              int max_arity);

//! Adds a goal predicate p_goal for every predicate p and unions the latent
//! state {p_goal(o...) : p(o...) in the instance goal} into every state of
//! every trace.
std::pair<Domain, ScoredSet> add_goal_predicates(const Domain& d, const ScoredSet& ts);

}  // namespace ftlearn
