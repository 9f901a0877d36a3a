#pragma once

#include <string>
#include <vector>

#include "ftlearn/ftl.hpp"
#include "ftlearn/pddl.hpp"

namespace ftlearn {

//! Unlabeled full-binary syntax skeleton. Connector nodes are 0..n-1 in
//! preorder, predicate nodes n..n+m-1 (m = n+1); every connector has exactly
//! two children, every predicate node stands for an atom with two variable
//! slots.
struct TLChain {
    int num_connectors = 0;
    std::vector<int> left, right;  // child node ids, indexed by connector

    int num_pred_nodes() const { return num_connectors + 1; }
    int num_nodes() const { return 2 * num_connectors + 1; }
    int root() const { return 0; }
    bool is_connector(int node) const { return node < num_connectors; }

    //! Canonical bracket form, "." per predicate node: r=2 gives "((..).)".
    std::string id() const;

    bool operator==(const TLChain&) const = default;
};

struct ShapeConfig {
    TLChain chain;
    std::vector<Quant> prefix;
    std::vector<TypeId> types;

    int num_quantifiers() const { return static_cast<int>(prefix.size()); }
    std::string prefix_string() const;  // e.g. "AAE"
};

//! Every full binary tree with exactly `connectors` internal nodes, each
//! once, ordered by descending left-subtree size.
std::vector<TLChain> gen_chains(int connectors);

//! The q+1 prefixes with all universals first, from all-forall to all-exists.
std::vector<std::vector<Quant>> gen_quantifier_prefixes(int q);

//! Ordered type tuples, deduplicated under permutations inside each
//! same-kind quantifier block (canonical form: non-decreasing inside blocks).
std::vector<std::vector<TypeId>> gen_type_tuples(const Domain& d, int q,
                                                 const std::vector<Quant>& prefix);

}  // namespace ftlearn
