#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ftlearn/pddl.hpp"
#include "ftlearn/trace.hpp"

namespace ftlearn {

//! Thrown when an evaluation exceeds its configured work budget.
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class TLOp : uint8_t {
    True,
    Atom,
    Not,       // !
    And,       // &
    Or,        // |
    Implies,   // ->
    Until,     // U
    Next,      // X
    Finally,   // F
    Globally,  // G
    Prev,      // Y
    Once,      // O
    Hist,      // H
};

bool op_is_binary(TLOp op);
bool op_is_unary(TLOp op);
const char* op_token(TLOp op);

//! Node of the quantifier-free temporal core. Atom arguments are indices
//! into the enclosing formula's quantifier block.
struct TLNode {
    TLOp op = TLOp::True;
    PredId pred = -1;
    std::vector<int> vars;
    std::unique_ptr<TLNode> left, right;

    TLNode() = default;
    TLNode(const TLNode& other) { *this = other; }
    TLNode(TLNode&&) = default;
    TLNode& operator=(const TLNode& other);
    TLNode& operator=(TLNode&&) = default;

    static TLNode make_true();
    static TLNode atom(PredId pred, std::vector<int> vars);
    static TLNode unary(TLOp op, TLNode child);
    static TLNode binary(TLOp op, TLNode lhs, TLNode rhs);

    bool operator==(const TLNode& other) const;
};

enum class Quant : uint8_t { Forall, Exists };

struct Quantifier {
    Quant kind;
    std::string var;
    TypeId type;

    bool operator==(const Quantifier&) const = default;
};

//! Prenex formula: quantifier block over a temporal core.
struct Formula {
    std::vector<Quantifier> quantifiers;
    TLNode core;

    int num_quantifiers() const { return static_cast<int>(quantifiers.size()); }
    int num_operators() const;

    //! Canonical concrete syntax; parse_formula(to_text(f)) == f.
    std::string to_text(const Domain& d) const;
    //! Display form with logic glyphs; `_goal` predicates render as p^G.
    std::string to_pretty(const Domain& d) const;

    bool operator==(const Formula&) const = default;
};

//! Parses the documented grammar, e.g. "forall x:child. F served(x)".
//! Operators: X F G U Y O H ! & | ->, constant `true`.
Formula parse_formula(std::string_view text, const Domain& d);

struct CheckOptions {
    //! Quantifier domains: subtype-closed by default, exact type match when set.
    bool strict_types = false;
    //! Aborts with ResourceError past this many node-position evaluations.
    uint64_t max_checks = 10'000'000;
};

//! Truth of a quantifier-free node at position pos under a full environment
//! (env[j] = object bound to quantifier j).
bool check_tl(const std::vector<State>& states, std::span<const ObjId> env, int pos,
              const TLNode& node);

bool holds(const InstantiatedTrace& trace, const Formula& f, const Domain& d,
           const CheckOptions& opts = {});

//! Sum of the scores of the traces satisfying f.
double score(const Formula& f, const ScoredSet& ts, const Domain& d,
             const CheckOptions& opts = {});

//! JSON object {"text": ..., "quantifiers": [...], "operators": n}.
std::string formula_to_json(const Formula& f, const Domain& d);

}  // namespace ftlearn
