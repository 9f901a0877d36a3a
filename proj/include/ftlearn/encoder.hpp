#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ftlearn/cnf.hpp"
#include "ftlearn/ftl.hpp"
#include "ftlearn/shape.hpp"
#include "ftlearn/trace.hpp"

namespace ftlearn {

//! Hard-clause families of the encoding; used by mutation tests to drop one
//! family at a time.
enum class ConstraintFamily {
    EnvSelection,        // trace satisfaction over quantified environments
    AtomTruth,           // ground-atom truth at predicate nodes
    ConnectorSemantics,  // operator semantics at connector nodes
    TypeConsistency,     // variable types match predicate slots
    Discriminativeness,  // >= 1 positive captured, >= 1 negative missed
    RedundancyBans,      // no chained !!/FF/GG, no identical sibling atoms
    VariableVisibility,  // every quantified variable occurs in some atom
};

std::vector<TLOp> default_connector_alphabet();

struct EncoderOptions {
    std::vector<TLOp> ops = default_connector_alphabet();
    bool strict_types = false;
    //! Literal reading of the slot-assignment range (universal variables
    //! only); the default lets every quantified variable feed atom slots.
    bool strict_eq4 = false;
    int weight_decimals = 0;
    int64_t max_truth_vars = 20'000'000;
    std::optional<ConstraintFamily> drop_family;  // test hook
};

//! Per-trace environment table: the quantifier domains in this trace's
//! instance and the mixed-radix layout of their product (quantifier 0 most
//! significant).
struct TraceEnvTable {
    std::vector<std::vector<ObjId>> domains;
    std::vector<int64_t> strides;
    int64_t count = 0;  // 0 when some domain is empty
};

struct VarCensus {
    int64_t connector = 0;
    int64_t predicate = 0;
    int64_t slot = 0;
    int64_t slot_unused = 0;
    int64_t trace_sat = 0;
    int64_t truth = 0;
    int64_t aux = 0;
};

//! Bidirectional map between solver variables and (node, symbol) decisions.
struct VarMap {
    std::vector<TLOp> ops;
    std::vector<std::vector<int>> connector_var;  // [connector][op index]
    std::vector<PredId> eligible_preds;
    std::vector<std::vector<int>> predicate_var;  // [pred node][eligible index]
    std::vector<std::array<std::vector<int>, 2>> slot_var;  // [pred node][slot][q]
    std::vector<std::array<int, 2>> slot_unused_var;        // [pred node][slot]
    std::vector<int> trace_sat_var;                         // [trace]

    std::vector<TraceEnvTable> env;       // [trace]
    std::vector<std::vector<int>> y_base;  // [node][trace]

    std::vector<int64_t> trace_weight;  // scaled signed weights
    int64_t scale = 1;
    int64_t positive_weight_sum = 0;  // objective offset

    VarCensus census;

    int truth_var(int node, int trace, int pos, int64_t env_index,
                  const std::vector<InstantiatedTrace>& traces) const;

    //! Score implied by a solver cost, in original (unscaled) units.
    double implied_score(int64_t cost) const {
        return static_cast<double>(positive_weight_sum - cost) /
               static_cast<double>(scale);
    }

    std::string to_json(const ShapeConfig& cfg, const Domain& d) const;
};

struct Encoding {
    WCNF wcnf;
    VarMap varmap;
    bool infeasible = false;
    std::string infeasible_reason;
};

//! Compiles one shape configuration plus the scored traces into a weighted
//! partial CNF. Throws ValidationError when the positive or negative
//! partition is empty and ResourceError past the truth-variable cap.
Encoding encode(const ShapeConfig& cfg, const Domain& d, const ScoredSet& ts,
                const EncoderOptions& opts = {});

//! Reads the decision variables of a model back into a formula. The model
//! must satisfy the hard clauses; an exactly-one violation throws.
Formula decode(const std::vector<bool>& model, const VarMap& vm,
               const ShapeConfig& cfg, const Domain& d);

}  // namespace ftlearn
