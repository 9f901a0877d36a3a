#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ftlearn {

using TypeId = int32_t;
using PredId = int32_t;
using ObjId = int32_t;

//! Parse failure with source position (1-based line/column).
struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, int line, int col)
        : std::runtime_error(msg + " (line " + std::to_string(line) + ", col " +
                             std::to_string(col) + ")"),
          line(line), col(col) {}
    int line;
    int col;
};

//! Semantic rejection of an otherwise well-formed input.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

//! Tree of type symbols. The root is always "object"; every other type has
//! exactly one parent.
class TypeTree {
public:
    TypeTree();

    //! Adds a type under the given parent; returns the existing id if the
    //! name is already declared (reparenting an already-parented type, or
    //! creating a cycle, is an error).
    TypeId add_type(const std::string& name, TypeId parent);

    TypeId root() const { return 0; }
    std::optional<TypeId> find(std::string_view name) const;
    TypeId require(std::string_view name) const;

    //! t1 == t2 or t1 is a descendant of t2.
    bool subtype_of(TypeId t1, TypeId t2) const;

    const std::string& name(TypeId t) const { return names_.at(t); }
    TypeId parent(TypeId t) const { return parents_.at(t); }  // -1 for root
    int size() const { return static_cast<int>(names_.size()); }

    bool operator==(const TypeTree&) const = default;

private:
    std::vector<std::string> names_;
    std::vector<TypeId> parents_;
    std::map<std::string, TypeId, std::less<>> index_;
};

struct Predicate {
    std::string name;
    std::vector<TypeId> arg_types;

    int arity() const { return static_cast<int>(arg_types.size()); }
    bool operator==(const Predicate&) const = default;
};

//! Atom over schema parameters (argument values are parameter indices).
struct SchemaAtom {
    PredId pred = -1;
    std::vector<int> args;

    bool operator==(const SchemaAtom&) const = default;
};

struct ActionSchema {
    std::string name;
    std::vector<std::pair<std::string, TypeId>> params;
    std::vector<SchemaAtom> pre, add, del;

    bool operator==(const ActionSchema&) const = default;
};

struct GroundFluent {
    PredId pred = -1;
    std::vector<ObjId> args;

    auto operator<=>(const GroundFluent&) const = default;
};

//! Immutable set of ground fluents, kept sorted for fast membership tests.
class State {
public:
    State() = default;
    explicit State(std::vector<GroundFluent> fluents);

    bool contains(const GroundFluent& f) const;
    const std::vector<GroundFluent>& fluents() const { return fluents_; }
    size_t size() const { return fluents_.size(); }
    bool empty() const { return fluents_.empty(); }

    bool operator==(const State&) const = default;

private:
    std::vector<GroundFluent> fluents_;
};

struct Domain {
    std::string name;
    TypeTree types;
    std::vector<Predicate> predicates;
    std::vector<ActionSchema> schemas;

    std::optional<PredId> find_predicate(std::string_view name) const;
    PredId require_predicate(std::string_view name) const;
    std::optional<int> find_schema(std::string_view name) const;

    bool operator==(const Domain&) const = default;
};

struct Instance {
    std::string name;
    std::string domain_name;
    std::vector<std::string> object_names;
    std::vector<TypeId> object_types;
    State init;
    State goal;

    std::optional<ObjId> find_object(std::string_view name) const;
    ObjId require_object(std::string_view name) const;
    int num_objects() const { return static_cast<int>(object_names.size()); }

    //! Objects whose type is a subtype of t, or exactly t in strict mode.
    std::vector<ObjId> objects_of_type(const TypeTree& types, TypeId t,
                                       bool strict = false) const;

    bool operator==(const Instance&) const = default;
};

struct Operator {
    std::string schema_name;
    std::vector<ObjId> binding;
    std::vector<GroundFluent> pre, add, del;
};

Domain parse_domain(std::string_view text);
Instance parse_instance(std::string_view text, const Domain& d);

//! Serializers; parse(to_pddl(x)) reconstructs a structurally identical model.
std::string to_pddl(const Domain& d);
std::string to_pddl(const Instance& i, const Domain& d);

bool applicable(const State& s, const Operator& o);
State apply(const State& s, const Operator& o);  // throws if not applicable

//! Instantiates a schema with the given objects, checking arity and types.
Operator ground_schema(const Domain& d, const Instance& inst,
                       const ActionSchema& schema, std::span<const ObjId> objects);

std::string fluent_to_string(const GroundFluent& f, const Domain& d, const Instance& i);

}  // namespace ftlearn
