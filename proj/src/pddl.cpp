#include "ftlearn/pddl.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace ftlearn {

namespace {

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

struct Token {
    enum Kind { LParen, RParen, Symbol, End } kind;
    std::string text;
    int line = 1;
    int col = 1;
};

//! S-expression tokenizer with ';' line comments. Symbols are normalized to
//! lower case.
class Tokenizer {
public:
    explicit Tokenizer(std::string_view text) : text_(text) {}

    const Token& peek() {
        if (!lookahead_) lookahead_ = lex();
        return *lookahead_;
    }

    Token next() {
        Token t = peek();
        lookahead_.reset();
        return t;
    }

    Token expect(Token::Kind kind, const std::string& what) {
        Token t = next();
        if (t.kind != kind)
            throw ParseError("expected " + what + ", got '" + describe(t) + "'",
                             t.line, t.col);
        return t;
    }

    std::string expect_symbol(const std::string& what) {
        return expect(Token::Symbol, what).text;
    }

    //! Consumes the next symbol iff it equals `text`.
    bool accept_symbol(std::string_view text) {
        if (peek().kind == Token::Symbol && peek().text == text) {
            next();
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& msg) {
        const Token& t = peek();
        throw ParseError(msg, t.line, t.col);
    }

private:
    static std::string describe(const Token& t) {
        switch (t.kind) {
        case Token::LParen: return "(";
        case Token::RParen: return ")";
        case Token::Symbol: return t.text;
        default: return "<end of input>";
        }
    }

    Token lex() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
                continue;
            }
            if (c == '\n') {
                ++line_;
                col_ = 1;
                ++pos_;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++col_;
                ++pos_;
                continue;
            }
            int line = line_, col = col_;
            if (c == '(' || c == ')') {
                ++pos_;
                ++col_;
                return {c == '(' ? Token::LParen : Token::RParen, std::string(1, c), line, col};
            }
            size_t start = pos_;
            while (pos_ < text_.size()) {
                char d = text_[pos_];
                if (d == '(' || d == ')' || d == ';' ||
                    std::isspace(static_cast<unsigned char>(d)))
                    break;
                ++pos_;
                ++col_;
            }
            return {Token::Symbol, lowercase(text_.substr(start, pos_ - start)), line, col};
        }
        return {Token::End, "", line_, col_};
    }

    std::string_view text_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    std::optional<Token> lookahead_;
};

//! One "name... - type" group of a PDDL typed list.
struct TypedNames {
    std::vector<std::string> names;
    std::optional<std::string> type;  // absent: no '-' given
};

//! Parses "a b - t c d - u e f" up to the closing paren (not consumed).
std::vector<TypedNames> parse_typed_list(Tokenizer& tz) {
    std::vector<TypedNames> groups;
    TypedNames current;
    while (tz.peek().kind == Token::Symbol) {
        std::string sym = tz.next().text;
        if (sym == "-") {
            if (current.names.empty()) tz.fail("'-' without preceding names");
            current.type = tz.expect_symbol("type name");
            groups.push_back(std::move(current));
            current = {};
        } else {
            current.names.push_back(std::move(sym));
        }
    }
    if (!current.names.empty()) groups.push_back(std::move(current));
    return groups;
}

constexpr std::string_view kRootType = "object";

void parse_types_section(Tokenizer& tz, TypeTree& types) {
    auto groups = parse_typed_list(tz);
    // Collect edges first: parents may be declared after their children.
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& g : groups) {
        std::string parent = g.type.value_or(std::string(kRootType));
        for (const auto& n : g.names) edges.emplace_back(n, parent);
    }
    std::map<std::string, std::string> parent_of;
    for (const auto& [child, parent] : edges) {
        if (child == kRootType) {
            if (parent != kRootType)
                throw ValidationError("type 'object' must be the root");
            continue;
        }
        auto [it, inserted] = parent_of.emplace(child, parent);
        if (!inserted && it->second != parent)
            throw ValidationError("type '" + child + "' declared with two parents");
        if (!parent_of.count(parent) && parent != kRootType)
            parent_of.emplace(parent, std::string(kRootType));
    }
    // Insert parents before children; detect cycles by bounding the passes.
    std::vector<std::string> pending;
    for (const auto& [child, parent] : parent_of) pending.push_back(child);
    size_t remaining = pending.size();
    while (remaining > 0) {
        size_t progressed = 0;
        for (auto& name : pending) {
            if (name.empty() || types.find(name)) {
                name.clear();
                continue;
            }
            const std::string& parent = parent_of.at(name);
            if (auto p = types.find(parent)) {
                types.add_type(name, *p);
                name.clear();
                ++progressed;
            }
        }
        if (progressed == 0) throw ValidationError("cycle in type declarations");
        remaining -= progressed;
    }
}

void parse_predicates_section(Tokenizer& tz, Domain& d) {
    while (tz.peek().kind == Token::LParen) {
        tz.next();
        Token name_tok = tz.expect(Token::Symbol, "predicate name");
        Predicate p;
        p.name = name_tok.text;
        if (p.name == "=")
            throw ParseError("equality is not supported", name_tok.line, name_tok.col);
        for (const auto& g : parse_typed_list(tz)) {
            std::string type_name = g.type.value_or(std::string(kRootType));
            auto t = d.types.find(type_name);
            if (!t) throw ValidationError("undeclared type '" + type_name + "'");
            for (const auto& v : g.names) {
                if (v.empty() || v[0] != '?')
                    throw ParseError("predicate argument must be a variable",
                                     name_tok.line, name_tok.col);
                p.arg_types.push_back(*t);
            }
        }
        tz.expect(Token::RParen, "')'");
        if (d.find_predicate(p.name))
            throw ValidationError("duplicate predicate name '" + p.name + "'");
        d.predicates.push_back(std::move(p));
    }
}

//! Atom of the form (pred ?a ?b) over declared parameters.
SchemaAtom parse_schema_atom(Tokenizer& tz, const Domain& d, const ActionSchema& schema) {
    Token name_tok = tz.expect(Token::Symbol, "predicate name");
    auto pred = d.find_predicate(name_tok.text);
    if (!pred)
        throw ParseError("unknown predicate '" + name_tok.text + "'", name_tok.line,
                         name_tok.col);
    SchemaAtom atom;
    atom.pred = *pred;
    while (tz.peek().kind == Token::Symbol) {
        Token arg = tz.next();
        if (arg.text.empty() || arg.text[0] != '?')
            throw ParseError("schema atoms take variables only ('" + arg.text + "')",
                             arg.line, arg.col);
        auto it = std::find_if(schema.params.begin(), schema.params.end(),
                               [&](const auto& pr) { return pr.first == arg.text; });
        if (it == schema.params.end())
            throw ParseError("undeclared parameter '" + arg.text + "'", arg.line, arg.col);
        atom.args.push_back(static_cast<int>(it - schema.params.begin()));
    }
    tz.expect(Token::RParen, "')'");
    const Predicate& p = d.predicates[atom.pred];
    if (static_cast<int>(atom.args.size()) != p.arity())
        throw ParseError("arity mismatch for '" + p.name + "': expected " +
                             std::to_string(p.arity()) + ", got " +
                             std::to_string(atom.args.size()),
                         name_tok.line, name_tok.col);
    for (int i = 0; i < p.arity(); ++i) {
        TypeId arg_type = schema.params[atom.args[i]].second;
        if (!d.types.subtype_of(arg_type, p.arg_types[i]))
            throw ValidationError("argument " + std::to_string(i + 1) + " of '" +
                                  p.name + "' in schema '" + schema.name +
                                  "' has incompatible type");
    }
    return atom;
}

void parse_precondition(Tokenizer& tz, const Domain& d, ActionSchema& schema) {
    tz.expect(Token::LParen, "'('");
    if (tz.accept_symbol("and")) {
        while (tz.peek().kind == Token::LParen) {
            tz.next();
            schema.pre.push_back(parse_schema_atom(tz, d, schema));
        }
        tz.expect(Token::RParen, "')'");
    } else if (tz.peek().kind == Token::RParen) {
        tz.next();  // ()
    } else {
        schema.pre.push_back(parse_schema_atom(tz, d, schema));
    }
}

void parse_effect_entry(Tokenizer& tz, const Domain& d, ActionSchema& schema) {
    if (tz.accept_symbol("not")) {
        tz.expect(Token::LParen, "'('");
        schema.del.push_back(parse_schema_atom(tz, d, schema));
        tz.expect(Token::RParen, "')'");
    } else {
        schema.add.push_back(parse_schema_atom(tz, d, schema));
    }
}

void parse_effect(Tokenizer& tz, const Domain& d, ActionSchema& schema) {
    tz.expect(Token::LParen, "'('");
    if (tz.accept_symbol("and")) {
        while (tz.peek().kind == Token::LParen) {
            tz.next();
            parse_effect_entry(tz, d, schema);
        }
        tz.expect(Token::RParen, "')'");
    } else if (tz.peek().kind == Token::RParen) {
        tz.next();
    } else {
        parse_effect_entry(tz, d, schema);
    }
}

void parse_action_section(Tokenizer& tz, Domain& d) {
    ActionSchema schema;
    schema.name = tz.expect_symbol("action name");
    while (tz.peek().kind == Token::Symbol) {
        std::string key = tz.next().text;
        if (key == ":parameters") {
            tz.expect(Token::LParen, "'('");
            for (const auto& g : parse_typed_list(tz)) {
                std::string type_name = g.type.value_or(std::string(kRootType));
                auto t = d.types.find(type_name);
                if (!t) throw ValidationError("undeclared type '" + type_name + "'");
                for (const auto& v : g.names) {
                    if (v.empty() || v[0] != '?')
                        throw ValidationError("parameter '" + v + "' must be a variable");
                    schema.params.emplace_back(v, *t);
                }
            }
            tz.expect(Token::RParen, "')'");
        } else if (key == ":precondition") {
            parse_precondition(tz, d, schema);
        } else if (key == ":effect") {
            parse_effect(tz, d, schema);
        } else {
            tz.fail("unsupported action keyword '" + key + "'");
        }
    }
    tz.expect(Token::RParen, "')'");
    if (d.find_schema(schema.name))
        throw ValidationError("duplicate action name '" + schema.name + "'");
    d.schemas.push_back(std::move(schema));
}

GroundFluent parse_ground_fluent(Tokenizer& tz, const Domain& d, const Instance& inst) {
    Token name_tok = tz.expect(Token::Symbol, "predicate name");
    auto pred = d.find_predicate(name_tok.text);
    if (!pred)
        throw ParseError("unknown predicate '" + name_tok.text + "'", name_tok.line,
                         name_tok.col);
    GroundFluent f;
    f.pred = *pred;
    while (tz.peek().kind == Token::Symbol) {
        Token arg = tz.next();
        auto obj = inst.find_object(arg.text);
        if (!obj)
            throw ParseError("unknown object '" + arg.text + "'", arg.line, arg.col);
        f.args.push_back(*obj);
    }
    tz.expect(Token::RParen, "')'");
    const Predicate& p = d.predicates[f.pred];
    if (static_cast<int>(f.args.size()) != p.arity())
        throw ParseError("arity mismatch for '" + p.name + "'", name_tok.line,
                         name_tok.col);
    for (int i = 0; i < p.arity(); ++i) {
        if (!d.types.subtype_of(inst.object_types[f.args[i]], p.arg_types[i]))
            throw ValidationError("object '" + inst.object_names[f.args[i]] +
                                  "' has incompatible type for argument " +
                                  std::to_string(i + 1) + " of '" + p.name + "'");
    }
    return f;
}

}  // namespace

TypeTree::TypeTree() {
    names_.emplace_back(kRootType);
    parents_.push_back(-1);
    index_.emplace(kRootType, 0);
}

TypeId TypeTree::add_type(const std::string& name, TypeId parent) {
    if (auto it = index_.find(name); it != index_.end()) {
        if (parents_.at(it->second) != parent)
            throw ValidationError("type '" + name + "' already declared with a different parent");
        return it->second;
    }
    if (parent < 0 || parent >= size()) throw ValidationError("unknown parent type");
    TypeId id = size();
    names_.push_back(name);
    parents_.push_back(parent);
    index_.emplace(name, id);
    return id;
}

std::optional<TypeId> TypeTree::find(std::string_view name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

TypeId TypeTree::require(std::string_view name) const {
    auto t = find(name);
    if (!t) throw ValidationError("unknown type '" + std::string(name) + "'");
    return *t;
}

bool TypeTree::subtype_of(TypeId t1, TypeId t2) const {
    if (t1 < 0 || t1 >= size() || t2 < 0 || t2 >= size())
        throw ValidationError("unknown type id");
    for (TypeId t = t1; t >= 0; t = parents_[t])
        if (t == t2) return true;
    return false;
}

State::State(std::vector<GroundFluent> fluents) : fluents_(std::move(fluents)) {
    std::sort(fluents_.begin(), fluents_.end());
    fluents_.erase(std::unique(fluents_.begin(), fluents_.end()), fluents_.end());
}

bool State::contains(const GroundFluent& f) const {
    return std::binary_search(fluents_.begin(), fluents_.end(), f);
}

std::optional<PredId> Domain::find_predicate(std::string_view name) const {
    for (size_t i = 0; i < predicates.size(); ++i)
        if (predicates[i].name == name) return static_cast<PredId>(i);
    return std::nullopt;
}

PredId Domain::require_predicate(std::string_view name) const {
    auto p = find_predicate(name);
    if (!p) throw ValidationError("unknown predicate '" + std::string(name) + "'");
    return *p;
}

std::optional<int> Domain::find_schema(std::string_view name) const {
    for (size_t i = 0; i < schemas.size(); ++i)
        if (schemas[i].name == name) return static_cast<int>(i);
    return std::nullopt;
}

std::optional<ObjId> Instance::find_object(std::string_view name) const {
    for (size_t i = 0; i < object_names.size(); ++i)
        if (object_names[i] == name) return static_cast<ObjId>(i);
    return std::nullopt;
}

ObjId Instance::require_object(std::string_view name) const {
    auto o = find_object(name);
    if (!o) throw ValidationError("unknown object '" + std::string(name) + "'");
    return *o;
}

std::vector<ObjId> Instance::objects_of_type(const TypeTree& types, TypeId t,
                                             bool strict) const {
    std::vector<ObjId> out;
    for (ObjId o = 0; o < num_objects(); ++o) {
        if (strict ? object_types[o] == t : types.subtype_of(object_types[o], t))
            out.push_back(o);
    }
    return out;
}

Domain parse_domain(std::string_view text) {
    Tokenizer tz(text);
    Domain d;
    tz.expect(Token::LParen, "'('");
    if (!tz.accept_symbol("define")) tz.fail("expected 'define'");
    tz.expect(Token::LParen, "'('");
    if (!tz.accept_symbol("domain")) tz.fail("expected 'domain'");
    d.name = tz.expect_symbol("domain name");
    tz.expect(Token::RParen, "')'");

    while (tz.peek().kind == Token::LParen) {
        tz.next();
        std::string section = tz.expect_symbol("section keyword");
        if (section == ":requirements") {
            while (tz.peek().kind == Token::Symbol) {
                std::string req = tz.next().text;
                if (req != ":strips" && req != ":typing")
                    throw ValidationError("unsupported requirement '" + req + "'");
            }
            tz.expect(Token::RParen, "')'");
        } else if (section == ":types") {
            parse_types_section(tz, d.types);
            tz.expect(Token::RParen, "')'");
        } else if (section == ":predicates") {
            parse_predicates_section(tz, d);
            tz.expect(Token::RParen, "')'");
        } else if (section == ":action") {
            parse_action_section(tz, d);
        } else {
            tz.fail("unsupported section '" + section + "'");
        }
    }
    tz.expect(Token::RParen, "')'");
    tz.expect(Token::End, "end of input");
    return d;
}

Instance parse_instance(std::string_view text, const Domain& d) {
    Tokenizer tz(text);
    Instance inst;
    tz.expect(Token::LParen, "'('");
    if (!tz.accept_symbol("define")) tz.fail("expected 'define'");
    tz.expect(Token::LParen, "'('");
    if (!tz.accept_symbol("problem")) tz.fail("expected 'problem'");
    inst.name = tz.expect_symbol("problem name");
    tz.expect(Token::RParen, "')'");

    std::vector<GroundFluent> init, goal;
    while (tz.peek().kind == Token::LParen) {
        tz.next();
        std::string section = tz.expect_symbol("section keyword");
        if (section == ":domain") {
            inst.domain_name = tz.expect_symbol("domain name");
            if (inst.domain_name != d.name)
                throw ValidationError("instance is for domain '" + inst.domain_name +
                                      "', expected '" + d.name + "'");
            tz.expect(Token::RParen, "')'");
        } else if (section == ":objects") {
            for (const auto& g : parse_typed_list(tz)) {
                std::string type_name = g.type.value_or(std::string(kRootType));
                auto t = d.types.find(type_name);
                if (!t) throw ValidationError("undeclared type '" + type_name + "'");
                for (const auto& n : g.names) {
                    if (inst.find_object(n))
                        throw ValidationError("duplicate object '" + n + "'");
                    inst.object_names.push_back(n);
                    inst.object_types.push_back(*t);
                }
            }
            tz.expect(Token::RParen, "')'");
        } else if (section == ":init") {
            while (tz.peek().kind == Token::LParen) {
                tz.next();
                init.push_back(parse_ground_fluent(tz, d, inst));
            }
            tz.expect(Token::RParen, "')'");
        } else if (section == ":goal") {
            tz.expect(Token::LParen, "'('");
            if (tz.accept_symbol("and")) {
                while (tz.peek().kind == Token::LParen) {
                    tz.next();
                    goal.push_back(parse_ground_fluent(tz, d, inst));
                }
                tz.expect(Token::RParen, "')'");
            } else {
                goal.push_back(parse_ground_fluent(tz, d, inst));
            }
            tz.expect(Token::RParen, "')'");
        } else {
            tz.fail("unsupported section '" + section + "'");
        }
    }
    tz.expect(Token::RParen, "')'");
    tz.expect(Token::End, "end of input");
    inst.init = State(std::move(init));
    inst.goal = State(std::move(goal));
    return inst;
}

namespace {

void emit_typed_names(std::ostringstream& os, const std::vector<std::string>& names,
                      const std::vector<TypeId>& types, const TypeTree& tree,
                      const std::string& indent) {
    for (size_t i = 0; i < names.size(); ++i)
        os << indent << names[i] << " - " << tree.name(types[i]) << "\n";
}

void emit_schema_atoms(std::ostringstream& os, const std::vector<SchemaAtom>& atoms,
                       const Domain& d, const ActionSchema& schema, bool negate) {
    for (const auto& a : atoms) {
        os << " ";
        if (negate) os << "(not ";
        os << "(" << d.predicates[a.pred].name;
        for (int arg : a.args) os << " " << schema.params[arg].first;
        os << ")";
        if (negate) os << ")";
    }
}

}  // namespace

std::string to_pddl(const Domain& d) {
    std::ostringstream os;
    os << "(define (domain " << d.name << ")\n";
    os << "  (:requirements :strips :typing)\n";
    if (d.types.size() > 1) {
        os << "  (:types\n";
        for (TypeId t = 1; t < d.types.size(); ++t)
            os << "    " << d.types.name(t) << " - " << d.types.name(d.types.parent(t))
               << "\n";
        os << "  )\n";
    }
    if (!d.predicates.empty()) {
        os << "  (:predicates\n";
        for (const auto& p : d.predicates) {
            os << "    (" << p.name;
            for (int i = 0; i < p.arity(); ++i)
                os << " ?x" << i + 1 << " - " << d.types.name(p.arg_types[i]);
            os << ")\n";
        }
        os << "  )\n";
    }
    for (const auto& s : d.schemas) {
        os << "  (:action " << s.name << "\n    :parameters (";
        for (size_t i = 0; i < s.params.size(); ++i) {
            if (i > 0) os << " ";
            os << s.params[i].first << " - " << d.types.name(s.params[i].second);
        }
        os << ")\n    :precondition (and";
        emit_schema_atoms(os, s.pre, d, s, false);
        os << ")\n    :effect (and";
        emit_schema_atoms(os, s.add, d, s, false);
        emit_schema_atoms(os, s.del, d, s, true);
        os << ")\n  )\n";
    }
    os << ")\n";
    return os.str();
}

std::string to_pddl(const Instance& inst, const Domain& d) {
    std::ostringstream os;
    os << "(define (problem " << inst.name << ")\n";
    os << "  (:domain " << d.name << ")\n";
    os << "  (:objects\n";
    emit_typed_names(os, inst.object_names, inst.object_types, d.types, "    ");
    os << "  )\n  (:init\n";
    for (const auto& f : inst.init.fluents())
        os << "    (" << fluent_to_string(f, d, inst) << ")\n";
    os << "  )\n  (:goal (and\n";
    for (const auto& f : inst.goal.fluents())
        os << "    (" << fluent_to_string(f, d, inst) << ")\n";
    os << "  ))\n)\n";
    return os.str();
}

bool applicable(const State& s, const Operator& o) {
    return std::all_of(o.pre.begin(), o.pre.end(),
                       [&](const GroundFluent& f) { return s.contains(f); });
}

State apply(const State& s, const Operator& o) {
    if (!applicable(s, o))
        throw ValidationError("operator '" + o.schema_name + "' is not applicable");
    std::vector<GroundFluent> out;
    out.reserve(s.size() + o.add.size());
    for (const auto& f : s.fluents())
        if (std::find(o.del.begin(), o.del.end(), f) == o.del.end()) out.push_back(f);
    out.insert(out.end(), o.add.begin(), o.add.end());
    return State(std::move(out));
}

Operator ground_schema(const Domain& d, const Instance& inst,
                       const ActionSchema& schema, std::span<const ObjId> objects) {
    if (objects.size() != schema.params.size())
        throw ValidationError("action '" + schema.name + "' expects " +
                              std::to_string(schema.params.size()) + " arguments, got " +
                              std::to_string(objects.size()));
    for (size_t i = 0; i < objects.size(); ++i) {
        if (objects[i] < 0 || objects[i] >= inst.num_objects())
            throw ValidationError("unknown object id in binding");
        if (!d.types.subtype_of(inst.object_types[objects[i]], schema.params[i].second))
            throw ValidationError("object '" + inst.object_names[objects[i]] +
                                  "' has incompatible type for parameter " +
                                  std::to_string(i + 1) + " of '" + schema.name + "'");
    }
    Operator op;
    op.schema_name = schema.name;
    op.binding.assign(objects.begin(), objects.end());
    auto instantiate = [&](const std::vector<SchemaAtom>& atoms) {
        std::vector<GroundFluent> out;
        out.reserve(atoms.size());
        for (const auto& a : atoms) {
            GroundFluent f;
            f.pred = a.pred;
            for (int arg : a.args) f.args.push_back(objects[arg]);
            out.push_back(std::move(f));
        }
        return out;
    };
    op.pre = instantiate(schema.pre);
    op.add = instantiate(schema.add);
    op.del = instantiate(schema.del);
    return op;
}

std::string fluent_to_string(const GroundFluent& f, const Domain& d, const Instance& i) {
    std::string out = d.predicates[f.pred].name;
    for (ObjId o : f.args) {
        out += " ";
        out += i.object_names[o];
    }
    return out;
}

}  // namespace ftlearn
