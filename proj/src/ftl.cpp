#include "ftlearn/ftl.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <json.hpp>

namespace ftlearn {

bool op_is_binary(TLOp op) {
    switch (op) {
    case TLOp::And:
    case TLOp::Or:
    case TLOp::Implies:
    case TLOp::Until:
        return true;
    default:
        return false;
    }
}

bool op_is_unary(TLOp op) {
    switch (op) {
    case TLOp::Not:
    case TLOp::Next:
    case TLOp::Finally:
    case TLOp::Globally:
    case TLOp::Prev:
    case TLOp::Once:
    case TLOp::Hist:
        return true;
    default:
        return false;
    }
}

const char* op_token(TLOp op) {
    switch (op) {
    case TLOp::True: return "true";
    case TLOp::Atom: return "<atom>";
    case TLOp::Not: return "!";
    case TLOp::And: return "&";
    case TLOp::Or: return "|";
    case TLOp::Implies: return "->";
    case TLOp::Until: return "U";
    case TLOp::Next: return "X";
    case TLOp::Finally: return "F";
    case TLOp::Globally: return "G";
    case TLOp::Prev: return "Y";
    case TLOp::Once: return "O";
    case TLOp::Hist: return "H";
    }
    return "?";
}

TLNode& TLNode::operator=(const TLNode& other) {
    if (this == &other) return *this;
    op = other.op;
    pred = other.pred;
    vars = other.vars;
    left = other.left ? std::make_unique<TLNode>(*other.left) : nullptr;
    right = other.right ? std::make_unique<TLNode>(*other.right) : nullptr;
    return *this;
}

TLNode TLNode::make_true() { return TLNode{}; }

TLNode TLNode::atom(PredId pred, std::vector<int> vars) {
    TLNode n;
    n.op = TLOp::Atom;
    n.pred = pred;
    n.vars = std::move(vars);
    return n;
}

TLNode TLNode::unary(TLOp op, TLNode child) {
    TLNode n;
    n.op = op;
    n.left = std::make_unique<TLNode>(std::move(child));
    return n;
}

TLNode TLNode::binary(TLOp op, TLNode lhs, TLNode rhs) {
    TLNode n;
    n.op = op;
    n.left = std::make_unique<TLNode>(std::move(lhs));
    n.right = std::make_unique<TLNode>(std::move(rhs));
    return n;
}

bool TLNode::operator==(const TLNode& other) const {
    if (op != other.op || pred != other.pred || vars != other.vars) return false;
    auto eq = [](const std::unique_ptr<TLNode>& a, const std::unique_ptr<TLNode>& b) {
        if (!a && !b) return true;
        return a && b && *a == *b;
    };
    return eq(left, other.left) && eq(right, other.right);
}

namespace {

int count_operators(const TLNode& n) {
    int own = (n.op == TLOp::True || n.op == TLOp::Atom) ? 0 : 1;
    if (n.left) own += count_operators(*n.left);
    if (n.right) own += count_operators(*n.right);
    return own;
}

// Precedence levels, loosest first: -> | & U unary atom.
int precedence(TLOp op) {
    switch (op) {
    case TLOp::Implies: return 0;
    case TLOp::Or: return 1;
    case TLOp::And: return 2;
    case TLOp::Until: return 3;
    default: return 4;
    }
}

void print_node(std::ostringstream& os, const TLNode& n, const Formula& f,
                const Domain& d, int min_prec, bool pretty) {
    if (n.op == TLOp::True) {
        os << (pretty ? "true" : "true");
        return;
    }
    if (n.op == TLOp::Atom) {
        std::string name = d.predicates[n.pred].name;
        if (pretty && name.size() > 5 && name.ends_with("_goal"))
            name = name.substr(0, name.size() - 5) + "^G";
        os << name;
        if (!n.vars.empty()) {
            os << "(";
            for (size_t i = 0; i < n.vars.size(); ++i) {
                if (i > 0) os << ",";
                os << f.quantifiers[n.vars[i]].var;
            }
            os << ")";
        }
        return;
    }
    int prec = precedence(n.op);
    bool parens = prec < min_prec;
    if (parens) os << "(";
    if (op_is_unary(n.op)) {
        if (pretty) {
            switch (n.op) {
            case TLOp::Not: os << "¬"; break;
            case TLOp::Next: os << "○ "; break;
            case TLOp::Finally: os << "◇ "; break;
            case TLOp::Globally: os << "□ "; break;
            default: os << op_token(n.op) << " "; break;
            }
        } else {
            os << op_token(n.op) << (n.op == TLOp::Not ? "" : " ");
        }
        print_node(os, *n.left, f, d, 4, pretty);
    } else {
        // Binary operators parse right-associatively; mirror that here.
        print_node(os, *n.left, f, d, prec + 1, pretty);
        if (pretty) {
            switch (n.op) {
            case TLOp::And: os << " ∧ "; break;
            case TLOp::Or: os << " ∨ "; break;
            case TLOp::Implies: os << " ⇒ "; break;
            default: os << " " << op_token(n.op) << " "; break;
            }
        } else {
            os << " " << op_token(n.op) << " ";
        }
        print_node(os, *n.right, f, d, prec, pretty);
    }
    if (parens) os << ")";
}

}  // namespace

int Formula::num_operators() const { return count_operators(core); }

std::string Formula::to_text(const Domain& d) const {
    std::ostringstream os;
    for (const auto& q : quantifiers) {
        os << (q.kind == Quant::Forall ? "forall " : "exists ") << q.var << ":"
           << d.types.name(q.type) << ". ";
    }
    print_node(os, core, *this, d, 0, false);
    return os.str();
}

std::string Formula::to_pretty(const Domain& d) const {
    std::ostringstream os;
    for (const auto& q : quantifiers) {
        os << (q.kind == Quant::Forall ? "∀" : "∃") << q.var << "∈"
           << d.types.name(q.type) << ". ";
    }
    print_node(os, core, *this, d, 0, true);
    return os.str();
}

namespace {

struct FormulaToken {
    enum Kind {
        LParen, RParen, Comma, Colon, Dot, Bang, Amp, Pipe, Arrow,
        Op,       // X F G U Y O H (text holds the letter)
        Ident,    // lowercased identifier
        KwForall, KwExists, KwTrue, End,
    } kind;
    std::string text;
    int pos = 0;
};

class FormulaLexer {
public:
    explicit FormulaLexer(std::string_view text) : text_(text) {}

    const FormulaToken& peek() {
        if (!lookahead_) lookahead_ = lex();
        return *lookahead_;
    }

    FormulaToken next() {
        FormulaToken t = peek();
        lookahead_.reset();
        return t;
    }

    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError("formula: " + msg, 1, peek().pos + 1);
    }

private:
    FormulaToken lex() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        int start = static_cast<int>(pos_);
        if (pos_ >= text_.size()) return {FormulaToken::End, "", start};
        char c = text_[pos_];
        switch (c) {
        case '(': ++pos_; return {FormulaToken::LParen, "(", start};
        case ')': ++pos_; return {FormulaToken::RParen, ")", start};
        case ',': ++pos_; return {FormulaToken::Comma, ",", start};
        case ':': ++pos_; return {FormulaToken::Colon, ":", start};
        case '.': ++pos_; return {FormulaToken::Dot, ".", start};
        case '!': ++pos_; return {FormulaToken::Bang, "!", start};
        case '&': ++pos_; return {FormulaToken::Amp, "&", start};
        case '|': ++pos_; return {FormulaToken::Pipe, "|", start};
        case '-':
            if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
                pos_ += 2;
                return {FormulaToken::Arrow, "->", start};
            }
            break;
        default:
            break;
        }
        if (!is_word_char(c))
            throw ParseError(std::string("formula: unexpected character '") + c + "'",
                             1, start + 1);
        size_t begin = pos_;
        while (pos_ < text_.size() && is_word_char(text_[pos_])) {
            if (text_[pos_] == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>')
                break;
            ++pos_;
        }
        std::string word(text_.substr(begin, pos_ - begin));
        if (word.size() == 1 && std::string("XFGUYOH").find(word[0]) != std::string::npos)
            return {FormulaToken::Op, word, start};
        std::transform(word.begin(), word.end(), word.begin(),
                       [](unsigned char ch) { return std::tolower(ch); });
        if (word == "forall") return {FormulaToken::KwForall, word, start};
        if (word == "exists") return {FormulaToken::KwExists, word, start};
        if (word == "true") return {FormulaToken::KwTrue, word, start};
        return {FormulaToken::Ident, word, start};
    }

    static bool is_word_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
    }

    std::string_view text_;
    size_t pos_ = 0;
    std::optional<FormulaToken> lookahead_;
};

class FormulaParser {
public:
    FormulaParser(std::string_view text, const Domain& d) : lx_(text), d_(d) {}

    Formula parse() {
        Formula f;
        while (lx_.peek().kind == FormulaToken::KwForall ||
               lx_.peek().kind == FormulaToken::KwExists) {
            Quant kind = lx_.next().kind == FormulaToken::KwForall ? Quant::Forall
                                                                   : Quant::Exists;
            if (lx_.peek().kind != FormulaToken::Ident) lx_.fail("expected variable name");
            std::string var = lx_.next().text;
            if (std::any_of(f.quantifiers.begin(), f.quantifiers.end(),
                            [&](const Quantifier& q) { return q.var == var; }))
                lx_.fail("variable '" + var + "' bound twice");
            if (lx_.next().kind != FormulaToken::Colon) lx_.fail("expected ':'");
            if (lx_.peek().kind != FormulaToken::Ident) lx_.fail("expected type name");
            TypeId type = d_.types.require(lx_.next().text);
            if (lx_.next().kind != FormulaToken::Dot) lx_.fail("expected '.'");
            f.quantifiers.push_back({kind, std::move(var), type});
        }
        quantifiers_ = &f.quantifiers;
        f.core = parse_implies();
        if (lx_.peek().kind != FormulaToken::End)
            lx_.fail("trailing input (quantifiers are only allowed in prefix position)");
        return f;
    }

private:
    TLNode parse_implies() {
        TLNode lhs = parse_or();
        if (lx_.peek().kind == FormulaToken::Arrow) {
            lx_.next();
            return TLNode::binary(TLOp::Implies, std::move(lhs), parse_implies());
        }
        return lhs;
    }

    TLNode parse_or() {
        TLNode lhs = parse_and();
        if (lx_.peek().kind == FormulaToken::Pipe) {
            lx_.next();
            return TLNode::binary(TLOp::Or, std::move(lhs), parse_or());
        }
        return lhs;
    }

    TLNode parse_and() {
        TLNode lhs = parse_until();
        if (lx_.peek().kind == FormulaToken::Amp) {
            lx_.next();
            return TLNode::binary(TLOp::And, std::move(lhs), parse_and());
        }
        return lhs;
    }

    TLNode parse_until() {
        TLNode lhs = parse_unary();
        if (lx_.peek().kind == FormulaToken::Op && lx_.peek().text == "U") {
            lx_.next();
            return TLNode::binary(TLOp::Until, std::move(lhs), parse_until());
        }
        return lhs;
    }

    TLNode parse_unary() {
        if (lx_.peek().kind == FormulaToken::Bang) {
            lx_.next();
            return TLNode::unary(TLOp::Not, parse_unary());
        }
        if (lx_.peek().kind == FormulaToken::Op && lx_.peek().text != "U") {
            char c = lx_.next().text[0];
            TLOp op;
            switch (c) {
            case 'X': op = TLOp::Next; break;
            case 'F': op = TLOp::Finally; break;
            case 'G': op = TLOp::Globally; break;
            case 'Y': op = TLOp::Prev; break;
            case 'O': op = TLOp::Once; break;
            default: op = TLOp::Hist; break;
            }
            return TLNode::unary(op, parse_unary());
        }
        return parse_primary();
    }

    TLNode parse_primary() {
        const FormulaToken& t = lx_.peek();
        if (t.kind == FormulaToken::LParen) {
            lx_.next();
            TLNode inner = parse_implies();
            if (lx_.next().kind != FormulaToken::RParen) lx_.fail("expected ')'");
            return inner;
        }
        if (t.kind == FormulaToken::KwTrue) {
            lx_.next();
            return TLNode::make_true();
        }
        if (t.kind == FormulaToken::KwForall || t.kind == FormulaToken::KwExists)
            lx_.fail("quantifiers must form a prefix");
        if (t.kind != FormulaToken::Ident) lx_.fail("expected an atom");
        std::string name = lx_.next().text;
        auto pred = d_.find_predicate(name);
        if (!pred) lx_.fail("unknown predicate '" + name + "'");
        std::vector<int> vars;
        if (lx_.peek().kind == FormulaToken::LParen) {
            lx_.next();
            while (true) {
                if (lx_.peek().kind != FormulaToken::Ident)
                    lx_.fail("expected variable name");
                vars.push_back(resolve_var(lx_.next().text));
                if (lx_.peek().kind == FormulaToken::Comma) {
                    lx_.next();
                    continue;
                }
                break;
            }
            if (lx_.next().kind != FormulaToken::RParen) lx_.fail("expected ')'");
        }
        const Predicate& p = d_.predicates[*pred];
        if (static_cast<int>(vars.size()) != p.arity())
            lx_.fail("arity mismatch for '" + name + "': expected " +
                     std::to_string(p.arity()) + " arguments, got " +
                     std::to_string(vars.size()));
        for (int i = 0; i < p.arity(); ++i) {
            TypeId var_type = (*quantifiers_)[vars[i]].type;
            if (!d_.types.subtype_of(var_type, p.arg_types[i]))
                lx_.fail("variable '" + (*quantifiers_)[vars[i]].var +
                         "' has incompatible type for argument " + std::to_string(i + 1) +
                         " of '" + name + "'");
        }
        return TLNode::atom(*pred, std::move(vars));
    }

    int resolve_var(const std::string& name) {
        for (size_t j = 0; j < quantifiers_->size(); ++j)
            if ((*quantifiers_)[j].var == name) return static_cast<int>(j);
        lx_.fail("unbound variable '" + name + "'");
    }

    FormulaLexer lx_;
    const Domain& d_;
    const std::vector<Quantifier>* quantifiers_ = nullptr;
};

struct CheckBudget {
    uint64_t remaining;

    void spend() {
        if (remaining == 0)
            throw ResourceError("formula evaluation exceeded its work budget");
        --remaining;
    }
};

bool eval_node(const std::vector<State>& states, std::span<const ObjId> env, int pos,
               const TLNode& n, CheckBudget* budget) {
    if (budget) budget->spend();
    const int last = static_cast<int>(states.size()) - 1;
    switch (n.op) {
    case TLOp::True:
        return true;
    case TLOp::Atom: {
        GroundFluent f;
        f.pred = n.pred;
        f.args.reserve(n.vars.size());
        for (int v : n.vars) f.args.push_back(env[v]);
        return states[pos].contains(f);
    }
    case TLOp::Not:
        return !eval_node(states, env, pos, *n.left, budget);
    case TLOp::And:
        return eval_node(states, env, pos, *n.left, budget) &&
               eval_node(states, env, pos, *n.right, budget);
    case TLOp::Or:
        return eval_node(states, env, pos, *n.left, budget) ||
               eval_node(states, env, pos, *n.right, budget);
    case TLOp::Implies:
        return !eval_node(states, env, pos, *n.left, budget) ||
               eval_node(states, env, pos, *n.right, budget);
    case TLOp::Next:
        return pos < last && eval_node(states, env, pos + 1, *n.left, budget);
    case TLOp::Prev:
        return pos > 0 && eval_node(states, env, pos - 1, *n.left, budget);
    case TLOp::Finally:
        for (int j = pos; j <= last; ++j)
            if (eval_node(states, env, j, *n.left, budget)) return true;
        return false;
    case TLOp::Globally:
        for (int j = pos; j <= last; ++j)
            if (!eval_node(states, env, j, *n.left, budget)) return false;
        return true;
    case TLOp::Once:
        for (int j = pos; j >= 0; --j)
            if (eval_node(states, env, j, *n.left, budget)) return true;
        return false;
    case TLOp::Hist:
        for (int j = pos; j >= 0; --j)
            if (!eval_node(states, env, j, *n.left, budget)) return false;
        return true;
    case TLOp::Until:
        for (int j = pos; j <= last; ++j) {
            if (eval_node(states, env, j, *n.right, budget)) {
                bool prefix_ok = true;
                for (int k = pos; k < j && prefix_ok; ++k)
                    prefix_ok = eval_node(states, env, k, *n.left, budget);
                if (prefix_ok) return true;
            }
        }
        return false;
    }
    return false;
}

void collect_used_vars(const TLNode& n, std::vector<bool>& used) {
    if (n.op == TLOp::Atom)
        for (int v : n.vars) used[v] = true;
    if (n.left) collect_used_vars(*n.left, used);
    if (n.right) collect_used_vars(*n.right, used);
}

bool expand_quantifiers(const InstantiatedTrace& trace, const Formula& f,
                        const std::vector<std::vector<ObjId>>& domains,
                        const std::vector<bool>& used, std::vector<ObjId>& env,
                        size_t j, CheckBudget* budget) {
    if (j == f.quantifiers.size())
        return eval_node(trace.states, env, 0, f.core, budget);
    // A variable absent from every atom only matters through domain emptiness.
    if (!used[j] && !domains[j].empty()) {
        env[j] = domains[j][0];
        return expand_quantifiers(trace, f, domains, used, env, j + 1, budget);
    }
    if (f.quantifiers[j].kind == Quant::Forall) {
        for (ObjId o : domains[j]) {
            env[j] = o;
            if (!expand_quantifiers(trace, f, domains, used, env, j + 1, budget))
                return false;
        }
        return true;
    }
    for (ObjId o : domains[j]) {
        env[j] = o;
        if (expand_quantifiers(trace, f, domains, used, env, j + 1, budget)) return true;
    }
    return false;
}

}  // namespace

Formula parse_formula(std::string_view text, const Domain& d) {
    return FormulaParser(text, d).parse();
}

bool check_tl(const std::vector<State>& states, std::span<const ObjId> env, int pos,
              const TLNode& node) {
    if (states.empty() || pos < 0 || pos >= static_cast<int>(states.size()))
        throw ValidationError("position out of range");
    return eval_node(states, env, pos, node, nullptr);
}

bool holds(const InstantiatedTrace& trace, const Formula& f, const Domain& d,
           const CheckOptions& opts) {
    std::vector<bool> used(f.quantifiers.size(), false);
    collect_used_vars(f.core, used);
    std::vector<std::vector<ObjId>> domains;
    domains.reserve(f.quantifiers.size());
    for (const auto& q : f.quantifiers) {
        if (q.type < 0 || q.type >= d.types.size())
            throw ValidationError("unknown type in quantifier");
        domains.push_back(
            trace.instance->objects_of_type(d.types, q.type, opts.strict_types));
    }
    std::vector<ObjId> env(f.quantifiers.size(), -1);
    CheckBudget budget{opts.max_checks};
    return expand_quantifiers(trace, f, domains, used, env, 0, &budget);
}

double score(const Formula& f, const ScoredSet& ts, const Domain& d,
             const CheckOptions& opts) {
    double total = 0.0;
    for (const auto& t : ts.traces)
        if (holds(t, f, d, opts)) total += t.score;
    return total;
}

std::string formula_to_json(const Formula& f, const Domain& d) {
    nlohmann::json doc;
    doc["text"] = f.to_text(d);
    doc["operators"] = f.num_operators();
    auto quants = nlohmann::json::array();
    for (const auto& q : f.quantifiers) {
        quants.push_back({{"kind", q.kind == Quant::Forall ? "forall" : "exists"},
                          {"var", q.var},
                          {"type", d.types.name(q.type)}});
    }
    doc["quantifiers"] = std::move(quants);
    return doc.dump();
}

}  // namespace ftlearn
