#include "ftlearn/bench.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace ftlearn {

namespace {

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

std::string EvalReport::to_csv() const {
    std::ostringstream os;
    os << "formula,train_score,test_accuracy_pct,ops_budget,quantifiers\n";
    for (const auto& r : rows) {
        os << csv_quote(r.formula) << "," << r.train_score << "," << r.accuracy_pct
           << "," << r.ops_budget << "," << r.quantifiers << "\n";
    }
    return os.str();
}

std::string EvalReport::to_markdown() const {
    std::map<std::pair<int, int>, const EvalRow*> best;  // (ops, q) -> row
    std::vector<int> ops_budgets, quants;
    for (const auto& r : rows) {
        auto key = std::make_pair(r.ops_budget, r.quantifiers);
        auto it = best.find(key);
        if (it == best.end() || r.accuracy_pct > it->second->accuracy_pct)
            best[key] = &r;
        ops_budgets.push_back(r.ops_budget);
        quants.push_back(r.quantifiers);
    }
    std::sort(ops_budgets.begin(), ops_budgets.end());
    ops_budgets.erase(std::unique(ops_budgets.begin(), ops_budgets.end()),
                      ops_budgets.end());
    std::sort(quants.begin(), quants.end());
    quants.erase(std::unique(quants.begin(), quants.end()), quants.end());

    std::ostringstream os;
    os << "| ops \\ q |";
    for (int q : quants) os << " " << q << " |";
    os << "\n|---|";
    for (size_t i = 0; i < quants.size(); ++i) os << "---|";
    os << "\n";
    for (int r : ops_budgets) {
        os << "| " << r << " |";
        for (int q : quants) {
            auto it = best.find({r, q});
            if (it == best.end())
                os << " . |";
            else
                os << " " << it->second->accuracy_pct << " |";
        }
        os << "\n";
    }
    os << "\nBest formulas per cell:\n";
    for (const auto& [key, row] : best)
        os << "- ops=" << key.first << " q=" << key.second << ": `" << row->formula
           << "` (" << row->accuracy_pct << "%)\n";
    return os.str();
}

EvalReport evaluate(const std::vector<FoundFormula>& formulas, const ScoredSet& test,
                    const Domain& d, const CheckOptions& opts) {
    if (test.traces.empty()) throw ValidationError("empty test set");
    EvalReport report;
    for (const auto& ff : formulas) {
        int correct = 0;
        for (const auto& t : test.traces) {
            const bool sat = holds(t, ff.formula, d, opts);
            if (sat == t.positive()) ++correct;
        }
        EvalRow row;
        row.formula = ff.formula.to_text(d);
        row.pretty = ff.formula.to_pretty(d);
        row.train_score = ff.train_score;
        row.accuracy_pct =
            100.0 * static_cast<double>(correct) / static_cast<double>(test.traces.size());
        row.ops_budget = ff.ops_budget;
        row.quantifiers = ff.quantifiers;
        report.rows.push_back(std::move(row));
    }
    return report;
}

SetCoverTask gen_setcover_instance(int n, const std::vector<std::vector<int>>& sets,
                                   int k) {
    if (n < 1 || sets.empty()) throw ValidationError("universe and sets must be non-empty");
    if (k < 1) throw ValidationError("k must be >= 1");
    const int m = static_cast<int>(sets.size());
    for (const auto& s : sets)
        for (int e : s)
            if (e < 1 || e > n)
                throw ValidationError("set element " + std::to_string(e) +
                                      " outside the universe");

    auto domain = std::make_shared<Domain>();
    domain->name = "setcover";
    const TypeId set_type = domain->types.add_type("set", domain->types.root());
    std::vector<TypeId> subset_types;
    for (int i = 1; i <= m; ++i)
        subset_types.push_back(
            domain->types.add_type("set" + std::to_string(i), set_type));
    domain->predicates.push_back({"in", {set_type}});

    // All instances share the same objects: one per subset plus the mock d.
    auto base_instance = [&](const std::string& name) {
        Instance inst;
        inst.name = name;
        inst.domain_name = domain->name;
        for (int i = 1; i <= m; ++i) {
            inst.object_names.push_back("s" + std::to_string(i));
            inst.object_types.push_back(subset_types[i - 1]);
        }
        inst.object_names.push_back("d");
        inst.object_types.push_back(set_type);
        return inst;
    };

    ScoredSet ts;
    for (int j = 1; j <= n; ++j) {
        Instance inst = base_instance("elem" + std::to_string(j));
        std::vector<GroundFluent> fluents;
        for (int i = 0; i < m; ++i) {
            if (std::find(sets[i].begin(), sets[i].end(), j) != sets[i].end())
                fluents.push_back({0, {static_cast<ObjId>(i)}});
        }
        inst.init = State(fluents);
        inst.goal = inst.init;
        InstantiatedTrace t;
        t.instance = std::make_shared<const Instance>(std::move(inst));
        t.states = {t.instance->init};
        t.score = 1.0;
        t.id = "elem" + std::to_string(j);
        ts.traces.push_back(std::move(t));
    }
    {
        Instance inst = base_instance("mock");
        inst.init = State(std::vector<GroundFluent>{{0, {static_cast<ObjId>(m)}}});
        inst.goal = inst.init;
        InstantiatedTrace t;
        t.instance = std::make_shared<const Instance>(std::move(inst));
        t.states = {t.instance->init};
        t.score = -1.0;
        t.id = "mock";
        ts.traces.push_back(std::move(t));
    }

    SetCoverTask task;
    task.domain = std::move(domain);
    task.traces = std::move(ts);
    task.max_ops = m - 1;
    task.max_quantifiers = k;
    // Reaching the threshold means satisfying every element trace while
    // falsifying the mock, which is exactly the cover question.
    task.threshold = static_cast<double>(n);
    return task;
}

BruteForceResult brute_force_best(const ShapeConfig& cfg, const Domain& d,
                                  const ScoredSet& ts, const EncoderOptions& opts,
                                  uint64_t space_bound) {
    const int q = cfg.num_quantifiers();
    int b = 0;
    while (b < q && cfg.prefix[b] == Quant::Forall) ++b;
    const int allowed_j_end = opts.strict_eq4 ? b : q;
    auto slot_compat = [&](int j, const Predicate& p, int v) {
        if (opts.strict_types) return cfg.types[j] == p.arg_types[v];
        return d.types.subtype_of(cfg.types[j], p.arg_types[v]);
    };

    // All typable atoms over the quantified variables.
    struct AtomChoice {
        PredId pred;
        std::vector<int> vars;
    };
    std::vector<AtomChoice> atoms;
    for (PredId p = 0; p < static_cast<PredId>(d.predicates.size()); ++p) {
        const Predicate& pred = d.predicates[p];
        if (pred.arity() > 2) continue;
        if (pred.arity() == 0) {
            atoms.push_back({p, {}});
            continue;
        }
        std::vector<std::vector<int>> js(pred.arity());
        for (int v = 0; v < pred.arity(); ++v)
            for (int j = 0; j < allowed_j_end; ++j)
                if (slot_compat(j, pred, v)) js[v].push_back(j);
        if (std::any_of(js.begin(), js.end(),
                        [](const auto& v) { return v.empty(); }))
            continue;
        if (pred.arity() == 1) {
            for (int j : js[0]) atoms.push_back({p, {j}});
        } else {
            for (int j1 : js[0])
                for (int j2 : js[1]) atoms.push_back({p, {j1, j2}});
        }
    }

    BruteForceResult result;
    if (atoms.empty()) return result;

    const TLChain& chain = cfg.chain;
    const int n = chain.num_connectors;
    const int m = chain.num_pred_nodes();

    uint64_t space = 1;
    for (int i = 0; i < n; ++i) {
        space *= opts.ops.size();
        if (space > space_bound) throw ResourceError("labeling space exceeds the bound");
    }
    for (int l = 0; l < m; ++l) {
        space *= atoms.size();
        if (space > space_bound) throw ResourceError("labeling space exceeds the bound");
    }

    auto positives = ts.positives();
    auto negatives = ts.negatives();
    CheckOptions check;
    check.strict_types = opts.strict_types;

    std::vector<int> connector_label(n, 0);  // index into opts.ops
    std::vector<int> atom_label(m, 0);       // index into atoms

    auto build = [&](auto&& self, int node) -> TLNode {
        if (!chain.is_connector(node)) {
            const AtomChoice& a = atoms[atom_label[node - n]];
            return TLNode::atom(a.pred, a.vars);
        }
        const TLOp op = opts.ops[connector_label[node]];
        TLNode left = self(self, chain.left[node]);
        if (op_is_unary(op)) return TLNode::unary(op, std::move(left));
        return TLNode::binary(op, std::move(left), self(self, chain.right[node]));
    };

    auto banned = [&] {
        for (int i = 0; i < n; ++i) {
            const TLOp op = opts.ops[connector_label[i]];
            const int lc = chain.left[i];
            if (chain.is_connector(lc)) {
                const TLOp child = opts.ops[connector_label[lc]];
                if (op == child &&
                    (op == TLOp::Not || op == TLOp::Finally || op == TLOp::Globally))
                    return true;
            }
            const int rc = chain.right[i];
            if (op_is_binary(op) && !chain.is_connector(lc) && !chain.is_connector(rc) &&
                atom_label[lc - n] == atom_label[rc - n])
                return true;
        }
        return false;
    };

    Formula formula;
    for (int j = 0; j < q; ++j)
        formula.quantifiers.push_back(
            {cfg.prefix[j], "x" + std::to_string(j + 1), cfg.types[j]});

    auto visible = [&] {
        std::vector<bool> used(q, false);
        for (int l = 0; l < m; ++l)
            for (int v : atoms[atom_label[l]].vars) used[v] = true;
        return std::all_of(used.begin(), used.end(), [](bool u) { return u; });
    };

    auto visit = [&] {
        ++result.labelings;
        if (banned() || !visible()) return;
        formula.core = build(build, chain.root());
        bool some_positive = false, some_negative_missed = false;
        for (size_t t : positives)
            if (holds(ts.traces[t], formula, d, check)) {
                some_positive = true;
                break;
            }
        if (!some_positive) return;
        for (size_t t : negatives)
            if (!holds(ts.traces[t], formula, d, check)) {
                some_negative_missed = true;
                break;
            }
        if (!some_negative_missed) return;
        const double s = score(formula, ts, d, check);
        if (!result.best_score || s > *result.best_score) {
            result.best_score = s;
            result.best_formula = formula;
        }
    };

    // Odometer over connector labels then atom labels.
    auto enumerate = [&](auto&& self, int pos) -> void {
        if (pos == n + m) {
            visit();
            return;
        }
        if (pos < n) {
            for (size_t o = 0; o < opts.ops.size(); ++o) {
                connector_label[pos] = static_cast<int>(o);
                self(self, pos + 1);
            }
        } else {
            for (size_t a = 0; a < atoms.size(); ++a) {
                atom_label[pos - n] = static_cast<int>(a);
                self(self, pos + 1);
            }
        }
    };
    enumerate(enumerate, 0);
    return result;
}

}  // namespace ftlearn
