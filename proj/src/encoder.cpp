#include "ftlearn/encoder.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace ftlearn {

std::vector<TLOp> default_connector_alphabet() {
    return {TLOp::And,  TLOp::Or,      TLOp::Implies,  TLOp::Until,
            TLOp::Not,  TLOp::Next,    TLOp::Finally,  TLOp::Globally,
            TLOp::Prev, TLOp::Once,    TLOp::Hist};
}

namespace {

int64_t scaled_weight(double w, int64_t scale) {
    // Banker's rounding: the default FE_TONEAREST mode rounds half to even.
    return static_cast<int64_t>(std::nearbyint(w * static_cast<double>(scale)));
}

bool family_dropped(const EncoderOptions& opts, ConstraintFamily fam) {
    return opts.drop_family && *opts.drop_family == fam;
}

}  // namespace

int VarMap::truth_var(int node, int trace, int pos, int64_t env_index,
                      const std::vector<InstantiatedTrace>&) const {
    const TraceEnvTable& table = env[trace];
    return y_base[node][trace] +
           static_cast<int>(pos * table.count + env_index);
}

std::string VarMap::to_json(const ShapeConfig& cfg, const Domain& d) const {
    nlohmann::json doc;
    doc["chain"] = cfg.chain.id();
    doc["prefix"] = cfg.prefix_string();
    auto types = nlohmann::json::array();
    for (TypeId t : cfg.types) types.push_back(d.types.name(t));
    doc["types"] = std::move(types);

    auto connectors = nlohmann::json::array();
    for (size_t i = 0; i < connector_var.size(); ++i)
        for (size_t o = 0; o < ops.size(); ++o)
            connectors.push_back({{"node", i}, {"op", op_token(ops[o])},
                                  {"var", connector_var[i][o]}});
    doc["connector_vars"] = std::move(connectors);

    auto predicates = nlohmann::json::array();
    for (size_t l = 0; l < predicate_var.size(); ++l)
        for (size_t p = 0; p < eligible_preds.size(); ++p)
            predicates.push_back({{"pred_node", l},
                                  {"predicate", d.predicates[eligible_preds[p]].name},
                                  {"var", predicate_var[l][p]}});
    doc["predicate_vars"] = std::move(predicates);

    auto slots = nlohmann::json::array();
    for (size_t l = 0; l < slot_var.size(); ++l) {
        for (int v = 0; v < 2; ++v) {
            for (size_t j = 0; j < slot_var[l][v].size(); ++j)
                slots.push_back({{"pred_node", l}, {"slot", v + 1},
                                 {"quantifier", j + 1}, {"var", slot_var[l][v][j]}});
            slots.push_back({{"pred_node", l}, {"slot", v + 1},
                             {"quantifier", "unused"}, {"var", slot_unused_var[l][v]}});
        }
    }
    doc["slot_vars"] = std::move(slots);

    auto sats = nlohmann::json::array();
    for (size_t t = 0; t < trace_sat_var.size(); ++t)
        sats.push_back({{"trace", t}, {"var", trace_sat_var[t]}});
    doc["trace_sat_vars"] = std::move(sats);

    doc["scale"] = scale;
    doc["objective_offset"] = positive_weight_sum;
    return doc.dump(2) + "\n";
}

Encoding encode(const ShapeConfig& cfg, const Domain& d, const ScoredSet& ts,
                const EncoderOptions& opts) {
    const int q = cfg.num_quantifiers();
    if (q < 1) throw ValidationError("configuration needs at least one quantifier");
    if (static_cast<int>(cfg.types.size()) != q)
        throw ValidationError("type tuple length must match the prefix");
    int b = 0;
    while (b < q && cfg.prefix[b] == Quant::Forall) ++b;
    for (int j = b; j < q; ++j)
        if (cfg.prefix[j] == Quant::Forall)
            throw ValidationError("universal quantifiers must precede existentials");
    if (opts.ops.empty()) throw ValidationError("empty connector alphabet");
    for (TLOp op : opts.ops)
        if (!op_is_unary(op) && !op_is_binary(op))
            throw ValidationError("connector alphabet must contain operators only");

    const auto positives = ts.positives();
    const auto negatives = ts.negatives();
    if (positives.empty() || negatives.empty())
        throw ValidationError(
            "learning needs at least one positive and one negative trace");

    Encoding enc;
    WCNF& f = enc.wcnf;
    VarMap& vm = enc.varmap;
    vm.ops = opts.ops;

    const TLChain& chain = cfg.chain;
    const int n = chain.num_connectors;
    const int m = chain.num_pred_nodes();
    const int nodes = chain.num_nodes();
    const int num_traces = static_cast<int>(ts.traces.size());

    // Quantifier positions allowed in atom slots.
    const int allowed_j_end = opts.strict_eq4 ? b : q;

    auto slot_compat = [&](int j, const Predicate& p, int v) {
        if (family_dropped(opts, ConstraintFamily::TypeConsistency)) return true;
        if (opts.strict_types) return cfg.types[j] == p.arg_types[v];
        return d.types.subtype_of(cfg.types[j], p.arg_types[v]);
    };

    // A predicate is eligible when its atoms fit a two-slot node and every
    // real slot can be fed by some quantified variable.
    std::vector<std::array<std::vector<int>, 2>> compat_js;  // per eligible pred
    for (PredId p = 0; p < static_cast<PredId>(d.predicates.size()); ++p) {
        const Predicate& pred = d.predicates[p];
        if (pred.arity() > 2) continue;
        std::array<std::vector<int>, 2> js;
        bool ok = true;
        for (int v = 0; v < pred.arity(); ++v) {
            for (int j = 0; j < allowed_j_end; ++j)
                if (slot_compat(j, pred, v)) js[v].push_back(j);
            if (js[v].empty()) ok = false;
        }
        if (!ok) continue;
        vm.eligible_preds.push_back(p);
        compat_js.push_back(std::move(js));
    }
    if (vm.eligible_preds.empty()) {
        enc.infeasible = true;
        enc.infeasible_reason = "no predicate fits the chosen type tuple";
        return enc;
    }
    const int num_eligible = static_cast<int>(vm.eligible_preds.size());

    // Environment tables and the truth-variable budget.
    vm.env.resize(num_traces);
    int64_t total_truth = 0;
    for (int t = 0; t < num_traces; ++t) {
        TraceEnvTable& table = vm.env[t];
        table.domains.resize(q);
        table.strides.assign(q, 0);
        table.count = 1;
        for (int j = 0; j < q; ++j)
            table.domains[j] = ts.traces[t].instance->objects_of_type(
                d.types, cfg.types[j], opts.strict_types);
        for (int j = q - 1; j >= 0; --j) {
            table.strides[j] = table.count;
            table.count *= static_cast<int64_t>(table.domains[j].size());
        }
        total_truth += table.count * ts.traces[t].length() * nodes;
    }
    if (total_truth > opts.max_truth_vars)
        throw ResourceError("environment blow-up: " + std::to_string(total_truth) +
                            " truth variables exceed the cap of " +
                            std::to_string(opts.max_truth_vars));

    // --- Variable allocation (fixed order for determinism) ---
    vm.connector_var.assign(n, {});
    for (int i = 0; i < n; ++i)
        for (size_t o = 0; o < vm.ops.size(); ++o)
            vm.connector_var[i].push_back(f.new_var());
    vm.predicate_var.assign(m, {});
    for (int l = 0; l < m; ++l)
        for (int p = 0; p < num_eligible; ++p)
            vm.predicate_var[l].push_back(f.new_var());
    vm.slot_var.assign(m, {});
    vm.slot_unused_var.assign(m, {0, 0});
    for (int l = 0; l < m; ++l) {
        for (int v = 0; v < 2; ++v) {
            for (int j = 0; j < q; ++j) vm.slot_var[l][v].push_back(f.new_var());
            vm.slot_unused_var[l][v] = f.new_var();
        }
    }
    vm.trace_sat_var.assign(num_traces, 0);
    for (int t = 0; t < num_traces; ++t) vm.trace_sat_var[t] = f.new_var();

    vm.y_base.assign(nodes, std::vector<int>(num_traces, 0));
    for (int node = 0; node < nodes; ++node) {
        for (int t = 0; t < num_traces; ++t) {
            const int64_t block = vm.env[t].count * ts.traces[t].length();
            if (block == 0) continue;
            vm.y_base[node][t] = f.num_vars + 1;
            f.num_vars += static_cast<int>(block);
        }
    }

    vm.census.connector = int64_t(n) * static_cast<int64_t>(vm.ops.size());
    vm.census.predicate = int64_t(m) * num_eligible;
    vm.census.slot = int64_t(m) * 2 * q;
    vm.census.slot_unused = int64_t(m) * 2;
    vm.census.trace_sat = num_traces;
    vm.census.truth = total_truth;
    const int vars_before_aux = f.num_vars;

    auto y = [&](int node, int t, int k, int64_t e) {
        return vm.y_base[node][t] + static_cast<int>(k * vm.env[t].count + e);
    };

    // --- (a) exactly-one over every decision group ---
    for (int i = 0; i < n; ++i) append_exactly_one(f, vm.connector_var[i]);
    for (int l = 0; l < m; ++l) append_exactly_one(f, vm.predicate_var[l]);
    for (int l = 0; l < m; ++l) {
        for (int v = 0; v < 2; ++v) {
            std::vector<int> group;
            for (int j = 0; j < allowed_j_end; ++j) group.push_back(vm.slot_var[l][v][j]);
            group.push_back(vm.slot_unused_var[l][v]);
            append_exactly_one(f, group);
            for (int j = allowed_j_end; j < q; ++j)
                f.add_hard({-vm.slot_var[l][v][j]});
        }
    }

    // --- (f) type consistency and unused-slot coupling ---
    for (int l = 0; l < m; ++l) {
        for (int pi = 0; pi < num_eligible; ++pi) {
            const Predicate& pred = d.predicates[vm.eligible_preds[pi]];
            const int pvar = vm.predicate_var[l][pi];
            for (int v = 0; v < 2; ++v) {
                if (v < pred.arity()) {
                    f.add_hard({-pvar, -vm.slot_unused_var[l][v]});
                    if (!family_dropped(opts, ConstraintFamily::TypeConsistency)) {
                        for (int j = 0; j < allowed_j_end; ++j)
                            if (!slot_compat(j, pred, v))
                                f.add_hard({-pvar, -vm.slot_var[l][v][j]});
                    }
                } else {
                    f.add_hard({-pvar, vm.slot_unused_var[l][v]});
                }
            }
        }
    }

    // --- (b) trace satisfaction over the quantified environments (Eq. 3) ---
    if (!family_dropped(opts, ConstraintFamily::EnvSelection)) {
        for (int t = 0; t < num_traces; ++t) {
            const int s = vm.trace_sat_var[t];
            const TraceEnvTable& table = vm.env[t];
            bool universal_empty = false, existential_empty = false;
            for (int j = 0; j < q; ++j) {
                if (!table.domains[j].empty()) continue;
                (j < b ? universal_empty : existential_empty) = true;
            }
            if (universal_empty) {
                f.add_hard({s});
                continue;
            }
            if (existential_empty) {
                f.add_hard({-s});
                continue;
            }
            int64_t ex_count = 1;
            for (int j = b; j < q; ++j)
                ex_count *= static_cast<int64_t>(table.domains[j].size());
            const int64_t uni_count = table.count / ex_count;

            auto or_over_block = [&](int head, int64_t base) {
                // head <-> OR of y(root, t, 0, base..base+ex_count)
                std::vector<int> fwd{-head};
                for (int64_t e = 0; e < ex_count; ++e) {
                    int yv = y(chain.root(), t, 0, base + e);
                    fwd.push_back(yv);
                    f.add_hard({head, -yv});
                }
                f.add_hard(std::move(fwd));
            };

            if (b == q) {
                std::vector<int> rev{s};
                for (int64_t e = 0; e < table.count; ++e) {
                    int yv = y(chain.root(), t, 0, e);
                    f.add_hard({-s, yv});
                    rev.push_back(-yv);
                }
                f.add_hard(std::move(rev));
            } else if (b == 0) {
                or_over_block(s, 0);
            } else {
                std::vector<int> rev{s};
                for (int64_t u = 0; u < uni_count; ++u) {
                    int a = f.new_var();
                    or_over_block(a, u * ex_count);
                    f.add_hard({-s, a});
                    rev.push_back(-a);
                }
                f.add_hard(std::move(rev));
            }
        }
    }

    // --- (c) ground-atom truth at predicate nodes (Eq. 4) ---
    if (!family_dropped(opts, ConstraintFamily::AtomTruth)) {
        std::vector<ObjId> env_objs(q);
        for (int t = 0; t < num_traces; ++t) {
            const TraceEnvTable& table = vm.env[t];
            const InstantiatedTrace& trace = ts.traces[t];
            for (int64_t e = 0; e < table.count; ++e) {
                for (int j = 0; j < q; ++j)
                    env_objs[j] =
                        table.domains[j][(e / table.strides[j]) %
                                         static_cast<int64_t>(table.domains[j].size())];
                for (int k = 0; k < trace.length(); ++k) {
                    const State& state = trace.states[k];
                    for (int pi = 0; pi < num_eligible; ++pi) {
                        const PredId p = vm.eligible_preds[pi];
                        const int arity = d.predicates[p].arity();
                        GroundFluent fl;
                        fl.pred = p;
                        fl.args.resize(arity);
                        auto emit = [&](int j1, int j2) {
                            if (arity >= 1) fl.args[0] = env_objs[j1];
                            if (arity >= 2) fl.args[1] = env_objs[j2];
                            const bool truth = state.contains(fl);
                            for (int l = 0; l < m; ++l) {
                                const int yv = y(n + l, t, k, e);
                                std::vector<int> clause{-vm.predicate_var[l][pi]};
                                if (arity >= 1) clause.push_back(-vm.slot_var[l][0][j1]);
                                if (arity >= 2) clause.push_back(-vm.slot_var[l][1][j2]);
                                clause.push_back(truth ? yv : -yv);
                                f.add_hard(std::move(clause));
                            }
                        };
                        if (arity == 0) {
                            emit(-1, -1);
                        } else if (arity == 1) {
                            for (int j1 : compat_js[pi][0]) emit(j1, -1);
                        } else {
                            for (int j1 : compat_js[pi][0])
                                for (int j2 : compat_js[pi][1]) emit(j1, j2);
                        }
                    }
                }
            }
        }
    }

    // --- (d)/(e) connector semantics (Eqs. 5-8 and their mirrored forms) ---
    if (!family_dropped(opts, ConstraintFamily::ConnectorSemantics)) {
        for (int i = 0; i < n; ++i) {
            const int lc = chain.left[i];
            const int rc = chain.right[i];
            for (size_t o = 0; o < vm.ops.size(); ++o) {
                const TLOp op = vm.ops[o];
                const int g = -vm.connector_var[i][o];
                for (int t = 0; t < num_traces; ++t) {
                    const TraceEnvTable& table = vm.env[t];
                    const int len = ts.traces[t].length();
                    const int last = len - 1;
                    for (int64_t e = 0; e < table.count; ++e) {
                        auto yi = [&](int k) { return y(i, t, k, e); };
                        auto yl = [&](int k) { return y(lc, t, k, e); };
                        auto yr = [&](int k) { return y(rc, t, k, e); };
                        switch (op) {
                        case TLOp::Not:
                            for (int k = 0; k < len; ++k) {
                                f.add_hard({g, -yi(k), -yl(k)});
                                f.add_hard({g, yi(k), yl(k)});
                            }
                            break;
                        case TLOp::And:
                            for (int k = 0; k < len; ++k) {
                                f.add_hard({g, -yi(k), yl(k)});
                                f.add_hard({g, -yi(k), yr(k)});
                                f.add_hard({g, yi(k), -yl(k), -yr(k)});
                            }
                            break;
                        case TLOp::Or:
                            for (int k = 0; k < len; ++k) {
                                f.add_hard({g, yi(k), -yl(k)});
                                f.add_hard({g, yi(k), -yr(k)});
                                f.add_hard({g, -yi(k), yl(k), yr(k)});
                            }
                            break;
                        case TLOp::Implies:
                            for (int k = 0; k < len; ++k) {
                                f.add_hard({g, yi(k), yl(k)});
                                f.add_hard({g, yi(k), -yr(k)});
                                f.add_hard({g, -yi(k), -yl(k), yr(k)});
                            }
                            break;
                        case TLOp::Next:
                            // Position len is replaced by false.
                            for (int k = 0; k < last; ++k) {
                                f.add_hard({g, -yi(k), yl(k + 1)});
                                f.add_hard({g, yi(k), -yl(k + 1)});
                            }
                            f.add_hard({g, -yi(last)});
                            break;
                        case TLOp::Prev:
                            for (int k = 1; k < len; ++k) {
                                f.add_hard({g, -yi(k), yl(k - 1)});
                                f.add_hard({g, yi(k), -yl(k - 1)});
                            }
                            f.add_hard({g, -yi(0)});
                            break;
                        case TLOp::Finally:
                            for (int k = 0; k < len; ++k) {
                                std::vector<int> fwd{g, -yi(k)};
                                for (int k2 = k; k2 < len; ++k2) {
                                    fwd.push_back(yl(k2));
                                    f.add_hard({g, yi(k), -yl(k2)});
                                }
                                f.add_hard(std::move(fwd));
                            }
                            break;
                        case TLOp::Globally:
                            for (int k = 0; k < len; ++k) {
                                std::vector<int> rev{g, yi(k)};
                                for (int k2 = k; k2 < len; ++k2) {
                                    rev.push_back(-yl(k2));
                                    f.add_hard({g, -yi(k), yl(k2)});
                                }
                                f.add_hard(std::move(rev));
                            }
                            break;
                        case TLOp::Once:
                            for (int k = 0; k < len; ++k) {
                                std::vector<int> fwd{g, -yi(k)};
                                for (int k2 = 0; k2 <= k; ++k2) {
                                    fwd.push_back(yl(k2));
                                    f.add_hard({g, yi(k), -yl(k2)});
                                }
                                f.add_hard(std::move(fwd));
                            }
                            break;
                        case TLOp::Hist:
                            for (int k = 0; k < len; ++k) {
                                std::vector<int> rev{g, yi(k)};
                                for (int k2 = 0; k2 <= k; ++k2) {
                                    rev.push_back(-yl(k2));
                                    f.add_hard({g, -yi(k), yl(k2)});
                                }
                                f.add_hard(std::move(rev));
                            }
                            break;
                        case TLOp::Until:
                            // Direct expansion: y_i(k) <-> OR_{k'} (y_r(k') and
                            // AND_{k<=j<k'} y_l(j)), inner conjunctions named.
                            for (int k = 0; k < len; ++k) {
                                std::vector<int> fwd{g, -yi(k), yr(k)};
                                f.add_hard({g, yi(k), -yr(k)});
                                for (int k2 = k + 1; k2 < len; ++k2) {
                                    int u = f.new_var();
                                    f.add_hard({g, -u, yr(k2)});
                                    std::vector<int> rev{g, u, -yr(k2)};
                                    for (int j = k; j < k2; ++j) {
                                        f.add_hard({g, -u, yl(j)});
                                        rev.push_back(-yl(j));
                                    }
                                    f.add_hard(std::move(rev));
                                    f.add_hard({g, yi(k), -u});
                                    fwd.push_back(u);
                                }
                                f.add_hard(std::move(fwd));
                            }
                            break;
                        default:
                            throw ValidationError("atom symbols cannot label connectors");
                        }
                    }
                }
            }
        }
    }

    // --- (i) redundancy bans ---
    if (!family_dropped(opts, ConstraintFamily::RedundancyBans)) {
        for (int i = 0; i < n; ++i) {
            const int lc = chain.left[i];
            if (chain.is_connector(lc)) {
                for (TLOp op : {TLOp::Not, TLOp::Finally, TLOp::Globally}) {
                    auto it = std::find(vm.ops.begin(), vm.ops.end(), op);
                    if (it == vm.ops.end()) continue;
                    const size_t o = static_cast<size_t>(it - vm.ops.begin());
                    f.add_hard({-vm.connector_var[i][o], -vm.connector_var[lc][o]});
                }
            }
            const int rc = chain.right[i];
            if (!chain.is_connector(lc) && !chain.is_connector(rc)) {
                const int l1 = lc - n, l2 = rc - n;
                for (size_t o = 0; o < vm.ops.size(); ++o) {
                    if (!op_is_binary(vm.ops[o])) continue;
                    for (int pi = 0; pi < num_eligible; ++pi) {
                        const int arity = d.predicates[vm.eligible_preds[pi]].arity();
                        std::vector<int> base{-vm.connector_var[i][o],
                                              -vm.predicate_var[l1][pi],
                                              -vm.predicate_var[l2][pi]};
                        auto ban = [&](int j1, int j2) {
                            std::vector<int> clause = base;
                            if (arity >= 1) {
                                clause.push_back(-vm.slot_var[l1][0][j1]);
                                clause.push_back(-vm.slot_var[l2][0][j1]);
                            }
                            if (arity >= 2) {
                                clause.push_back(-vm.slot_var[l1][1][j2]);
                                clause.push_back(-vm.slot_var[l2][1][j2]);
                            }
                            f.add_hard(std::move(clause));
                        };
                        if (arity == 0) {
                            ban(-1, -1);
                        } else if (arity == 1) {
                            for (int j1 : compat_js[pi][0]) ban(j1, -1);
                        } else {
                            for (int j1 : compat_js[pi][0])
                                for (int j2 : compat_js[pi][1]) ban(j1, j2);
                        }
                    }
                }
            }
        }
    }

    // --- (j) variable visibility ---
    if (!family_dropped(opts, ConstraintFamily::VariableVisibility)) {
        for (int j = 0; j < q; ++j) {
            std::vector<int> clause;
            for (int l = 0; l < m; ++l)
                for (int v = 0; v < 2; ++v)
                    if (j < allowed_j_end) clause.push_back(vm.slot_var[l][v][j]);
            if (clause.empty()) {
                enc.infeasible = true;
                enc.infeasible_reason =
                    "variable " + std::to_string(j + 1) + " cannot occur in any atom";
                return enc;
            }
            f.add_hard(std::move(clause));
        }
    }

    // --- (h) discriminativeness ---
    if (!family_dropped(opts, ConstraintFamily::Discriminativeness)) {
        std::vector<int> some_positive, some_negative;
        for (size_t t : positives) some_positive.push_back(vm.trace_sat_var[t]);
        for (size_t t : negatives) some_negative.push_back(-vm.trace_sat_var[t]);
        f.add_hard(std::move(some_positive));
        f.add_hard(std::move(some_negative));
    }

    // --- (g) soft clauses from the score function ---
    vm.scale = 1;
    for (int i = 0; i < opts.weight_decimals; ++i) vm.scale *= 10;
    vm.trace_weight.assign(num_traces, 0);
    for (int t = 0; t < num_traces; ++t) {
        const int64_t w = scaled_weight(ts.traces[t].score, vm.scale);
        vm.trace_weight[t] = w;
        if (w > 0) {
            vm.positive_weight_sum += w;
            f.add_soft({vm.trace_sat_var[t]}, w);
        } else if (w < 0) {
            f.add_soft({-vm.trace_sat_var[t]}, -w);
        }
    }

    vm.census.aux = f.num_vars - vars_before_aux;
    return enc;
}

Formula decode(const std::vector<bool>& model, const VarMap& vm,
               const ShapeConfig& cfg, const Domain& d) {
    auto selected = [&](const std::vector<int>& group) {
        int found = -1;
        for (size_t i = 0; i < group.size(); ++i) {
            if (group[i] > 0 && group[i] < static_cast<int>(model.size()) &&
                model[group[i]]) {
                if (found >= 0)
                    throw std::logic_error("exactly-one violated in solver model");
                found = static_cast<int>(i);
            }
        }
        if (found < 0) throw std::logic_error("no decision selected in solver model");
        return found;
    };

    const TLChain& chain = cfg.chain;
    const int n = chain.num_connectors;

    auto build = [&](auto&& self, int node) -> TLNode {
        if (!chain.is_connector(node)) {
            const int l = node - n;
            const PredId p = vm.eligible_preds[selected(vm.predicate_var[l])];
            const int arity = d.predicates[p].arity();
            std::vector<int> vars;
            for (int v = 0; v < 2; ++v) {
                std::vector<int> group = vm.slot_var[l][v];
                group.push_back(vm.slot_unused_var[l][v]);
                const int pick = selected(group);
                const bool unused = pick == static_cast<int>(vm.slot_var[l][v].size());
                if (unused != (v >= arity))
                    throw std::logic_error("slot selection contradicts predicate arity");
                if (!unused) vars.push_back(pick);
            }
            return TLNode::atom(p, std::move(vars));
        }
        const TLOp op = vm.ops[selected(vm.connector_var[node])];
        TLNode left = self(self, chain.left[node]);
        if (op_is_unary(op)) return TLNode::unary(op, std::move(left));
        return TLNode::binary(op, std::move(left), self(self, chain.right[node]));
    };

    Formula out;
    for (int j = 0; j < cfg.num_quantifiers(); ++j)
        out.quantifiers.push_back(
            {cfg.prefix[j], "x" + std::to_string(j + 1), cfg.types[j]});
    out.core = build(build, chain.root());
    return out;
}

}  // namespace ftlearn
