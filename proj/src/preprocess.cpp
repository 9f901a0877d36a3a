#include "ftlearn/preprocess.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ftlearn {

namespace {

std::string fresh_name(std::string base, std::set<std::string>& taken) {
    while (taken.count(base)) base += "_";
    taken.insert(base);
    return base;
}

//! Projection of one original predicate onto a new one: which argument
//! positions of the original feed the new predicate.
struct Projection {
    PredId target;
    std::vector<int> arg_positions;
};

State project_state(const State& s, const std::vector<std::vector<Projection>>& plan) {
    std::vector<GroundFluent> out;
    out.reserve(s.size());
    for (const auto& f : s.fluents()) {
        for (const auto& proj : plan[f.pred]) {
            GroundFluent g;
            g.pred = proj.target;
            g.args.reserve(proj.arg_positions.size());
            for (int pos : proj.arg_positions) g.args.push_back(f.args[pos]);
            out.push_back(std::move(g));
        }
    }
    return State(std::move(out));
}

//! Rebuilds traces over transformed instances, preserving instance sharing.
template <typename InstanceFn, typename StateFn>
ScoredSet rebuild_traces(const ScoredSet& ts, InstanceFn&& transform_instance,
                         StateFn&& transform_state) {
    std::map<const Instance*, std::shared_ptr<const Instance>> cache;
    ScoredSet out;
    out.traces.reserve(ts.traces.size());
    for (const auto& t : ts.traces) {
        auto it = cache.find(t.instance.get());
        if (it == cache.end())
            it = cache.emplace(t.instance.get(), transform_instance(*t.instance)).first;
        InstantiatedTrace nt;
        nt.instance = it->second;
        nt.score = t.score;
        nt.id = t.id;
        nt.states.reserve(t.states.size());
        for (const auto& s : t.states) nt.states.push_back(transform_state(s, *it->second));
        out.traces.push_back(std::move(nt));
    }
    return out;
}

}  // namespace

std::pair<Domain, ScoredSet> split_predicates(const Domain& d, const ScoredSet& ts,
                                              int max_arity) {
    if (max_arity != 1 && max_arity != 2)
        throw ValidationError("split arity must be 1 or 2");

    Domain nd;
    nd.name = d.name;
    nd.types = d.types;
    nd.schemas = d.schemas;

    std::set<std::string> taken;
    std::vector<std::vector<Projection>> plan(d.predicates.size());
    // Reserve kept names first so split names cannot collide with them.
    for (const auto& p : d.predicates)
        if (p.arity() <= max_arity) taken.insert(p.name);
    for (size_t pi = 0; pi < d.predicates.size(); ++pi) {
        const Predicate& p = d.predicates[pi];
        if (p.arity() <= max_arity) {
            PredId id = static_cast<PredId>(nd.predicates.size());
            nd.predicates.push_back(p);
            plan[pi].push_back({id, [&] {
                                    std::vector<int> all(p.arity());
                                    for (int i = 0; i < p.arity(); ++i) all[i] = i;
                                    return all;
                                }()});
            continue;
        }
        auto add_projection = [&](const std::string& suffix, std::vector<int> positions) {
            Predicate np;
            np.name = fresh_name(p.name + "_" + suffix, taken);
            for (int pos : positions) np.arg_types.push_back(p.arg_types[pos]);
            PredId id = static_cast<PredId>(nd.predicates.size());
            nd.predicates.push_back(std::move(np));
            plan[pi].push_back({id, std::move(positions)});
        };
        if (max_arity == 2) {
            for (int i = 0; i < p.arity(); ++i)
                for (int j = i + 1; j < p.arity(); ++j)
                    add_projection(std::to_string(i + 1) + std::to_string(j + 1), {i, j});
        } else {
            for (int i = 0; i < p.arity(); ++i)
                add_projection(std::to_string(i + 1), {i});
        }
    }

    auto transform_instance = [&](const Instance& inst) {
        auto ni = std::make_shared<Instance>(inst);
        ni->init = project_state(inst.init, plan);
        ni->goal = project_state(inst.goal, plan);
        return ni;
    };
    auto transform_state = [&](const State& s, const Instance&) {
        return project_state(s, plan);
    };
    ScoredSet nts = rebuild_traces(ts, transform_instance, transform_state);
    return {std::move(nd), std::move(nts)};
}

std::pair<Domain, ScoredSet> add_goal_predicates(const Domain& d, const ScoredSet& ts) {
    Domain nd = d;
    std::set<std::string> taken;
    for (const auto& p : d.predicates) taken.insert(p.name);
    std::vector<PredId> goal_pred(d.predicates.size());
    for (size_t pi = 0; pi < d.predicates.size(); ++pi) {
        Predicate gp = d.predicates[pi];
        gp.name = fresh_name(gp.name + "_goal", taken);
        goal_pred[pi] = static_cast<PredId>(nd.predicates.size());
        nd.predicates.push_back(std::move(gp));
    }

    // Latent state per instance: one goal fluent per goal atom.
    auto latent_of = [&](const Instance& inst) {
        std::vector<GroundFluent> latent;
        latent.reserve(inst.goal.size());
        for (const auto& f : inst.goal.fluents())
            latent.push_back({goal_pred[f.pred], f.args});
        return latent;
    };

    auto transform_instance = [&](const Instance& inst) {
        return std::make_shared<Instance>(inst);
    };
    auto transform_state = [&](const State& s, const Instance& inst) {
        std::vector<GroundFluent> out = s.fluents();
        auto latent = latent_of(inst);
        out.insert(out.end(), latent.begin(), latent.end());
        return State(std::move(out));
    };
    ScoredSet nts = rebuild_traces(ts, transform_instance, transform_state);
    return {std::move(nd), std::move(nts)};
}

}  // namespace ftlearn
