#include "ftlearn/trace.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

namespace ftlearn {

namespace {

GroundFluent parse_fluent_string(const std::string& text, const Domain& d,
                                 const Instance& inst) {
    std::istringstream is(text);
    std::string pred_name;
    if (!(is >> pred_name)) throw ValidationError("empty fluent string");
    GroundFluent f;
    f.pred = d.require_predicate(pred_name);
    std::string obj;
    while (is >> obj) f.args.push_back(inst.require_object(obj));
    const Predicate& p = d.predicates[f.pred];
    if (static_cast<int>(f.args.size()) != p.arity())
        throw ValidationError("arity mismatch in fluent '" + text + "'");
    for (int i = 0; i < p.arity(); ++i) {
        if (!d.types.subtype_of(inst.object_types[f.args[i]], p.arg_types[i]))
            throw ValidationError("type mismatch in fluent '" + text + "'");
    }
    return f;
}

}  // namespace

std::vector<size_t> ScoredSet::positives() const {
    std::vector<size_t> out;
    for (size_t i = 0; i < traces.size(); ++i)
        if (traces[i].positive()) out.push_back(i);
    return out;
}

std::vector<size_t> ScoredSet::negatives() const {
    std::vector<size_t> out;
    for (size_t i = 0; i < traces.size(); ++i)
        if (!traces[i].positive()) out.push_back(i);
    return out;
}

double ScoredSet::sum_positive_scores() const {
    double sum = 0.0;
    for (const auto& t : traces)
        if (t.positive()) sum += t.score;
    return sum;
}

InstantiatedTrace load_trace(const std::string& json_text, const Domain& d,
                             std::shared_ptr<const Instance> inst) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed trace document: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("states"))
        throw ValidationError("trace document must be an object with a 'states' field");
    if (doc.contains("instance") && doc["instance"].get<std::string>() != inst->name)
        throw ValidationError("trace references instance '" +
                              doc["instance"].get<std::string>() + "', expected '" +
                              inst->name + "'");
    InstantiatedTrace t;
    t.instance = std::move(inst);
    t.score = doc.value("score", 1.0);
    if (!std::isfinite(t.score)) throw ValidationError("trace score must be finite");
    for (const auto& state_doc : doc["states"]) {
        std::vector<GroundFluent> fluents;
        for (const auto& fluent_doc : state_doc)
            fluents.push_back(
                parse_fluent_string(fluent_doc.get<std::string>(), d, *t.instance));
        t.states.emplace_back(std::move(fluents));
    }
    if (t.states.empty()) throw ValidationError("trace has no states");
    return t;
}

std::string serialize_trace(const InstantiatedTrace& t, const Domain& d) {
    nlohmann::json doc;
    doc["instance"] = t.instance->name;
    doc["score"] = t.score;
    auto states = nlohmann::json::array();
    for (const auto& s : t.states) {
        auto state_doc = nlohmann::json::array();
        for (const auto& f : s.fluents())
            state_doc.push_back(fluent_to_string(f, d, *t.instance));
        states.push_back(std::move(state_doc));
    }
    doc["states"] = std::move(states);
    return doc.dump(2) + "\n";
}

std::vector<PlanStep> parse_plan(std::string_view text) {
    std::vector<PlanStep> plan;
    std::istringstream is{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (auto pos = line.find(';'); pos != std::string::npos) line.resize(pos);
        std::istringstream ls(line);
        std::string tok;
        std::vector<std::string> words;
        while (ls >> tok) words.push_back(tok);
        if (words.empty()) continue;
        std::string joined;
        for (const auto& w : words) joined += w + " ";
        if (joined.front() != '(')
            throw ParseError("plan step must be parenthesized", line_no, 1);
        std::string body;
        for (char c : joined)
            if (c != '(' && c != ')') body += std::tolower(static_cast<unsigned char>(c));
        std::istringstream bs(body);
        PlanStep step;
        if (!(bs >> step.action)) throw ParseError("empty plan step", line_no, 1);
        while (bs >> tok) step.args.push_back(tok);
        plan.push_back(std::move(step));
    }
    return plan;
}

InstantiatedTrace plan_to_trace(std::shared_ptr<const Instance> inst,
                                const std::vector<PlanStep>& plan, const Domain& d) {
    InstantiatedTrace t;
    t.instance = std::move(inst);
    t.states.push_back(t.instance->init);
    for (size_t k = 0; k < plan.size(); ++k) {
        const PlanStep& step = plan[k];
        auto schema_id = d.find_schema(step.action);
        if (!schema_id)
            throw ValidationError("step " + std::to_string(k + 1) +
                                  ": unknown action '" + step.action + "'");
        std::vector<ObjId> binding;
        binding.reserve(step.args.size());
        for (const auto& name : step.args)
            binding.push_back(t.instance->require_object(name));
        Operator op =
            ground_schema(d, *t.instance, d.schemas[*schema_id], binding);
        if (!applicable(t.states.back(), op))
            throw ValidationError("step " + std::to_string(k + 1) + ": operator '" +
                                  step.action + "' is not applicable");
        t.states.push_back(apply(t.states.back(), op));
    }
    return t;
}

ScoredSet assign_scores(std::vector<InstantiatedTrace> traces,
                        const std::map<std::string, double>& labeling) {
    for (const auto& [id, score] : labeling) {
        auto it = std::find_if(traces.begin(), traces.end(),
                               [&](const InstantiatedTrace& t) { return t.id == id; });
        if (it == traces.end())
            throw ValidationError("score assigned to unknown trace '" + id + "'");
        if (!std::isfinite(score))
            throw ValidationError("score for trace '" + id + "' must be finite");
        it->score = score;
    }
    return ScoredSet{std::move(traces)};
}

}  // namespace ftlearn
