#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ftlearn/bench.hpp"
#include "ftlearn/maxsat.hpp"
#include "ftlearn/learner.hpp"
#include "ftlearn/preprocess.hpp"

namespace fs = std::filesystem;
using namespace ftlearn;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitResource = 4;

struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read file: " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path.string());
    out << content;
}

std::vector<fs::path> sorted_files(const fs::path& dir, const std::string& ext) {
    if (!fs::is_directory(dir))
        throw ValidationError("not a directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (name.size() >= ext.size() &&
            name.compare(name.size() - ext.size(), ext.size(), ext) == 0)
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

using InstanceMap = std::map<std::string, std::shared_ptr<const Instance>>;

InstanceMap load_instances(const fs::path& dir, const Domain& d) {
    InstanceMap out;
    for (const fs::path& path : sorted_files(dir, ".pddl")) {
        const std::string text = read_file(path);
        if (text.find("(problem") == std::string::npos) continue;  // domain file
        auto inst = std::make_shared<const Instance>(parse_instance(text, d));
        out[inst->name] = std::move(inst);
    }
    return out;
}

std::vector<InstantiatedTrace> load_traces(const fs::path& dir, const Domain& d,
                                           const InstanceMap& instances,
                                           double default_score) {
    std::vector<InstantiatedTrace> out;
    for (const fs::path& path : sorted_files(dir, ".json")) {
        const std::string text = read_file(path);
        nlohmann::json doc = nlohmann::json::parse(text);
        const std::string iname = doc.value("instance", "");
        auto it = instances.find(iname);
        if (it == instances.end())
            throw ValidationError("trace " + path.filename().string() +
                                  " references unknown instance '" + iname + "'");
        InstantiatedTrace t = load_trace(text, d, it->second);
        // Directory convention wins; a scores file can override per trace.
        t.score = default_score;
        t.id = dir.filename().string() + "/" + path.filename().string();
        out.push_back(std::move(t));
    }
    return out;
}

struct PreprocessFlags {
    std::string split_arity = "2";
    std::string goal_predicates = "on";
};

std::pair<Domain, ScoredSet> run_pipeline(const Domain& d, ScoredSet ts,
                                          const PreprocessFlags& flags) {
    Domain current = d;
    if (flags.split_arity != "none") {
        auto [nd, nts] = split_predicates(current, ts, std::stoi(flags.split_arity));
        current = std::move(nd);
        ts = std::move(nts);
    }
    if (flags.goal_predicates == "on") {
        auto [nd, nts] = add_goal_predicates(current, ts);
        current = std::move(nd);
        ts = std::move(nts);
    }
    return {std::move(current), std::move(ts)};
}

void add_preprocess_flags(CLI::App* cmd, PreprocessFlags& flags,
                          const std::string& split_default,
                          const std::string& goal_default) {
    flags.split_arity = split_default;
    flags.goal_predicates = goal_default;
    cmd->add_option("--split-arity", flags.split_arity, "Predicate splitting: 1, 2 or none")
        ->check(CLI::IsMember({"1", "2", "none"}))
        ->capture_default_str();
    cmd->add_option("--goal-predicates", flags.goal_predicates,
                    "Add goal predicates: on or off")
        ->check(CLI::IsMember({"on", "off"}))
        ->capture_default_str();
}

std::vector<TLOp> parse_ops_list(const std::string& list) {
    std::map<std::string, TLOp> names = {
        {"&", TLOp::And},     {"|", TLOp::Or},      {"->", TLOp::Implies},
        {"U", TLOp::Until},   {"!", TLOp::Not},     {"X", TLOp::Next},
        {"F", TLOp::Finally}, {"G", TLOp::Globally},{"Y", TLOp::Prev},
        {"O", TLOp::Once},    {"H", TLOp::Hist}};
    std::vector<TLOp> ops;
    std::istringstream is(list);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        if (tok.empty()) continue;
        auto it = names.find(tok);
        if (it == names.end()) throw UsageError("unknown operator '" + tok + "'");
        ops.push_back(it->second);
    }
    if (ops.empty()) throw UsageError("empty operator list");
    return ops;
}

TLChain parse_chain_id(const std::string& id) {
    // Bracket form produced by TLChain::id(): '.' leaf, '( l r )' connector.
    struct Node {
        std::unique_ptr<Node> left, right;
    };
    size_t pos = 0;
    auto parse = [&](auto&& self) -> std::unique_ptr<Node> {
        if (pos >= id.size()) throw UsageError("truncated chain id");
        if (id[pos] == '.') {
            ++pos;
            return std::make_unique<Node>();
        }
        if (id[pos] != '(') throw UsageError("malformed chain id");
        ++pos;
        auto n = std::make_unique<Node>();
        n->left = self(self);
        n->right = self(self);
        if (pos >= id.size() || id[pos] != ')') throw UsageError("malformed chain id");
        ++pos;
        return n;
    };
    auto root = parse(parse);
    if (pos != id.size()) throw UsageError("trailing characters in chain id");

    int connectors = 0;
    auto count = [&](const Node& n, auto&& self) -> void {
        if (!n.left) return;
        ++connectors;
        self(*n.left, self);
        self(*n.right, self);
    };
    count(*root, count);

    TLChain chain;
    chain.num_connectors = connectors;
    chain.left.assign(connectors, -1);
    chain.right.assign(connectors, -1);
    int next_connector = 0, next_leaf = connectors;
    auto assign = [&](const Node& n, auto&& self) -> int {
        if (!n.left) return next_leaf++;
        const int me = next_connector++;
        chain.left[me] = self(*n.left, self);
        chain.right[me] = self(*n.right, self);
        return me;
    };
    assign(*root, assign);
    return chain;
}

struct TaskInputs {
    Domain domain;
    ScoredSet traces;
};

TaskInputs load_task(const std::string& domain_file, const std::string& instances_dir,
                     const std::string& positive_dir, const std::string& negative_dir,
                     const std::string& scores_file, const PreprocessFlags& flags) {
    Domain d = parse_domain(read_file(domain_file));
    fs::path inst_dir = instances_dir.empty() ? fs::path(domain_file).parent_path()
                                              : fs::path(instances_dir);
    if (inst_dir.empty()) inst_dir = ".";
    InstanceMap instances = load_instances(inst_dir, d);
    std::vector<InstantiatedTrace> traces;
    if (!positive_dir.empty())
        for (auto& t : load_traces(positive_dir, d, instances, 1.0))
            traces.push_back(std::move(t));
    if (!negative_dir.empty())
        for (auto& t : load_traces(negative_dir, d, instances, -1.0))
            traces.push_back(std::move(t));
    // Score overrides match the full id (dir/file) or the bare filename.
    std::map<std::string, double> labeling;
    if (!scores_file.empty()) {
        nlohmann::json doc = nlohmann::json::parse(read_file(scores_file));
        for (const auto& [key, value] : doc.items()) {
            bool matched = false;
            for (const auto& t : traces) {
                if (t.id == key ||
                    fs::path(t.id).filename().string() == key) {
                    labeling[t.id] = value.get<double>();
                    matched = true;
                }
            }
            if (!matched)
                throw ValidationError("score assigned to unknown trace '" + key + "'");
        }
    }
    ScoredSet ts = assign_scores(std::move(traces), labeling);
    auto [domain, scored] = run_pipeline(d, std::move(ts), flags);
    return {std::move(domain), std::move(scored)};
}

int cmd_learn(const std::string& domain_file, const std::string& instances_dir,
              const std::string& positive_dir, const std::string& negative_dir,
              const std::string& scores_file, const PreprocessFlags& flags,
              const LearnOptions& base_opts, const std::string& ops_list,
              const std::string& out_file) {
    TaskInputs task = load_task(domain_file, instances_dir, positive_dir, negative_dir,
                                scores_file, flags);
    if (task.traces.positives().empty())
        throw UsageError("no positive traces given");
    if (task.traces.negatives().empty())
        throw UsageError("no negative traces given");

    LearnOptions opts = base_opts;
    if (!ops_list.empty()) opts.encoder.ops = parse_ops_list(ops_list);
    LearnResult result = learn(task.domain, task.traces, opts);
    write_file(out_file, formulas_to_json(result, task.domain));
    std::cout << "formulas: " << result.formulas.size()
              << " (configs: " << result.configs_attempted
              << ", failed: " << result.configs_failed << ")\n";
    if (result.timed_out) {
        std::cerr << "global timeout hit; partial results written to " << out_file
                  << "\n";
        return kExitResource;
    }
    return 0;
}

int cmd_check(const std::string& domain_file, const std::string& instance_file,
              const std::string& trace_file, const std::string& formula_text,
              const PreprocessFlags& flags, bool strict_types) {
    Domain d = parse_domain(read_file(domain_file));
    auto inst = std::make_shared<const Instance>(
        parse_instance(read_file(instance_file), d));
    InstantiatedTrace t = load_trace(read_file(trace_file), d, inst);
    t.id = fs::path(trace_file).filename().string();
    ScoredSet ts;
    ts.traces.push_back(std::move(t));
    auto [domain, scored] = run_pipeline(d, std::move(ts), flags);
    Formula f = parse_formula(formula_text, domain);
    CheckOptions opts;
    opts.strict_types = strict_types;
    const bool sat = holds(scored.traces[0], f, domain, opts);
    std::cout << (sat ? "true" : "false") << "\n";
    return sat ? 0 : 1;
}

int cmd_eval(const std::string& domain_file, const std::string& instances_dir,
             const std::string& formulas_file, const std::string& positive_dir,
             const std::string& negative_dir, const PreprocessFlags& flags,
             bool strict_types, const std::string& out_file,
             const std::string& markdown_file) {
    TaskInputs task =
        load_task(domain_file, instances_dir, positive_dir, negative_dir, "", flags);
    if (task.traces.traces.empty()) throw UsageError("no test traces given");

    nlohmann::json doc = nlohmann::json::parse(read_file(formulas_file));
    std::vector<FoundFormula> formulas;
    for (const auto& entry : doc.at("formulas")) {
        FoundFormula ff;
        ff.formula = parse_formula(entry.at("formula").get<std::string>(), task.domain);
        ff.train_score = entry.value("train_score", 0.0);
        ff.ops_budget = entry.value("ops_budget", ff.formula.num_operators());
        ff.quantifiers = entry.value("quantifiers", ff.formula.num_quantifiers());
        formulas.push_back(std::move(ff));
    }
    CheckOptions opts;
    opts.strict_types = strict_types;
    EvalReport report = evaluate(formulas, task.traces, task.domain, opts);
    write_file(out_file, report.to_csv());
    if (!markdown_file.empty()) write_file(markdown_file, report.to_markdown());
    std::cout << "evaluated " << report.rows.size() << " formulas on "
              << task.traces.traces.size() << " traces\n";
    return 0;
}

int cmd_trace(const std::string& domain_file, const std::string& instance_file,
              const std::string& plan_file, double score_value,
              const std::string& out_file) {
    Domain d = parse_domain(read_file(domain_file));
    auto inst = std::make_shared<const Instance>(
        parse_instance(read_file(instance_file), d));
    std::vector<PlanStep> plan = parse_plan(read_file(plan_file));
    InstantiatedTrace t = plan_to_trace(inst, plan, d);
    t.score = score_value;
    write_file(out_file, serialize_trace(t, d));
    std::cout << "trace of length " << t.length() << " written to " << out_file << "\n";
    return 0;
}

int cmd_gen_setcover(int universe, const std::string& sets_spec, int k,
                     const std::string& out_dir) {
    std::vector<std::vector<int>> sets;
    std::istringstream is(sets_spec);
    std::string part;
    while (std::getline(is, part, ';')) {
        std::vector<int> set;
        std::istringstream ps(part);
        std::string elem;
        while (std::getline(ps, elem, ','))
            if (!elem.empty()) set.push_back(std::stoi(elem));
        sets.push_back(std::move(set));
    }
    SetCoverTask task = gen_setcover_instance(universe, sets, k);

    const fs::path dir(out_dir);
    write_file(dir / "domain.pddl", to_pddl(*task.domain));
    fs::create_directories(dir / "positive");
    fs::create_directories(dir / "negative");
    for (const auto& t : task.traces.traces) {
        write_file(dir / (t.instance->name + ".pddl"), to_pddl(*t.instance, *task.domain));
        const fs::path sub = t.positive() ? dir / "positive" : dir / "negative";
        write_file(sub / (t.id + ".trace.json"), serialize_trace(t, *task.domain));
    }
    nlohmann::json meta;
    meta["max_ops"] = task.max_ops;
    meta["max_quantifiers"] = task.max_quantifiers;
    meta["threshold"] = task.threshold;
    write_file(dir / "task.json", meta.dump(2) + "\n");
    std::cout << "set-cover task written to " << out_dir << " (r=" << task.max_ops
              << ", q=" << task.max_quantifiers << ", threshold=" << task.threshold
              << ")\n";
    return 0;
}

int cmd_solve_wcnf(const std::string& wcnf_file, double budget_s) {
    WCNF f = parse_dimacs(read_file(wcnf_file));
    SolveBudget budget;
    if (budget_s >= 0) budget.wall_seconds = budget_s;
    Outcome o = solve(f, budget);
    switch (o.status) {
    case SolveStatus::Optimum: std::cout << "s OPTIMUM FOUND\n"; break;
    case SolveStatus::SatisfiableBounded: std::cout << "s SATISFIABLE\n"; break;
    case SolveStatus::Unsatisfiable: std::cout << "s UNSATISFIABLE\n"; break;
    case SolveStatus::Timeout: std::cout << "s UNKNOWN\n"; break;
    }
    if (o.has_model()) {
        std::cout << "o " << o.cost << "\nv";
        for (int v = 1; v <= f.num_vars; ++v)
            std::cout << " " << (((*o.model)[v]) ? v : -v);
        std::cout << " 0\n";
    }
    return o.status == SolveStatus::Timeout ? kExitResource : 0;
}

int cmd_export_wcnf(const std::string& domain_file, const std::string& instances_dir,
                    const std::string& positive_dir, const std::string& negative_dir,
                    const std::string& scores_file, const PreprocessFlags& flags,
                    const std::string& chain_id, const std::string& prefix_str,
                    const std::string& types_list, const std::string& ops_list,
                    bool strict_types, bool strict_eq4, int weight_decimals,
                    const std::string& out_base) {
    TaskInputs task = load_task(domain_file, instances_dir, positive_dir, negative_dir,
                                scores_file, flags);
    ShapeConfig cfg;
    cfg.chain = parse_chain_id(chain_id);
    for (char c : prefix_str) {
        if (c == 'A' || c == 'a')
            cfg.prefix.push_back(Quant::Forall);
        else if (c == 'E' || c == 'e')
            cfg.prefix.push_back(Quant::Exists);
        else
            throw UsageError("prefix must be a string over {A, E}");
    }
    std::istringstream is(types_list);
    std::string tname;
    while (std::getline(is, tname, ','))
        if (!tname.empty()) cfg.types.push_back(task.domain.types.require(tname));
    if (cfg.types.size() != cfg.prefix.size())
        throw UsageError("need one type per quantifier");

    EncoderOptions opts;
    if (!ops_list.empty()) opts.ops = parse_ops_list(ops_list);
    opts.strict_types = strict_types;
    opts.strict_eq4 = strict_eq4;
    opts.weight_decimals = weight_decimals;
    Encoding enc = encode(cfg, task.domain, task.traces, opts);
    if (enc.infeasible) throw ValidationError("infeasible config: " + enc.infeasible_reason);
    write_file(out_base + ".wcnf", to_dimacs(enc.wcnf));
    write_file(out_base + ".varmap.json", enc.varmap.to_json(cfg, task.domain));
    std::cout << "wrote " << out_base << ".wcnf (" << enc.wcnf.num_vars << " vars, "
              << enc.wcnf.num_clauses() << " clauses)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Learns first-order temporal-logic classifiers for PDDL traces"};
    app.require_subcommand(1);
    // TOML-style config: `ftlearn --config run.cfg <subcommand>` with one
    // [subcommand] section per command; explicit flags win.
    app.set_config("--config");

    // learn
    auto* learn_cmd = app.add_subcommand("learn", "Learn formulas from scored traces");
    std::string domain_file, instances_dir, positive_dir, negative_dir, scores_file;
    std::string ops_list, out_file = "formulas.json";
    PreprocessFlags learn_flags;
    LearnOptions opts;
    double per_config_s = -1.0;
    learn_cmd->add_option("--domain", domain_file, "Domain PDDL file")->required();
    learn_cmd->add_option("--instances", instances_dir,
                          "Directory with instance PDDL files (default: domain dir)");
    learn_cmd->add_option("--positive", positive_dir, "Directory of positive traces")
        ->required();
    learn_cmd->add_option("--negative", negative_dir, "Directory of negative traces")
        ->required();
    learn_cmd->add_option("--scores", scores_file, "JSON map trace-file -> score");
    learn_cmd->add_option("--max-ops", opts.max_ops, "Operator budget r")->required();
    learn_cmd->add_option("--max-quantifiers", opts.max_quantifiers,
                          "Quantifier budget q")
        ->required();
    add_preprocess_flags(learn_cmd, learn_flags, "2", "on");
    learn_cmd->add_option("--ops", ops_list, "Connector alphabet, e.g. '&,|,->,U,X,F,G'");
    learn_cmd->add_option("--workers", opts.workers, "Worker threads")
        ->capture_default_str();
    learn_cmd->add_option("--external-solver", opts.external_cmd,
                          "Run configurations through an external WCNF solver "
                          "command; {file} expands to the instance path");
    learn_cmd->add_option("--timeout-per-config", per_config_s,
                          "Seconds per configuration");
    learn_cmd->add_option("--timeout", opts.global_timeout_s, "Global seconds budget");
    double min_score_value = 0.0;
    auto* min_score_opt =
        learn_cmd->add_option("--min-score", min_score_value, "Keep formulas scoring >= L");
    learn_cmd->add_flag("--first-perfect", opts.first_perfect,
                        "Stop at the first perfectly separating formula");
    learn_cmd->add_flag("--strict-types", opts.encoder.strict_types,
                        "Quantifiers range over exact types, not subtypes");
    learn_cmd->add_flag("--strict-eq4", opts.encoder.strict_eq4,
                        "Restrict atom slots to universal variables");
    learn_cmd->add_option("--weight-decimals", opts.encoder.weight_decimals,
                          "Scale scores by 10^d before rounding to integers");
    learn_cmd->add_option("--out", out_file, "Output formulas JSON")
        ->capture_default_str();

    // check
    auto* check_cmd = app.add_subcommand("check", "Evaluate a formula on one trace");
    std::string instance_file, trace_file, formula_text;
    PreprocessFlags check_flags;
    bool check_strict = false;
    check_cmd->add_option("--domain", domain_file, "Domain PDDL file")->required();
    check_cmd->add_option("--instance", instance_file, "Instance PDDL file")->required();
    check_cmd->add_option("--trace", trace_file, "Trace JSON file")->required();
    check_cmd->add_option("--formula", formula_text, "Formula text")->required();
    add_preprocess_flags(check_cmd, check_flags, "none", "off");
    check_cmd->add_flag("--strict-types", check_strict,
                        "Quantifiers range over exact types, not subtypes");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Score learned formulas on a test set");
    std::string formulas_file, report_file = "report.csv", markdown_file;
    PreprocessFlags eval_flags;
    bool eval_strict = false;
    eval_cmd->add_option("--domain", domain_file, "Domain PDDL file")->required();
    eval_cmd->add_option("--instances", instances_dir,
                         "Directory with instance PDDL files (default: domain dir)");
    eval_cmd->add_option("--formulas", formulas_file, "formulas.json from learn")
        ->required();
    eval_cmd->add_option("--positive", positive_dir, "Directory of positive traces")
        ->required();
    eval_cmd->add_option("--negative", negative_dir, "Directory of negative traces")
        ->required();
    add_preprocess_flags(eval_cmd, eval_flags, "2", "on");
    eval_cmd->add_flag("--strict-types", eval_strict,
                       "Quantifiers range over exact types, not subtypes");
    eval_cmd->add_option("--out", report_file, "Output CSV")->capture_default_str();
    eval_cmd->add_option("--markdown", markdown_file, "Also write a markdown table");

    // trace
    auto* trace_cmd = app.add_subcommand("trace", "Replay a plan into a trace file");
    std::string plan_file;
    double trace_score = 1.0;
    trace_cmd->add_option("--domain", domain_file, "Domain PDDL file")->required();
    trace_cmd->add_option("--instance", instance_file, "Instance PDDL file")->required();
    trace_cmd->add_option("--plan", plan_file, "Plan file (IPC format)")->required();
    trace_cmd->add_option("--score", trace_score, "Trace score")->capture_default_str();
    trace_cmd->add_option("--out", out_file, "Output trace JSON")->required();

    // gen-setcover
    auto* gen_cmd = app.add_subcommand("gen-setcover",
                                       "Generate a set-cover learning task");
    int universe = 1, cover_k = 1;
    std::string sets_spec, gen_out_dir;
    gen_cmd->add_option("--universe", universe, "Universe size n")->required();
    gen_cmd->add_option("--sets", sets_spec, "Sets, e.g. '1,2;2,3;1'")->required();
    gen_cmd->add_option("--k", cover_k, "Cover size bound")->required();
    gen_cmd->add_option("--out", gen_out_dir, "Output directory")->required();

    // solve-wcnf
    auto* solve_cmd =
        app.add_subcommand("solve-wcnf", "Solve a DIMACS WCNF file");
    std::string wcnf_file;
    double solve_budget = -1.0;
    solve_cmd->add_option("file", wcnf_file, "DIMACS WCNF input")->required();
    solve_cmd->add_option("--timeout", solve_budget, "Seconds budget");

    // export-wcnf
    auto* export_cmd =
        app.add_subcommand("export-wcnf", "Encode one configuration to DIMACS");
    std::string chain_id, prefix_str, types_list;
    PreprocessFlags export_flags;
    bool export_strict = false, export_eq4 = false;
    int export_decimals = 0;
    export_cmd->add_option("--domain", domain_file, "Domain PDDL file")->required();
    export_cmd->add_option("--instances", instances_dir,
                           "Directory with instance PDDL files (default: domain dir)");
    export_cmd->add_option("--positive", positive_dir, "Directory of positive traces")
        ->required();
    export_cmd->add_option("--negative", negative_dir, "Directory of negative traces")
        ->required();
    export_cmd->add_option("--scores", scores_file, "JSON map trace-file -> score");
    export_cmd->add_option("--chain", chain_id, "Chain id, e.g. '((..).)'")->required();
    export_cmd->add_option("--prefix", prefix_str, "Quantifier prefix over {A,E}")
        ->required();
    export_cmd->add_option("--types", types_list, "Comma-separated quantifier types")
        ->required();
    add_preprocess_flags(export_cmd, export_flags, "2", "on");
    export_cmd->add_option("--ops", ops_list, "Connector alphabet");
    export_cmd->add_flag("--strict-types", export_strict, "Exact-type quantification");
    export_cmd->add_flag("--strict-eq4", export_eq4,
                         "Restrict atom slots to universal variables");
    export_cmd->add_option("--weight-decimals", export_decimals, "Score scaling");
    export_cmd->add_option("--out", out_file, "Output base path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*learn_cmd) {
            if (per_config_s >= 0) opts.per_config.wall_seconds = per_config_s;
            if (*min_score_opt) opts.min_score = min_score_value;
            return cmd_learn(domain_file, instances_dir, positive_dir, negative_dir,
                             scores_file, learn_flags, opts, ops_list, out_file);
        }
        if (*check_cmd)
            return cmd_check(domain_file, instance_file, trace_file, formula_text,
                             check_flags, check_strict);
        if (*eval_cmd)
            return cmd_eval(domain_file, instances_dir, formulas_file, positive_dir,
                            negative_dir, eval_flags, eval_strict, report_file,
                            markdown_file);
        if (*trace_cmd)
            return cmd_trace(domain_file, instance_file, plan_file, trace_score,
                             out_file);
        if (*gen_cmd) return cmd_gen_setcover(universe, sets_spec, cover_k, gen_out_dir);
        if (*solve_cmd) return cmd_solve_wcnf(wcnf_file, solve_budget);
        if (*export_cmd)
            return cmd_export_wcnf(domain_file, instances_dir, positive_dir,
                                   negative_dir, scores_file, export_flags, chain_id,
                                   prefix_str, types_list, ops_list, export_strict,
                                   export_eq4, export_decimals, out_file);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ResourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitResource;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitUsage;
}
