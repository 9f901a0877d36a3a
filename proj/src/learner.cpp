#include "ftlearn/learner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>

#include <json.hpp>

namespace ftlearn {

namespace {

using Clock = std::chrono::steady_clock;

CheckOptions check_options(const LearnOptions& opts) {
    CheckOptions c;
    c.strict_types = opts.encoder.strict_types;
    return c;
}

}  // namespace

std::optional<FoundFormula> find_formula(const ShapeConfig& cfg, const Domain& d,
                                         const ScoredSet& ts,
                                         const LearnOptions& opts) {
    const auto start = Clock::now();
    Encoding enc = encode(cfg, d, ts, opts.encoder);
    if (enc.infeasible) return std::nullopt;

    Outcome outcome = opts.external_cmd.empty()
                          ? solve(enc.wcnf, opts.per_config)
                          : solve_external(enc.wcnf, opts.external_cmd);
    if (!outcome.has_model()) return std::nullopt;

    Formula formula = decode(*outcome.model, enc.varmap, cfg, d);

    // The decoded formula must agree with the model checker on every trace;
    // a mismatch means the encoding is wrong, not the input.
    const CheckOptions check = check_options(opts);
    int64_t scaled_score = 0;
    for (size_t t = 0; t < ts.traces.size(); ++t) {
        const bool sat_model = (*outcome.model)[enc.varmap.trace_sat_var[t]];
        const bool sat_checker = holds(ts.traces[t], formula, d, check);
        if (sat_model != sat_checker)
            throw std::logic_error("encoder/checker disagree on trace '" +
                                   ts.traces[t].id + "' for formula " +
                                   formula.to_text(d));
        if (sat_checker) scaled_score += enc.varmap.trace_weight[t];
    }
    if (scaled_score != enc.varmap.positive_weight_sum - outcome.cost)
        throw std::logic_error("solver objective does not match the checker score");

    FoundFormula out;
    out.formula = std::move(formula);
    out.train_score =
        static_cast<double>(scaled_score) / static_cast<double>(enc.varmap.scale);
    out.optimum = outcome.status == SolveStatus::Optimum;
    out.chain_id = cfg.chain.id();
    out.prefix = cfg.prefix_string();
    for (TypeId t : cfg.types) out.types.push_back(d.types.name(t));
    out.quantifiers = cfg.num_quantifiers();
    out.ops_budget = cfg.chain.num_connectors;
    out.solve_time_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start)
            .count();
    return out;
}

LearnResult learn(const Domain& d, const ScoredSet& ts, const LearnOptions& opts) {
    if (opts.max_ops < 0) throw ValidationError("operator budget must be >= 0");
    if (opts.max_quantifiers < 1)
        throw ValidationError("quantifier budget must be >= 1");
    if (ts.positives().empty() || ts.negatives().empty())
        throw ValidationError(
            "learning needs at least one positive and one negative trace");

    // Canonical trace order: the output has set semantics over the input.
    ScoredSet sorted = ts;
    std::stable_sort(sorted.traces.begin(), sorted.traces.end(),
                     [](const InstantiatedTrace& a, const InstantiatedTrace& b) {
                         return a.id < b.id;
                     });

    std::vector<ShapeConfig> configs;
    for (int r = 0; r <= opts.max_ops; ++r) {
        for (const TLChain& chain : gen_chains(r)) {
            for (int q = 1; q <= opts.max_quantifiers; ++q) {
                for (const auto& prefix : gen_quantifier_prefixes(q)) {
                    for (const auto& types : gen_type_tuples(d, q, prefix))
                        configs.push_back({chain, prefix, types});
                }
            }
        }
    }

    std::optional<Clock::time_point> deadline;
    if (opts.global_timeout_s >= 0)
        deadline = Clock::now() + std::chrono::microseconds(static_cast<int64_t>(
                                      opts.global_timeout_s * 1e6));
    const double perfect = sorted.sum_positive_scores();

    std::vector<std::optional<FoundFormula>> results(configs.size());
    std::vector<char> attempted(configs.size(), 0);
    std::atomic<size_t> next{0};
    std::atomic<bool> stop{false};
    std::atomic<bool> hit_deadline{false};
    std::mutex error_mutex;
    std::exception_ptr error;

    auto worker = [&] {
        while (!stop.load(std::memory_order_relaxed)) {
            const size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= configs.size()) return;
            if (deadline && Clock::now() >= *deadline) {
                hit_deadline.store(true);
                stop.store(true);
                return;
            }
            try {
                attempted[i] = 1;
                results[i] = find_formula(configs[i], d, sorted, opts);
                if (results[i] && opts.first_perfect &&
                    results[i]->train_score >= perfect)
                    stop.store(true);
            } catch (const ResourceError&) {
                // One oversized configuration does not abort the run.
                results[i] = std::nullopt;
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                stop.store(true);
                return;
            }
        }
    };

    const int workers = std::max(1, opts.workers);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);

    LearnResult out;
    out.timed_out = hit_deadline.load();
    std::vector<std::string> seen_texts;
    for (size_t i = 0; i < configs.size(); ++i) {
        if (!attempted[i]) continue;
        ++out.configs_attempted;
        if (!results[i]) {
            ++out.configs_failed;
            continue;
        }
        const std::string text = results[i]->formula.to_text(d);
        if (std::find(seen_texts.begin(), seen_texts.end(), text) != seen_texts.end())
            continue;
        seen_texts.push_back(text);
        out.formulas.push_back(std::move(*results[i]));
    }

    std::stable_sort(out.formulas.begin(), out.formulas.end(),
                     [&d](const FoundFormula& a, const FoundFormula& b) {
                         if (a.train_score != b.train_score)
                             return a.train_score > b.train_score;
                         if (a.ops_budget != b.ops_budget)
                             return a.ops_budget < b.ops_budget;
                         if (a.quantifiers != b.quantifiers)
                             return a.quantifiers < b.quantifiers;
                         return a.formula.to_text(d) < b.formula.to_text(d);
                     });
    if (opts.min_score) {
        std::erase_if(out.formulas, [&](const FoundFormula& ff) {
            return ff.train_score < *opts.min_score;
        });
    }
    return out;
}

std::string formulas_to_json(const LearnResult& result, const Domain& d) {
    nlohmann::json doc;
    auto arr = nlohmann::json::array();
    for (const auto& ff : result.formulas) {
        arr.push_back({{"formula", ff.formula.to_text(d)},
                       {"pretty", ff.formula.to_pretty(d)},
                       {"train_score", ff.train_score},
                       {"optimum", ff.optimum},
                       {"chain_id", ff.chain_id},
                       {"prefix", ff.prefix},
                       {"types", ff.types},
                       {"ops_budget", ff.ops_budget},
                       {"quantifiers", ff.quantifiers},
                       {"solve_time_ms", ff.solve_time_ms}});
    }
    doc["formulas"] = std::move(arr);
    doc["configs_attempted"] = result.configs_attempted;
    doc["configs_failed"] = result.configs_failed;
    doc["timed_out"] = result.timed_out;
    return doc.dump(2) + "\n";
}

}  // namespace ftlearn
