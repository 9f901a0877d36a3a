#include "ftlearn/maxsat.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "ftlearn/sat.hpp"

namespace ftlearn {

namespace {

using Clock = std::chrono::steady_clock;

sat::SolveLimits make_limits(const SolveBudget& budget,
                             std::optional<Clock::time_point> deadline) {
    sat::SolveLimits limits;
    limits.max_conflicts = budget.max_conflicts;
    limits.deadline = deadline;
    return limits;
}

//! Generalized totalizer node: output variable per reachable partial sum,
//! with one-directional "inputs imply output" clauses plus a monotone chain,
//! so a single unit literal caps the whole sum.
struct TotNode {
    std::vector<std::pair<int64_t, int>> outs;  // (sum, var), sums ascending
};

TotNode merge_nodes(sat::Solver& solver, int& next_var, const TotNode& a,
                    const TotNode& b) {
    std::vector<int64_t> sums;
    for (const auto& [sa, va] : a.outs) sums.push_back(sa);
    for (const auto& [sb, vb] : b.outs) sums.push_back(sb);
    for (const auto& [sa, va] : a.outs)
        for (const auto& [sb, vb] : b.outs) sums.push_back(sa + sb);
    std::sort(sums.begin(), sums.end());
    sums.erase(std::unique(sums.begin(), sums.end()), sums.end());

    TotNode out;
    for (int64_t s : sums) {
        ++next_var;
        solver.ensure_vars(next_var);
        out.outs.emplace_back(s, next_var);
    }
    auto out_var = [&](int64_t s) {
        // Largest output sum <= s; inputs only produce sums present in outs.
        auto it = std::lower_bound(out.outs.begin(), out.outs.end(),
                                   std::make_pair(s, 0));
        return it->second;
    };
    for (const auto& [sa, va] : a.outs) solver.add_clause(std::array{-va, out_var(sa)});
    for (const auto& [sb, vb] : b.outs) solver.add_clause(std::array{-vb, out_var(sb)});
    for (const auto& [sa, va] : a.outs)
        for (const auto& [sb, vb] : b.outs)
            solver.add_clause(std::array{-va, -vb, out_var(sa + sb)});
    for (size_t i = 0; i + 1 < out.outs.size(); ++i)
        solver.add_clause(std::array{-out.outs[i + 1].second, out.outs[i].second});
    return out;
}

TotNode build_totalizer(sat::Solver& solver, int& next_var,
                        std::span<const std::pair<int, int64_t>> terms) {
    if (terms.size() == 1) {
        TotNode leaf;
        leaf.outs.emplace_back(terms[0].second, terms[0].first);
        return leaf;
    }
    size_t half = terms.size() / 2;
    TotNode a = build_totalizer(solver, next_var, terms.subspan(0, half));
    TotNode b = build_totalizer(solver, next_var, terms.subspan(half));
    return merge_nodes(solver, next_var, a, b);
}

std::vector<bool> extract_model(const sat::Solver& solver, int num_vars) {
    std::vector<bool> model(num_vars + 1, false);
    for (int v = 1; v <= num_vars; ++v) model[v] = solver.value(v);
    return model;
}

}  // namespace

bool model_satisfies_hard(const WCNF& f, const std::vector<bool>& model) {
    for (const auto& clause : f.hard) {
        bool sat = false;
        for (int lit : clause) {
            int v = std::abs(lit);
            if (v < static_cast<int>(model.size()) && model[v] == (lit > 0)) {
                sat = true;
                break;
            }
        }
        if (!sat) return false;
    }
    return true;
}

int64_t model_cost(const WCNF& f, const std::vector<bool>& model) {
    int64_t cost = 0;
    for (const auto& [clause, weight] : f.soft) {
        bool sat = false;
        for (int lit : clause) {
            int v = std::abs(lit);
            if (v < static_cast<int>(model.size()) && model[v] == (lit > 0)) {
                sat = true;
                break;
            }
        }
        if (!sat) cost += weight;
    }
    return cost;
}

Outcome solve(const WCNF& f, const SolveBudget& budget) {
    std::optional<Clock::time_point> deadline;
    if (budget.wall_seconds >= 0)
        deadline = Clock::now() + std::chrono::microseconds(
                                      static_cast<int64_t>(budget.wall_seconds * 1e6));

    sat::Solver solver;
    solver.ensure_vars(f.num_vars);
    for (const auto& clause : f.hard) {
        if (!solver.add_clause(clause)) return {SolveStatus::Unsatisfiable, {}, -1};
    }

    int next_var = f.num_vars;
    std::vector<std::pair<int, int64_t>> relax_terms;  // (relax var, weight)
    for (const auto& [clause, weight] : f.soft) {
        ++next_var;
        solver.ensure_vars(next_var);
        std::vector<int> relaxed = clause;
        relaxed.push_back(next_var);
        if (!solver.add_clause(relaxed)) return {SolveStatus::Unsatisfiable, {}, -1};
        relax_terms.emplace_back(next_var, weight);
    }

    sat::Result r = solver.solve(make_limits(budget, deadline));
    if (r == sat::Result::Unsat) return {SolveStatus::Unsatisfiable, {}, -1};
    if (r == sat::Result::Unknown) return {SolveStatus::Timeout, {}, -1};

    Outcome best;
    best.model = extract_model(solver, f.num_vars);
    best.cost = model_cost(f, *best.model);
    if (relax_terms.empty() || best.cost == 0) {
        best.status = SolveStatus::Optimum;
        return best;
    }

    TotNode root = build_totalizer(solver, next_var, relax_terms);
    while (best.cost > 0) {
        // Forbid every reachable sum above the new bound.
        auto it = std::lower_bound(root.outs.begin(), root.outs.end(),
                                   std::make_pair(best.cost, 0));
        if (it == root.outs.end()) break;  // incumbent already at the minimum sum
        if (!solver.add_clause(std::array{-it->second})) {
            best.status = SolveStatus::Optimum;
            return best;
        }
        r = solver.solve(make_limits(budget, deadline));
        if (r == sat::Result::Unsat) {
            best.status = SolveStatus::Optimum;
            return best;
        }
        if (r == sat::Result::Unknown) {
            best.status = SolveStatus::SatisfiableBounded;
            return best;
        }
        best.model = extract_model(solver, f.num_vars);
        best.cost = model_cost(f, *best.model);
    }
    best.status = SolveStatus::Optimum;
    return best;
}

Outcome solve_external(const WCNF& f, const std::string& cmd_template) {
    namespace fs = std::filesystem;
    fs::path path = fs::temp_directory_path() /
                    ("ftlearn_" + std::to_string(::getpid()) + "_" +
                     std::to_string(Clock::now().time_since_epoch().count()) + ".wcnf");
    {
        std::ofstream out(path);
        out << to_dimacs(f);
    }
    std::string cmd = cmd_template;
    if (auto pos = cmd.find("{file}"); pos != std::string::npos)
        cmd.replace(pos, 6, path.string());
    else
        cmd += " " + path.string();

    std::string output;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) {
        fs::remove(path);
        throw ValidationError("failed to run external solver: " + cmd);
    }
    char buf[4096];
    while (size_t n = ::fread(buf, 1, sizeof buf, pipe)) output.append(buf, n);
    ::pclose(pipe);
    fs::remove(path);

    SolveStatus status = SolveStatus::Timeout;
    std::istringstream is(output);
    std::string line;
    while (std::getline(is, line)) {
        if (line.rfind("s ", 0) != 0) continue;
        if (line.find("OPTIMUM FOUND") != std::string::npos)
            status = SolveStatus::Optimum;
        else if (line.find("UNSATISFIABLE") != std::string::npos)
            status = SolveStatus::Unsatisfiable;
        else if (line.find("SATISFIABLE") != std::string::npos)
            status = SolveStatus::SatisfiableBounded;
        else if (line.find("UNKNOWN") != std::string::npos)
            status = SolveStatus::Timeout;
    }
    Outcome outcome;
    outcome.status = status;
    if (status == SolveStatus::Optimum || status == SolveStatus::SatisfiableBounded) {
        std::vector<bool> model = parse_model_lines(output, f.num_vars);
        if (!model_satisfies_hard(f, model))
            throw ValidationError("external solver model violates hard clauses");
        outcome.model = std::move(model);
        outcome.cost = model_cost(f, *outcome.model);
    }
    return outcome;
}

}  // namespace ftlearn
