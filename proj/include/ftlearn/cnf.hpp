#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ftlearn/pddl.hpp"

namespace ftlearn {

//! Weighted partial CNF. Literals are DIMACS-style nonzero ints; hard
//! clauses must hold, soft clauses carry positive integer weights.
struct WCNF {
    int num_vars = 0;
    std::vector<std::vector<int>> hard;
    std::vector<std::pair<std::vector<int>, int64_t>> soft;

    int new_var() { return ++num_vars; }

    void add_hard(std::vector<int> clause) { hard.push_back(std::move(clause)); }

    void add_soft(std::vector<int> clause, int64_t weight) {
        if (weight < 1) throw ValidationError("soft clause weight must be >= 1");
        soft.emplace_back(std::move(clause), weight);
    }

    //! Hard-clause weight for the DIMACS encoding: sum of soft weights + 1.
    int64_t top() const {
        int64_t sum = 1;
        for (const auto& [c, w] : soft) sum += w;
        return sum;
    }

    size_t num_clauses() const { return hard.size() + soft.size(); }
};

//! Clauses satisfiable exactly by the assignments with one true member.
//! Pairwise for up to 5 variables; for more, a ladder encoding whose
//! auxiliary variables are functionally determined (model count preserved).
void append_exactly_one(WCNF& f, std::span<const int> vars);

//! Classic DIMACS: "p wcnf <vars> <clauses> <top>", hard clauses first.
std::string to_dimacs(const WCNF& f);

//! Inverse of to_dimacs; clauses with the top weight become hard.
WCNF parse_dimacs(const std::string& text);

//! Parses solver output "v" lines: either whitespace-separated literals or
//! the 0/1 bitstring form. Returns the assignment indexed by variable (index
//! 0 unused).
std::vector<bool> parse_model_lines(const std::string& text, int num_vars);

}  // namespace ftlearn
