#include <doctest.h>

#include "ftlearn/cnf.hpp"

using namespace ftlearn;

namespace {

//! Tiny model counter over all variables of a CNF's hard clauses.
int count_models(const WCNF& f) {
    const int n = f.num_vars;
    REQUIRE(n <= 20);
    int models = 0;
    for (int64_t mask = 0; mask < (int64_t(1) << n); ++mask) {
        bool ok = true;
        for (const auto& clause : f.hard) {
            bool sat = false;
            for (int lit : clause) {
                const int v = std::abs(lit) - 1;
                if (((mask >> v) & 1) == (lit > 0)) {
                    sat = true;
                    break;
                }
            }
            if (!sat) {
                ok = false;
                break;
            }
        }
        if (ok) ++models;
    }
    return models;
}

}  // namespace

TEST_CASE("exactly-one over a single variable is a unit clause") {
    WCNF f;
    int x = f.new_var();
    append_exactly_one(f, std::vector<int>{x});
    REQUIRE(f.hard.size() == 1);
    CHECK(f.hard[0] == std::vector<int>{x});
}

TEST_CASE("exactly-one over two variables is the pairwise encoding") {
    WCNF f;
    int x = f.new_var(), y = f.new_var();
    append_exactly_one(f, std::vector<int>{x, y});
    REQUIRE(f.hard.size() == 2);
    CHECK(f.hard[0] == std::vector<int>{x, y});
    CHECK(f.hard[1] == std::vector<int>{-x, -y});
    CHECK(count_models(f) == 2);
}

TEST_CASE("exactly-one over eight variables uses the ladder; model count 8") {
    WCNF f;
    std::vector<int> vars;
    for (int i = 0; i < 8; ++i) vars.push_back(f.new_var());
    append_exactly_one(f, vars);
    CHECK(f.num_vars > 8);  // ladder auxiliaries
    CHECK(count_models(f) == 8);
}

TEST_CASE("exactly-one model counts for intermediate sizes") {
    for (int n = 3; n <= 9; ++n) {
        WCNF f;
        std::vector<int> vars;
        for (int i = 0; i < n; ++i) vars.push_back(f.new_var());
        append_exactly_one(f, vars);
        CHECK(count_models(f) == n);
    }
}

TEST_CASE("exactly-one over the empty set is an error") {
    WCNF f;
    CHECK_THROWS_AS(append_exactly_one(f, std::vector<int>{}), ValidationError);
}

TEST_CASE("dimacs output matches the golden two-variable instance") {
    WCNF f;
    int x = f.new_var(), y = f.new_var();
    f.add_hard({x, y});
    f.add_soft({-x}, 3);
    f.add_soft({-y}, 2);
    CHECK(to_dimacs(f) ==
          "p wcnf 2 3 6\n"
          "6 1 2 0\n"
          "3 -1 0\n"
          "2 -2 0\n");
}

TEST_CASE("dimacs round-trips through the parser") {
    WCNF f;
    for (int i = 0; i < 4; ++i) f.new_var();
    f.add_hard({1, -2, 3});
    f.add_hard({-4});
    f.add_soft({2, 4}, 5);
    f.add_soft({-1}, 1);
    WCNF g = parse_dimacs(to_dimacs(f));
    CHECK(g.num_vars == f.num_vars);
    CHECK(g.hard == f.hard);
    CHECK(g.soft == f.soft);
    CHECK_THROWS_AS(parse_dimacs("1 2 0\n"), ValidationError);
    CHECK_THROWS_AS(parse_dimacs("p wcnf 1 1 5\n5 9 0\n"), ValidationError);
}

TEST_CASE("model lines: literal list form") {
    auto model = parse_model_lines("c comment\ns OPTIMUM FOUND\nv 1 -2 0\n", 2);
    CHECK(model[1]);
    CHECK_FALSE(model[2]);
}

TEST_CASE("model lines: bitstring form") {
    auto model = parse_model_lines("v 10\n", 2);
    CHECK(model[1]);
    CHECK_FALSE(model[2]);
    // The same payload with three variables is a literal list: x10 true.
    auto as_lits = parse_model_lines("v 10\n", 20);
    CHECK(as_lits[10]);
}

TEST_CASE("model lines: split across several v lines") {
    auto model = parse_model_lines("v 1 -2\nv 3 0\n", 3);
    CHECK(model[1]);
    CHECK_FALSE(model[2]);
    CHECK(model[3]);
}

TEST_CASE("malformed solver output is rejected") {
    CHECK_THROWS_AS(parse_model_lines("s OPTIMUM FOUND\n", 2), ValidationError);
    CHECK_THROWS_AS(parse_model_lines("v 1 bogus\n", 2), ValidationError);
    CHECK_THROWS_AS(parse_model_lines("v 99\n", 2), ValidationError);
}

TEST_CASE("soft weights must be positive") {
    WCNF f;
    int x = f.new_var();
    CHECK_THROWS_AS(f.add_soft({x}, 0), ValidationError);
}
