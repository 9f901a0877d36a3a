#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ftlearn::sat {

enum class Result { Sat, Unsat, Unknown };

struct SolveLimits {
    int64_t max_conflicts = -1;  // < 0: unlimited
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

//! CDCL solver with two watched literals, VSIDS branching, phase saving and
//! Luby restarts. Deterministic for a fixed clause sequence. Clauses may be
//! added between solve() calls.
class Solver {
public:
    Solver();

    void ensure_vars(int n);
    int num_vars() const { return static_cast<int>(activity_.size()); }

    //! DIMACS literals; returns false when the clause makes the instance
    //! inconsistent at the root level.
    bool add_clause(std::span<const int> dimacs_lits);

    Result solve(const SolveLimits& limits = {});

    //! Valid after solve() returned Sat; var is 1-based.
    bool value(int var) const;

    int64_t conflicts() const { return conflicts_; }

private:
    using Lit = int32_t;  // var << 1 | sign
    using CRef = uint32_t;
    static constexpr CRef kNoReason = UINT32_MAX;
    enum class LBool : uint8_t { False = 0, True = 1, Undef = 2 };

    static Lit lit_not(Lit l) { return l ^ 1; }
    static int lit_var(Lit l) { return l >> 1; }
    static bool lit_sign(Lit l) { return l & 1; }

    LBool lit_value(Lit l) const {
        LBool v = assigns_[lit_var(l)];
        if (v == LBool::Undef) return LBool::Undef;
        return (v == LBool::True) != lit_sign(l) ? LBool::True : LBool::False;
    }

    struct Watcher {
        CRef cref;
        Lit blocker;
    };

    // Clause layout in the arena: [size | flags, activity bits, lits...].
    int clause_size(CRef c) const { return static_cast<int>(arena_[c] >> 2); }
    bool clause_learnt(CRef c) const { return arena_[c] & 1; }
    bool clause_deleted(CRef c) const { return arena_[c] & 2; }
    Lit* clause_lits(CRef c) { return reinterpret_cast<Lit*>(&arena_[c + 2]); }
    const Lit* clause_lits(CRef c) const {
        return reinterpret_cast<const Lit*>(&arena_[c + 2]);
    }
    float clause_activity(CRef c) const;
    void set_clause_activity(CRef c, float a);

    CRef alloc_clause(std::span<const Lit> lits, bool learnt);
    void attach_clause(CRef c);
    void delete_clause(CRef c);
    bool locked(CRef c) const;

    void enqueue(Lit l, CRef reason);
    CRef propagate();
    void analyze(CRef confl, std::vector<Lit>& learnt, int& backtrack_level);
    void cancel_until(int level);
    Lit pick_branch_lit();
    void bump_var(int v);
    void decay_var_activity();
    void bump_clause(CRef c);
    void decay_clause_activity();
    void reduce_db();
    Result search(int64_t conflict_budget, const SolveLimits& limits);

    // Heap over variable activities (max-heap, ties by smaller index).
    bool heap_lt(int u, int v) const;
    void heap_insert(int v);
    void heap_update(int v);
    int heap_pop();
    void heap_sift_up(int i);
    void heap_sift_down(int i);

    std::vector<uint32_t> arena_;
    std::vector<CRef> clauses_, learnts_;
    std::vector<std::vector<Watcher>> watches_;  // indexed by lit
    std::vector<LBool> assigns_;
    std::vector<bool> polarity_;
    std::vector<int> level_;
    std::vector<CRef> reason_;
    std::vector<Lit> trail_;
    std::vector<int> trail_lim_;
    size_t propagate_head_ = 0;

    std::vector<double> activity_;
    double var_inc_ = 1.0;
    double clause_inc_ = 1.0;
    std::vector<int> heap_, heap_pos_;
    std::vector<char> seen_;

    bool ok_ = true;
    int64_t conflicts_ = 0;
    size_t max_learnts_ = 0;
};

}  // namespace ftlearn::sat
