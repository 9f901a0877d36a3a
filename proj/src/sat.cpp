#include "ftlearn/sat.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace ftlearn::sat {

namespace {

int64_t luby(int64_t i) {
    // Luby sequence: 1 1 2 1 1 2 4 1 1 2 1 1 2 4 8 ...
    int64_t k = 1;
    while ((int64_t(1) << (k + 1)) <= i + 1) ++k;
    while ((int64_t(1) << k) - 1 != i + 1) {
        i = i - (int64_t(1) << k) + 1;
        k = 1;
        while ((int64_t(1) << (k + 1)) <= i + 1) ++k;
    }
    return int64_t(1) << (k - 1);
}

}  // namespace

Solver::Solver() = default;

void Solver::ensure_vars(int n) {
    while (num_vars() < n) {
        assigns_.push_back(LBool::Undef);
        polarity_.push_back(false);
        level_.push_back(0);
        reason_.push_back(kNoReason);
        activity_.push_back(0.0);
        seen_.push_back(0);
        watches_.emplace_back();
        watches_.emplace_back();
        heap_pos_.push_back(-1);
        heap_insert(num_vars() - 1);
    }
}

float Solver::clause_activity(CRef c) const {
    float a;
    std::memcpy(&a, &arena_[c + 1], sizeof(float));
    return a;
}

void Solver::set_clause_activity(CRef c, float a) {
    std::memcpy(&arena_[c + 1], &a, sizeof(float));
}

Solver::CRef Solver::alloc_clause(std::span<const Lit> lits, bool learnt) {
    CRef c = static_cast<CRef>(arena_.size());
    arena_.push_back(static_cast<uint32_t>(lits.size()) << 2 | (learnt ? 1 : 0));
    arena_.push_back(0);
    for (Lit l : lits) arena_.push_back(static_cast<uint32_t>(l));
    if (learnt) set_clause_activity(c, 0.0f);
    return c;
}

void Solver::attach_clause(CRef c) {
    const Lit* lits = clause_lits(c);
    watches_[lit_not(lits[0])].push_back({c, lits[1]});
    watches_[lit_not(lits[1])].push_back({c, lits[0]});
}

void Solver::delete_clause(CRef c) { arena_[c] |= 2; }

bool Solver::locked(CRef c) const {
    Lit first = clause_lits(c)[0];
    return lit_value(first) == LBool::True && reason_[lit_var(first)] == c;
}

bool Solver::add_clause(std::span<const int> dimacs_lits) {
    if (!ok_) return false;
    cancel_until(0);
    std::vector<Lit> lits;
    lits.reserve(dimacs_lits.size());
    for (int d : dimacs_lits) {
        if (d == 0) continue;
        int v = std::abs(d);
        ensure_vars(v);
        lits.push_back((v - 1) << 1 | (d < 0 ? 1 : 0));
    }
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    // Drop tautologies and root-level falsified literals.
    std::vector<Lit> cleaned;
    for (size_t i = 0; i < lits.size(); ++i) {
        if (i + 1 < lits.size() && lits[i + 1] == lit_not(lits[i])) return true;
        if (i > 0 && lits[i] == lit_not(lits[i - 1])) return true;
        LBool v = lit_value(lits[i]);
        if (v == LBool::True && level_[lit_var(lits[i])] == 0) return true;
        if (v == LBool::False && level_[lit_var(lits[i])] == 0) continue;
        cleaned.push_back(lits[i]);
    }
    if (cleaned.empty()) {
        ok_ = false;
        return false;
    }
    if (cleaned.size() == 1) {
        if (lit_value(cleaned[0]) == LBool::False) {
            ok_ = false;
            return false;
        }
        if (lit_value(cleaned[0]) == LBool::Undef) enqueue(cleaned[0], kNoReason);
        if (propagate() != kNoReason) {
            ok_ = false;
            return false;
        }
        return true;
    }
    CRef c = alloc_clause(cleaned, false);
    clauses_.push_back(c);
    attach_clause(c);
    return true;
}

void Solver::enqueue(Lit l, CRef reason) {
    int v = lit_var(l);
    assigns_[v] = lit_sign(l) ? LBool::False : LBool::True;
    level_[v] = static_cast<int>(trail_lim_.size());
    reason_[v] = reason;
    trail_.push_back(l);
}

Solver::CRef Solver::propagate() {
    while (propagate_head_ < trail_.size()) {
        Lit p = trail_[propagate_head_++];
        std::vector<Watcher>& ws = watches_[p];
        size_t keep = 0;
        for (size_t i = 0; i < ws.size(); ++i) {
            Watcher w = ws[i];
            if (clause_deleted(w.cref)) continue;
            if (lit_value(w.blocker) == LBool::True) {
                ws[keep++] = w;
                continue;
            }
            Lit* lits = clause_lits(w.cref);
            const int size = clause_size(w.cref);
            const Lit not_p = lit_not(p);
            if (lits[0] == not_p) std::swap(lits[0], lits[1]);
            // lits[1] == not_p now.
            if (lit_value(lits[0]) == LBool::True) {
                ws[keep++] = {w.cref, lits[0]};
                continue;
            }
            bool moved = false;
            for (int k = 2; k < size; ++k) {
                if (lit_value(lits[k]) != LBool::False) {
                    std::swap(lits[1], lits[k]);
                    watches_[lit_not(lits[1])].push_back({w.cref, lits[0]});
                    moved = true;
                    break;
                }
            }
            if (moved) continue;
            // Unit or conflicting.
            ws[keep++] = {w.cref, lits[0]};
            if (lit_value(lits[0]) == LBool::False) {
                for (size_t j = i + 1; j < ws.size(); ++j) ws[keep++] = ws[j];
                ws.resize(keep);
                propagate_head_ = trail_.size();
                return w.cref;
            }
            enqueue(lits[0], w.cref);
        }
        ws.resize(keep);
    }
    return kNoReason;
}

void Solver::analyze(CRef confl, std::vector<Lit>& learnt, int& backtrack_level) {
    learnt.clear();
    learnt.push_back(0);  // placeholder for the asserting literal
    int counter = 0;
    Lit p = -1;
    size_t index = trail_.size();
    const int current_level = static_cast<int>(trail_lim_.size());

    do {
        const Lit* lits = clause_lits(confl);
        const int size = clause_size(confl);
        if (clause_learnt(confl)) bump_clause(confl);
        for (int j = (p == -1 ? 0 : 1); j < size; ++j) {
            Lit q = lits[j];
            int v = lit_var(q);
            if (!seen_[v] && level_[v] > 0) {
                seen_[v] = 1;
                bump_var(v);
                if (level_[v] >= current_level)
                    ++counter;
                else
                    learnt.push_back(q);
            }
        }
        while (!seen_[lit_var(trail_[--index])]) {}
        p = trail_[index];
        confl = reason_[lit_var(p)];
        seen_[lit_var(p)] = 0;
        --counter;
    } while (counter > 0);
    learnt[0] = lit_not(p);

    // Cheap minimization: drop literals whose reason clause lies entirely
    // inside the learnt clause (plus root-level literals).
    std::vector<int> to_clear;
    to_clear.reserve(learnt.size());
    for (size_t i = 1; i < learnt.size(); ++i) {
        seen_[lit_var(learnt[i])] = 1;
        to_clear.push_back(lit_var(learnt[i]));
    }
    size_t keep = 1;
    for (size_t i = 1; i < learnt.size(); ++i) {
        int v = lit_var(learnt[i]);
        CRef r = reason_[v];
        bool redundant = false;
        if (r != kNoReason) {
            const Lit* rl = clause_lits(r);
            const int rs = clause_size(r);
            redundant = true;
            for (int j = 0; j < rs; ++j) {
                int rv = lit_var(rl[j]);
                if (rv != v && !seen_[rv] && level_[rv] > 0) {
                    redundant = false;
                    break;
                }
            }
        }
        if (!redundant) learnt[keep++] = learnt[i];
    }
    for (int v : to_clear) seen_[v] = 0;
    learnt.resize(keep);

    backtrack_level = 0;
    if (learnt.size() > 1) {
        size_t max_i = 1;
        for (size_t i = 2; i < learnt.size(); ++i)
            if (level_[lit_var(learnt[i])] > level_[lit_var(learnt[max_i])]) max_i = i;
        std::swap(learnt[1], learnt[max_i]);
        backtrack_level = level_[lit_var(learnt[1])];
    }
}

void Solver::cancel_until(int level) {
    if (static_cast<int>(trail_lim_.size()) <= level) return;
    for (size_t i = trail_.size(); i-- > static_cast<size_t>(trail_lim_[level]);) {
        int v = lit_var(trail_[i]);
        polarity_[v] = assigns_[v] == LBool::True;
        assigns_[v] = LBool::Undef;
        reason_[v] = kNoReason;
        if (heap_pos_[v] < 0) heap_insert(v);
    }
    trail_.resize(trail_lim_[level]);
    trail_lim_.resize(level);
    propagate_head_ = trail_.size();
}

Solver::Lit Solver::pick_branch_lit() {
    while (!heap_.empty()) {
        int v = heap_pop();
        if (assigns_[v] == LBool::Undef)
            return v << 1 | (polarity_[v] ? 0 : 1);
    }
    return -1;
}

void Solver::bump_var(int v) {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
        for (double& a : activity_) a *= 1e-100;
        var_inc_ *= 1e-100;
    }
    if (heap_pos_[v] >= 0) heap_update(v);
}

void Solver::decay_var_activity() { var_inc_ /= 0.95; }

void Solver::bump_clause(CRef c) {
    float a = clause_activity(c) + static_cast<float>(clause_inc_);
    set_clause_activity(c, a);
    if (a > 1e20f) {
        for (CRef l : learnts_)
            if (!clause_deleted(l)) set_clause_activity(l, clause_activity(l) * 1e-20f);
        clause_inc_ *= 1e-20;
    }
}

void Solver::decay_clause_activity() { clause_inc_ /= 0.999; }

void Solver::reduce_db() {
    std::vector<CRef> live;
    live.reserve(learnts_.size());
    for (CRef c : learnts_)
        if (!clause_deleted(c)) live.push_back(c);
    std::stable_sort(live.begin(), live.end(), [this](CRef a, CRef b) {
        return clause_activity(a) < clause_activity(b);
    });
    size_t target = live.size() / 2;
    size_t removed = 0;
    for (CRef c : live) {
        if (removed >= target) break;
        if (clause_size(c) <= 2 || locked(c)) continue;
        delete_clause(c);
        ++removed;
    }
    learnts_.erase(std::remove_if(learnts_.begin(), learnts_.end(),
                                  [this](CRef c) { return clause_deleted(c); }),
                   learnts_.end());
}

Result Solver::search(int64_t conflict_budget, const SolveLimits& limits) {
    std::vector<Lit> learnt;
    int64_t local_conflicts = 0;
    while (true) {
        CRef confl = propagate();
        if (confl != kNoReason) {
            ++conflicts_;
            ++local_conflicts;
            if (trail_lim_.empty()) {
                ok_ = false;
                return Result::Unsat;
            }
            int backtrack_level = 0;
            analyze(confl, learnt, backtrack_level);
            cancel_until(backtrack_level);
            if (learnt.size() == 1) {
                enqueue(learnt[0], kNoReason);
            } else {
                CRef c = alloc_clause(learnt, true);
                learnts_.push_back(c);
                attach_clause(c);
                bump_clause(c);
                enqueue(learnt[0], c);
            }
            decay_var_activity();
            decay_clause_activity();
            if ((conflicts_ & 1023) == 0 && limits.deadline &&
                std::chrono::steady_clock::now() >= *limits.deadline)
                return Result::Unknown;
            if (limits.max_conflicts >= 0 && conflicts_ >= limits.max_conflicts)
                return Result::Unknown;
        } else {
            if (local_conflicts >= conflict_budget) {
                cancel_until(0);
                return Result::Unknown;  // restart
            }
            if (learnts_.size() > max_learnts_) reduce_db();
            Lit next = pick_branch_lit();
            if (next < 0) return Result::Sat;
            trail_lim_.push_back(static_cast<int>(trail_.size()));
            enqueue(next, kNoReason);
        }
    }
}

Result Solver::solve(const SolveLimits& limits) {
    if (!ok_) return Result::Unsat;
    cancel_until(0);
    if (propagate() != kNoReason) {
        ok_ = false;
        return Result::Unsat;
    }
    max_learnts_ = std::max<size_t>(5000, clauses_.size() / 3);
    for (int64_t restarts = 0;; ++restarts) {
        int64_t budget = 128 * luby(restarts);
        Result r = search(budget, limits);
        if (r == Result::Sat || r == Result::Unsat) return r;
        if (limits.deadline && std::chrono::steady_clock::now() >= *limits.deadline)
            return Result::Unknown;
        if (limits.max_conflicts >= 0 && conflicts_ >= limits.max_conflicts)
            return Result::Unknown;
    }
}

bool Solver::value(int var) const {
    return assigns_.at(var - 1) == LBool::True;
}

bool Solver::heap_lt(int u, int v) const {
    if (activity_[u] != activity_[v]) return activity_[u] > activity_[v];
    return u < v;
}

void Solver::heap_insert(int v) {
    heap_pos_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    heap_sift_up(heap_pos_[v]);
}

void Solver::heap_update(int v) { heap_sift_up(heap_pos_[v]); }

int Solver::heap_pop() {
    int top = heap_[0];
    heap_pos_[top] = -1;
    heap_[0] = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
        heap_pos_[heap_[0]] = 0;
        heap_sift_down(0);
    }
    return top;
}

void Solver::heap_sift_up(int i) {
    int v = heap_[i];
    while (i > 0) {
        int parent = (i - 1) / 2;
        if (!heap_lt(v, heap_[parent])) break;
        heap_[i] = heap_[parent];
        heap_pos_[heap_[i]] = i;
        i = parent;
    }
    heap_[i] = v;
    heap_pos_[v] = i;
}

void Solver::heap_sift_down(int i) {
    int v = heap_[i];
    const int n = static_cast<int>(heap_.size());
    while (true) {
        int child = 2 * i + 1;
        if (child >= n) break;
        if (child + 1 < n && heap_lt(heap_[child + 1], heap_[child])) ++child;
        if (!heap_lt(heap_[child], v)) break;
        heap_[i] = heap_[child];
        heap_pos_[heap_[i]] = i;
        i = child;
    }
    heap_[i] = v;
    heap_pos_[v] = i;
}

}  // namespace ftlearn::sat
