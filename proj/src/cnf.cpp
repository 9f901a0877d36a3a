#include "ftlearn/cnf.hpp"

#include <cctype>
#include <sstream>

namespace ftlearn {

void append_exactly_one(WCNF& f, std::span<const int> vars) {
    if (vars.empty()) throw ValidationError("exactly-one over an empty set");
    if (vars.size() == 1) {
        f.add_hard({vars[0]});
        return;
    }
    if (vars.size() <= 5) {
        std::vector<int> alo(vars.begin(), vars.end());
        f.add_hard(std::move(alo));
        for (size_t i = 0; i < vars.size(); ++i)
            for (size_t j = i + 1; j < vars.size(); ++j)
                f.add_hard({-vars[i], -vars[j]});
        return;
    }
    // Ladder: s_i <-> (x_1 | ... | x_i), with at-most-one rungs. The
    // biconditional keeps the auxiliaries functionally determined.
    const size_t n = vars.size();
    std::vector<int> s(n);
    for (size_t i = 0; i < n; ++i) s[i] = f.new_var();
    f.add_hard({-vars[0], s[0]});
    f.add_hard({vars[0], -s[0]});
    for (size_t i = 1; i < n; ++i) {
        f.add_hard({-vars[i], s[i]});
        f.add_hard({-s[i - 1], s[i]});
        f.add_hard({s[i - 1], vars[i], -s[i]});
        f.add_hard({-s[i - 1], -vars[i]});
    }
    f.add_hard({s[n - 1]});
}

std::string to_dimacs(const WCNF& f) {
    std::ostringstream os;
    const int64_t top = f.top();
    os << "p wcnf " << f.num_vars << " " << f.num_clauses() << " " << top << "\n";
    auto emit = [&os](int64_t weight, const std::vector<int>& clause) {
        os << weight;
        for (int lit : clause) os << " " << lit;
        os << " 0\n";
    };
    for (const auto& c : f.hard) emit(top, c);
    for (const auto& [c, w] : f.soft) emit(w, c);
    return os.str();
}

WCNF parse_dimacs(const std::string& text) {
    WCNF f;
    std::istringstream is(text);
    std::string line;
    int64_t top = -1;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == 'c') continue;
        std::istringstream ls(line);
        if (line[0] == 'p') {
            std::string p, fmt;
            size_t clauses = 0;
            if (!(ls >> p >> fmt >> f.num_vars >> clauses >> top) || fmt != "wcnf")
                throw ValidationError("malformed wcnf header: " + line);
            continue;
        }
        if (top < 0) throw ValidationError("wcnf clause before the header");
        int64_t weight;
        if (!(ls >> weight)) throw ValidationError("malformed wcnf line: " + line);
        std::vector<int> clause;
        int lit;
        while (ls >> lit && lit != 0) {
            clause.push_back(lit);
            if (std::abs(lit) > f.num_vars)
                throw ValidationError("literal out of range: " + line);
        }
        if (weight >= top)
            f.add_hard(std::move(clause));
        else
            f.add_soft(std::move(clause), weight);
    }
    if (top < 0) throw ValidationError("missing wcnf header");
    return f;
}

std::vector<bool> parse_model_lines(const std::string& text, int num_vars) {
    std::string payload;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.size() >= 1 && line[0] == 'v') {
            payload += line.substr(1);
            payload += " ";
        }
    }
    if (payload.find_first_not_of(" \t\r") == std::string::npos)
        throw ValidationError("no model lines in solver output");

    std::istringstream ps(payload);
    std::vector<std::string> tokens;
    std::string tok;
    while (ps >> tok) tokens.push_back(tok);

    // New-format bitstring: a single 0/1 run covering all variables.
    std::string joined;
    for (const auto& t : tokens) joined += t;
    bool bitstring = !joined.empty() &&
                     joined.find_first_not_of("01") == std::string::npos &&
                     static_cast<int>(joined.size()) == num_vars;

    std::vector<bool> model(num_vars + 1, false);
    if (bitstring) {
        for (int v = 1; v <= num_vars; ++v) model[v] = joined[v - 1] == '1';
        return model;
    }
    for (const auto& t : tokens) {
        int lit;
        try {
            lit = std::stoi(t);
        } catch (const std::exception&) {
            throw ValidationError("malformed literal '" + t + "' in solver output");
        }
        if (lit == 0) continue;
        int var = std::abs(lit);
        if (var > num_vars)
            throw ValidationError("literal out of range in solver output");
        model[var] = lit > 0;
    }
    return model;
}

}  // namespace ftlearn
