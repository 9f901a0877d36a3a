#include "ftlearn/shape.hpp"

namespace ftlearn {

namespace {

//! Recursive shape: empty children = predicate leaf.
struct Shape {
    std::unique_ptr<Shape> left, right;
};

std::vector<std::unique_ptr<Shape>> gen_shapes(int connectors) {
    std::vector<std::unique_ptr<Shape>> out;
    if (connectors == 0) {
        out.push_back(std::make_unique<Shape>());
        return out;
    }
    for (int left_size = connectors - 1; left_size >= 0; --left_size) {
        auto lefts = gen_shapes(left_size);
        auto rights = gen_shapes(connectors - 1 - left_size);
        for (const auto& l : lefts) {
            for (const auto& r : rights) {
                auto clone = [](const Shape& s, auto&& self) -> std::unique_ptr<Shape> {
                    auto c = std::make_unique<Shape>();
                    if (s.left) c->left = self(*s.left, self);
                    if (s.right) c->right = self(*s.right, self);
                    return c;
                };
                auto node = std::make_unique<Shape>();
                node->left = clone(*l, clone);
                node->right = clone(*r, clone);
                out.push_back(std::move(node));
            }
        }
    }
    return out;
}

//! Assigns preorder ids: connectors first (0..n-1), then predicate leaves.
void flatten(const Shape& s, TLChain& chain, int& next_connector, int& next_leaf,
             int& self_id) {
    if (!s.left) {
        self_id = next_leaf++;
        return;
    }
    self_id = next_connector++;
    int l = -1, r = -1;
    flatten(*s.left, chain, next_connector, next_leaf, l);
    flatten(*s.right, chain, next_connector, next_leaf, r);
    chain.left[self_id] = l;
    chain.right[self_id] = r;
}

// Preorder ids do not match the leaf numbering pass above (leaves must start
// at num_connectors), so run flatten twice: first count, then assign.
TLChain to_chain(const Shape& s, int connectors) {
    TLChain chain;
    chain.num_connectors = connectors;
    chain.left.assign(connectors, -1);
    chain.right.assign(connectors, -1);
    int next_connector = 0;
    int next_leaf = connectors;
    int root = -1;
    flatten(s, chain, next_connector, next_leaf, root);
    return chain;
}

void append_id(const TLChain& c, int node, std::string& out) {
    if (!c.is_connector(node)) {
        out += '.';
        return;
    }
    out += '(';
    append_id(c, c.left[node], out);
    append_id(c, c.right[node], out);
    out += ')';
}

void tuples_rec(const Domain& d, const std::vector<Quant>& prefix, int q, int j,
                TypeId min_type, std::vector<TypeId>& current,
                std::vector<std::vector<TypeId>>& out) {
    if (j == q) {
        out.push_back(current);
        return;
    }
    // Inside a same-kind block only non-decreasing type ids are emitted;
    // crossing a block boundary resets the lower bound.
    TypeId lo = (j > 0 && prefix[j] == prefix[j - 1]) ? min_type : 0;
    for (TypeId t = lo; t < d.types.size(); ++t) {
        current[j] = t;
        tuples_rec(d, prefix, q, j + 1, t, current, out);
    }
}

}  // namespace

std::string TLChain::id() const {
    std::string out;
    append_id(*this, root(), out);
    return out;
}

std::string ShapeConfig::prefix_string() const {
    std::string out;
    for (Quant k : prefix) out += (k == Quant::Forall ? 'A' : 'E');
    return out;
}

std::vector<TLChain> gen_chains(int connectors) {
    if (connectors < 0) throw ValidationError("connector budget must be >= 0");
    std::vector<TLChain> out;
    for (const auto& s : gen_shapes(connectors)) out.push_back(to_chain(*s, connectors));
    return out;
}

std::vector<std::vector<Quant>> gen_quantifier_prefixes(int q) {
    if (q < 1) throw ValidationError("quantifier count must be >= 1");
    std::vector<std::vector<Quant>> out;
    for (int universals = q; universals >= 0; --universals) {
        std::vector<Quant> prefix(q, Quant::Exists);
        std::fill(prefix.begin(), prefix.begin() + universals, Quant::Forall);
        out.push_back(std::move(prefix));
    }
    return out;
}

std::vector<std::vector<TypeId>> gen_type_tuples(const Domain& d, int q,
                                                 const std::vector<Quant>& prefix) {
    if (static_cast<int>(prefix.size()) != q)
        throw ValidationError("prefix length must equal q");
    std::vector<std::vector<TypeId>> out;
    std::vector<TypeId> current(q, 0);
    tuples_rec(d, prefix, q, 0, 0, current, out);
    return out;
}

}  // namespace ftlearn
