#pragma once

#include "centered.hpp"
#include "query.hpp"

#include <span>

namespace dyncade {

// Arithmetic tree over centered-query counts.
struct CountExpr {
    enum class Kind { Sum, Product, Difference, Leaf };
    Kind kind = Kind::Leaf;
    std::vector<CountExpr> kids;  // Sum: n-ary; Product/Difference: binary
    std::uint32_t leaf = 0;       // index into Decomposition::leaves

    static CountExpr make_leaf(std::uint32_t id);
    static CountExpr sum(std::vector<CountExpr> kids);
    static CountExpr product(CountExpr a, CountExpr b);
    static CountExpr difference(CountExpr a, CountExpr b);
};

// Rewrites a multi-group clause count as an arithmetic combination of
// single-group (centered) counts: split off the first group, then subtract
// the "close" joins, expanded over all exact cross-connection patterns so the
// subtracted disjuncts stay pairwise disjoint. Structurally identical leaves
// are unified.
struct Decomposition {
    std::vector<CenteredQuery> leaves;
    CountExpr expr;
};

Decomposition decompose(const Clause& clause);

long long evaluate(const CountExpr& expr, std::span<const long long> leaf_counts);
long long evaluate(const Decomposition& d, std::span<const long long> leaf_counts);

}  // namespace dyncade
