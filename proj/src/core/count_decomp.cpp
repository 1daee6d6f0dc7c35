#include "count_decomp.hpp"

#include <algorithm>
#include <map>

namespace dyncade {

CountExpr CountExpr::make_leaf(std::uint32_t id) {
    CountExpr e;
    e.kind = Kind::Leaf;
    e.leaf = id;
    return e;
}
CountExpr CountExpr::sum(std::vector<CountExpr> kids) {
    if (kids.size() == 1) return std::move(kids[0]);
    CountExpr e;
    e.kind = Kind::Sum;
    e.kids = std::move(kids);
    return e;
}
CountExpr CountExpr::product(CountExpr a, CountExpr b) {
    CountExpr e;
    e.kind = Kind::Product;
    e.kids.push_back(std::move(a));
    e.kids.push_back(std::move(b));
    return e;
}
CountExpr CountExpr::difference(CountExpr a, CountExpr b) {
    CountExpr e;
    e.kind = Kind::Difference;
    e.kids.push_back(std::move(a));
    e.kids.push_back(std::move(b));
    return e;
}

namespace {

struct PartRef {
    const Group* group;                    // formula + vars + radius
    std::vector<std::uint32_t> positions;  // clause position per variable
};

struct Comp {
    std::vector<std::uint32_t> positions;  // sorted clause positions
    std::vector<PartRef> parts;
};

using TauEdges = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

struct Builder {
    std::uint32_t r;
    std::uint32_t k;
    std::map<std::string, std::uint32_t> leaf_ids;
    std::vector<CenteredQuery> leaves;

    std::uint32_t make_leaf(const Comp& comp, const TauEdges& tau) {
        CenteredQuery q;
        q.arity = static_cast<std::uint32_t>(comp.positions.size());
        q.r = r;
        std::vector<int> where(k, -1);
        for (std::uint32_t i = 0; i < comp.positions.size(); ++i)
            where[comp.positions[i]] = static_cast<int>(i);
        q.tau.k = q.arity;
        for (auto [a, b] : tau)
            if (where[a] >= 0 && where[b] >= 0)
                q.tau.edges.emplace_back(static_cast<std::uint32_t>(where[a]),
                                         static_cast<std::uint32_t>(where[b]));
        q.tau.normalize();
        for (const PartRef& p : comp.parts) {
            CenteredQuery::Part part;
            part.formula = p.group->formula;
            part.vars = p.group->vars;
            part.declared_radius = p.group->declared_radius;
            for (std::uint32_t pos : p.positions)
                part.positions.push_back(static_cast<std::uint32_t>(where[pos]));
            q.parts.push_back(std::move(part));
        }
        std::string key = q.key();
        auto it = leaf_ids.find(key);
        if (it != leaf_ids.end()) return it->second;
        std::uint32_t id = static_cast<std::uint32_t>(leaves.size());
        leaves.push_back(std::move(q));
        leaf_ids.emplace(std::move(key), id);
        return id;
    }

    CountExpr rec(const std::vector<Comp>& comps, const TauEdges& tau) {
        if (comps.size() == 1) return CountExpr::make_leaf(make_leaf(comps[0], tau));

        std::vector<Comp> rest(comps.begin() + 1, comps.end());
        CountExpr e1 = CountExpr::make_leaf(make_leaf(comps[0], tau));
        CountExpr e2 = rec(rest, tau);

        // Every way the first component can sit 2r-close to some of the rest:
        // choose the touched components, then an exact nonempty set of close
        // pairs toward each. Distinct choices give disjoint exact types, so
        // their counts add up.
        std::vector<CountExpr> close_terms;
        std::size_t nrest = rest.size();
        for (std::uint32_t mask = 1; mask < (1u << nrest); ++mask) {
            std::vector<std::size_t> chosen;
            for (std::size_t i = 0; i < nrest; ++i)
                if (mask & (1u << i)) chosen.push_back(i);

            // Cross pairs per chosen component.
            std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> pair_space;
            for (std::size_t i : chosen) {
                std::vector<std::pair<std::uint32_t, std::uint32_t>> ps;
                for (std::uint32_t a : comps[0].positions)
                    for (std::uint32_t b : rest[i].positions) ps.emplace_back(a, b);
                pair_space.push_back(std::move(ps));
            }

            // Enumerate nonempty subsets of each pair set.
            std::vector<std::uint32_t> subset(chosen.size(), 1);
            while (true) {
                TauEdges extra;
                for (std::size_t ci = 0; ci < chosen.size(); ++ci)
                    for (std::size_t bit = 0; bit < pair_space[ci].size(); ++bit)
                        if (subset[ci] & (1u << bit)) extra.push_back(pair_space[ci][bit]);

                Comp merged;
                merged.positions = comps[0].positions;
                merged.parts = comps[0].parts;
                for (std::size_t i : chosen) {
                    merged.positions.insert(merged.positions.end(), rest[i].positions.begin(),
                                            rest[i].positions.end());
                    merged.parts.insert(merged.parts.end(), rest[i].parts.begin(),
                                        rest[i].parts.end());
                }
                std::sort(merged.positions.begin(), merged.positions.end());

                std::vector<Comp> next;
                next.push_back(std::move(merged));
                for (std::size_t i = 0; i < nrest; ++i)
                    if (!(mask & (1u << i))) next.push_back(rest[i]);

                TauEdges next_tau = tau;
                next_tau.insert(next_tau.end(), extra.begin(), extra.end());
                close_terms.push_back(rec(next, next_tau));

                // advance the per-component subset counters (each stays nonempty)
                std::size_t ci = 0;
                while (ci < chosen.size()) {
                    std::uint32_t limit = 1u << pair_space[ci].size();
                    if (++subset[ci] < limit) break;
                    subset[ci] = 1;
                    ++ci;
                }
                if (ci == chosen.size()) break;
            }
        }
        return CountExpr::difference(CountExpr::product(std::move(e1), std::move(e2)),
                                     CountExpr::sum(std::move(close_terms)));
    }
};

std::uint64_t factorial(std::uint32_t n) {
    std::uint64_t f = 1;
    for (std::uint32_t i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

Decomposition decompose(const Clause& clause) {
    if (clause.groups.empty())
        fail(ErrorCode::InvalidArgument, "cannot decompose a clause without groups");

    Builder b;
    b.r = clause.r;
    b.k = clause.tau.k;

    std::vector<Comp> comps;
    std::uint32_t pos = 0;
    for (const Group& g : clause.groups) {
        Comp c;
        c.parts.push_back(PartRef{&g, {}});
        for (std::size_t i = 0; i < g.vars.size(); ++i) {
            c.positions.push_back(pos);
            c.parts[0].positions.push_back(pos);
            ++pos;
        }
        comps.push_back(std::move(c));
    }

    Decomposition d;
    d.expr = b.rec(comps, clause.tau.edges);
    d.leaves = std::move(b.leaves);

    std::uint32_t k = clause.tau.k;
    std::uint32_t p = static_cast<std::uint32_t>(clause.groups.size());
    std::uint64_t guard = 1;
    for (std::uint32_t i = 0; i < k * p && guard < (1ull << 62); ++i) guard <<= 1;
    guard = guard < (1ull << 62) ? guard * factorial(k) : std::numeric_limits<std::uint64_t>::max();
    if (d.leaves.size() > guard)
        fail(ErrorCode::Internal, "decomposition leaf count exceeds the safety bound");
    return d;
}

long long evaluate(const CountExpr& expr, std::span<const long long> leaf_counts) {
    switch (expr.kind) {
        case CountExpr::Kind::Leaf:
            if (expr.leaf >= leaf_counts.size())
                fail(ErrorCode::MissingLeafCount, "no count for leaf " + std::to_string(expr.leaf));
            return leaf_counts[expr.leaf];
        case CountExpr::Kind::Sum: {
            long long total = 0;
            for (const auto& k : expr.kids) total += evaluate(k, leaf_counts);
            return total;
        }
        case CountExpr::Kind::Product:
            return evaluate(expr.kids[0], leaf_counts) * evaluate(expr.kids[1], leaf_counts);
        case CountExpr::Kind::Difference:
            return evaluate(expr.kids[0], leaf_counts) - evaluate(expr.kids[1], leaf_counts);
    }
    return 0;
}

long long evaluate(const Decomposition& d, std::span<const long long> leaf_counts) {
    if (leaf_counts.size() < d.leaves.size())
        fail(ErrorCode::MissingLeafCount, "leaf count vector too short");
    return evaluate(d.expr, leaf_counts);
}

}  // namespace dyncade
