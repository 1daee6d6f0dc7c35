#include "core/count_decomp.hpp"
#include "core/oracle.hpp"
#include "support/gen.hpp"

#include "doctest.h"

#include <functional>

using namespace dyncade;

namespace {

DynamicGraph path4() {
    DynamicGraph g(DegreePolicy::bounded(3));
    g.apply(UpdateOp::add_vertex(1, {"Red"}));
    g.apply(UpdateOp::add_vertex(2, {"Blue"}));
    g.apply(UpdateOp::add_vertex(3, {}));
    g.apply(UpdateOp::add_vertex(4, {"Red"}));
    g.apply(UpdateOp::add_edge(1, 2));
    g.apply(UpdateOp::add_edge(2, 3));
    g.apply(UpdateOp::add_edge(3, 4));
    return g;
}

// Brute-force count of one centered query over all tuples.
long long scan_count(const DynamicGraph& g, const CenteredQuery& q) {
    long long total = 0;
    auto ids = g.vertex_ids_sorted();
    Tuple t(q.arity);
    std::function<void(std::uint32_t)> rec = [&](std::uint32_t i) {
        if (i == q.arity) {
            if (satisfies_centered(g, q, t)) ++total;
            return;
        }
        for (VertexId v : ids) {
            t[i] = v;
            rec(i + 1);
        }
    };
    rec(0);
    return total;
}

long long evaluate_on(const DynamicGraph& g, const Decomposition& d) {
    std::vector<long long> counts;
    counts.reserve(d.leaves.size());
    for (const CenteredQuery& leaf : d.leaves) counts.push_back(scan_count(g, leaf));
    return evaluate(d, counts);
}

// Oracle count for a clause: exhaustive filter over all |V|^k tuples.
long long clause_count(const DynamicGraph& g, const Clause& cl) {
    Query q;
    for (const Group& grp : cl.groups)
        for (const auto& v : grp.vars) q.vars.push_back(v);
    Case cs;
    cs.is_else = true;
    cs.clauses.push_back(cl);
    q.cases.push_back(std::move(cs));
    return oracle_count(g, validate(q));
}

Clause two_reds_far() {
    Query q = parse_query(
        "(query (vars x y) "
        "(case else (clause 1 (group (x) (color Red x)) (group (y) (color Red y)) (tau))))");
    return q.cases[0].clauses[0];
}

}  // namespace

TEST_CASE("single-group clause decomposes to itself") {
    Query q = parse_query("(query (vars x) (case else (clause 1 (group (x) (color Red x)) (tau))))");
    validate(q);
    Decomposition d = decompose(q.cases[0].clauses[0]);
    CHECK(d.leaves.size() == 1);
    CHECK(d.expr.kind == CountExpr::Kind::Leaf);
}

TEST_CASE("two-group decomposition has the product-minus-close shape") {
    Clause cl = two_reds_far();
    Decomposition d = decompose(cl);

    REQUIRE(d.expr.kind == CountExpr::Kind::Difference);
    CHECK(d.expr.kids[0].kind == CountExpr::Kind::Product);
    CHECK(d.expr.kids[0].kids[0].kind == CountExpr::Kind::Leaf);
    CHECK(d.expr.kids[0].kids[1].kind == CountExpr::Kind::Leaf);
    CHECK(d.expr.kids[1].kind == CountExpr::Kind::Leaf);  // single close pattern

    // the close leaf is the merged pair at distance <= 2r
    const CenteredQuery& merged = d.leaves[d.expr.kids[1].leaf];
    CHECK(merged.arity == 2);
    CHECK(merged.tau.edges == std::vector<std::pair<std::uint32_t, std::uint32_t>>{{0, 1}});
    CHECK(merged.parts.size() == 2);

    // the two unary leaves dedup to one source
    CHECK(d.expr.kids[0].kids[0].leaf == d.expr.kids[0].kids[1].leaf);
    CHECK(d.leaves.size() == 2);

    DynamicGraph g = path4();
    std::vector<long long> counts;
    for (const CenteredQuery& leaf : d.leaves) counts.push_back(scan_count(g, leaf));
    CHECK(evaluate(d, counts) == 2);  // 2*2 - #{(1,1),(4,4)} = 2
    CHECK(evaluate_on(g, d) == clause_count(g, cl));
}

TEST_CASE("evaluate with zero counts") {
    Clause cl = two_reds_far();
    Decomposition d = decompose(cl);
    std::vector<long long> zero(d.leaves.size(), 0);
    CHECK(evaluate(d, zero) == 0);

    DynamicGraph empty(DegreePolicy::bounded(3));
    CHECK(evaluate_on(empty, d) == 0);

    CHECK_THROWS_AS(evaluate(d, std::vector<long long>{}), EngineError);
}

TEST_CASE("every leaf keeps a connected distance type") {
    testgen::Rng rng(2023);
    for (int iter = 0; iter < 60; ++iter) {
        testgen::QuerySpec spec;
        spec.max_arity = 3;
        spec.force_sentence = false;
        spec.sentences = 0;
        Query q = testgen::random_query(rng, spec);
        try {
            validate(q);
        } catch (const EngineError&) {
            continue;
        }
        for (const Case& cs : q.cases)
            for (const Clause& cl : cs.clauses) {
                if (cl.groups.empty()) continue;
                Decomposition d = decompose(cl);
                std::uint32_t k = cl.tau.k;
                std::uint32_t p = static_cast<std::uint32_t>(cl.groups.size());
                std::uint64_t guard = 1;
                for (std::uint32_t i = 0; i < k * p; ++i) guard <<= 1;
                for (std::uint32_t i = 2; i <= k; ++i) guard *= i;
                CHECK(d.leaves.size() <= guard);
                for (const CenteredQuery& leaf : d.leaves) {
                    auto comps = leaf.tau.components();
                    CHECK(comps.size() == 1);
                }
            }
    }
}

TEST_CASE("three singleton groups match the oracle count") {
    testgen::Rng rng(31);
    Query q = parse_query(
        "(query (vars x y z) (case else "
        "(clause 1 (group (x) (= x x)) (group (y) (= y y)) (group (z) (= z z)) (tau))))");
    validate(q);
    const Clause& cl = q.cases[0].clauses[0];
    Decomposition d = decompose(cl);
    CHECK(d.leaves.size() <= (1u << 9) * 6);

    for (int iter = 0; iter < 6; ++iter) {
        DynamicGraph g = testgen::random_graph(rng, 10, DegreePolicy::bounded(3));
        CHECK(evaluate_on(g, d) == clause_count(g, cl));
    }
}

TEST_CASE("random multi-group clauses match the oracle count") {
    testgen::Rng rng(13);
    int checked = 0;
    for (int iter = 0; iter < 60; ++iter) {
        testgen::QuerySpec spec;
        spec.max_arity = 3;
        spec.force_sentence = false;
        spec.sentences = 0;
        spec.max_r = iter % 2 ? 1 : 2;
        Query q = testgen::random_query(rng, spec);
        try {
            validate(q);
        } catch (const EngineError&) {
            continue;
        }
        DynamicGraph g = testgen::random_graph(rng, testgen::pick(rng, 4, 16),
                                               DegreePolicy::bounded(3));
        for (const Case& cs : q.cases)
            for (const Clause& cl : cs.clauses) {
                if (cl.groups.size() < 2) continue;
                Decomposition d = decompose(cl);
                CHECK(evaluate_on(g, d) == clause_count(g, cl));
                ++checked;
            }
    }
    CHECK(checked >= 20);
}
