#include "core/engine.hpp"
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

NormalizedQuery far_red_pairs() {
    return validate(parse_query(
        "(query (vars x y) (sentence spread 2 1 (color Red z)) "
        "(case spread (clause 1 (group (x) (color Red x)) (group (y) (color Red y)) (tau))) "
        "(case else))"));
}

std::vector<Tuple> drain(const Engine& e) {
    std::vector<Tuple> out;
    Cursor c = e.open_cursor();
    while (auto t = c.next()) out.push_back(*t);
    return out;
}

// Full agreement of one engine against the oracle.
void check_against_oracle(const Engine& e, const NormalizedQuery& q) {
    OracleResult expect = oracle_evaluate(e.graph(), q);
    for (std::size_t i = 0; i < q.query.sentences.size(); ++i) {
        CHECK(e.check_sentence(q.query.sentences[i].name) == expect.sentence_truth[i]);
    }
    CHECK(e.active_case() == expect.active_case);
    CHECK(e.count() == static_cast<long long>(expect.answers.size()));
    auto stream = drain(e);
    CHECK(stream == expect.answers);
    // test() over every tuple
    std::uint32_t k = q.arity;
    auto ids = e.graph().vertex_ids_sorted();
    if (k > 0 && !ids.empty()) {
        std::unordered_set<Tuple, TupleHash> answer_set(expect.answers.begin(),
                                                        expect.answers.end());
        Tuple t(k);
        std::function<void(std::uint32_t)> rec = [&](std::uint32_t i) {
            if (i == k) {
                CHECK(e.test(t) == (answer_set.count(t) != 0));
                return;
            }
            for (VertexId v : ids) {
                t[i] = v;
                rec(i + 1);
            }
        };
        rec(0);
    }
}

}  // namespace

TEST_CASE("preprocess on the running example") {
    DynamicGraph g = path4();
    NormalizedQuery q = far_red_pairs();

    for (EngineMode mode : {EngineMode::LowDegree, EngineMode::BoundedDegree}) {
        Engine e(g, q, mode);
        CHECK(e.count() == 2);
        CHECK(e.check_sentence("spread"));
        CHECK(e.active_case() == 0);
        CHECK(drain(e) == std::vector<Tuple>{{1, 4}, {4, 1}});
        CHECK(e.test(std::vector<VertexId>{1, 4}));
        CHECK_FALSE(e.test(std::vector<VertexId>{1, 2}));
        CHECK_THROWS_AS(e.test(std::vector<VertexId>{1}), EngineError);
        CHECK_THROWS_AS((void)e.test(std::vector<VertexId>{1, 99}), EngineError);
    }
}

TEST_CASE("empty graph") {
    DynamicGraph g(DegreePolicy::bounded(3));
    NormalizedQuery q = far_red_pairs();
    for (EngineMode mode : {EngineMode::LowDegree, EngineMode::BoundedDegree}) {
        Engine e(g, q, mode);
        CHECK(e.count() == 0);
        CHECK_FALSE(e.check_sentence("spread"));
        CHECK(e.active_case() == 1);
        CHECK(drain(e).empty());
    }
}

TEST_CASE("bounded engine requires a bounded policy") {
    DynamicGraph g(DegreePolicy::low_degree(2.0, 0.3));
    NormalizedQuery q = far_red_pairs();
    CHECK_THROWS_AS(Engine(g, q, EngineMode::BoundedDegree), EngineError);
    Engine ok(g, q, EngineMode::LowDegree);
    CHECK(ok.count() == 0);
}

TEST_CASE("update walk-through") {
    NormalizedQuery q = far_red_pairs();
    for (EngineMode mode : {EngineMode::LowDegree, EngineMode::BoundedDegree}) {
        Engine e(path4(), q, mode);
        e.update(UpdateOp::relabel(2, {"Red", "Blue"}));
        CHECK(e.count() == 2);  // 3*3 - 7 close pairs
        CHECK(drain(e) == std::vector<Tuple>{{1, 4}, {4, 1}});
        check_against_oracle(e, q);

        // rejected updates change nothing, including the version
        std::uint64_t version = e.version();
        CHECK_THROWS_AS(e.update(UpdateOp::add_edge(1, 1)), EngineError);
        CHECK(e.version() == version);
        CHECK(e.count() == 2);

        e.update(UpdateOp::remove_edge(3, 4));
        e.update(UpdateOp::remove_vertex(4));
        CHECK(e.count() == 0);
        CHECK(drain(e).empty());
        check_against_oracle(e, q);
    }
}

TEST_CASE("composite vertex removal through the engine") {
    NormalizedQuery q = far_red_pairs();
    for (EngineMode mode : {EngineMode::LowDegree, EngineMode::BoundedDegree}) {
        Engine e(path4(), q, mode);
        e.update(UpdateOp::remove_vertex(2));  // non-isolated: expands internally
        CHECK(e.graph().vertex_count() == 3);
        check_against_oracle(e, q);
    }
}

TEST_CASE("boolean query answers") {
    NormalizedQuery q = validate(parse_query(
        "(query (vars) (sentence spread 2 1 (color Red z)) "
        "(case spread (clause 1 (tau))) (case else))"));
    for (EngineMode mode : {EngineMode::LowDegree, EngineMode::BoundedDegree}) {
        Engine e(path4(), q, mode);
        CHECK(e.check());
        CHECK(e.count() == 1);
        CHECK(drain(e) == std::vector<Tuple>{{}});
        e.update(UpdateOp::relabel(4, {}));  // only one Red remains
        CHECK_FALSE(e.check());
        CHECK(e.count() == 0);
        CHECK(drain(e).empty());
    }
}

TEST_CASE("stale cursors fail") {
    NormalizedQuery q = far_red_pairs();
    Engine e(path4(), q, EngineMode::LowDegree);
    Cursor c = e.open_cursor();
    CHECK(c.next().has_value());
    e.update(UpdateOp::relabel(3, {"Green"}));
    CHECK_THROWS_AS(c.next(), EngineError);
    try {
        Cursor c2 = e.open_cursor();
        e.update(UpdateOp::relabel(3, {}));
        c2.next();
    } catch (const EngineError& err) {
        CHECK(err.code() == ErrorCode::StaleCursor);
    }
}

TEST_CASE("pigeonhole shortcut never disagrees with the slow path") {
    testgen::Rng rng(60);
    int forced = 0;
    for (int iter = 0; iter < 30; ++iter) {
        std::uint32_t n = testgen::pick(rng, 20, 40);
        DynamicGraph g = testgen::random_graph(rng, n, DegreePolicy::bounded(2), 0.8);
        // color most vertices Red to push the count over the threshold
        for (VertexId v : g.vertex_ids_sorted())
            if (testgen::chance(rng, 0.9)) g.apply(UpdateOp::relabel(v, {"Red"}));
        NormalizedQuery q = validate(parse_query(
            "(query (vars) (sentence spread 2 1 (color Red z)) "
            "(case spread (clause 1 (tau))) (case else))"));
        for (EngineMode mode : {EngineMode::LowDegree, EngineMode::BoundedDegree}) {
            Engine e(g, q, mode);
            long long reds = 0;
            for (VertexId v : g.vertex_ids_sorted())
                if (g.has_color(v, "Red")) ++reds;
            std::uint64_t threshold =
                2 * ball_size_bound(mode == EngineMode::BoundedDegree ? 2 : g.max_degree(), 2);
            if (static_cast<std::uint64_t>(reds) > threshold) {
                ++forced;
                CHECK(e.check_sentence("spread"));
                CHECK(e.check_sentence_bruteforce("spread"));
            }
            CHECK(e.check_sentence("spread") == e.check_sentence_bruteforce("spread"));
        }
    }
    CHECK(forced >= 10);
}

TEST_CASE("master agreement on random instances, both modes") {
    testgen::Rng rng(777);
    int instances = 0;
    for (int iter = 0; iter < 16; ++iter) {
        testgen::QuerySpec spec;
        spec.max_arity = 1 + iter % 3;
        spec.max_r = spec.max_arity == 3 ? 1 : 2;
        Query raw = testgen::random_query(rng, spec);
        NormalizedQuery q;
        try {
            q = validate(raw);
        } catch (const EngineError&) {
            continue;
        }
        std::uint32_t n = spec.max_arity == 3 ? 10 : testgen::pick(rng, 5, 16);
        DynamicGraph g = testgen::random_graph(rng, n, DegreePolicy::bounded(3));

        Engine low(g, q, EngineMode::LowDegree);
        Engine bounded(g, q, EngineMode::BoundedDegree);
        check_against_oracle(low, q);
        check_against_oracle(bounded, q);

        DynamicGraph mirror = g;
        for (int step = 0; step < 12; ++step) {
            UpdateOp op = testgen::random_update(rng, mirror);
            low.update(op);
            bounded.update(op);
            check_against_oracle(low, q);
            check_against_oracle(bounded, q);
        }
        ++instances;
    }
    CHECK(instances >= 10);
}
