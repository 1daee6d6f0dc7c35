// extern-C shared-library surface over the C++ core.

#include "dyncade.h"

#include "core/engine.hpp"
#include "core/oracle.hpp"
#include "core/text_io.hpp"

#include <cstring>
#include <new>
#include <string>

using namespace dyncade;

namespace {

thread_local std::string g_last_error;
thread_local int g_last_line = 0;
thread_local int g_last_col = 0;

dyncade_status map_code(ErrorCode c) {
    switch (c) {
        case ErrorCode::Ok: return DYNCADE_OK;
        case ErrorCode::MissingVertex: return DYNCADE_ERR_MISSING_VERTEX;
        case ErrorCode::DuplicateVertex: return DYNCADE_ERR_DUPLICATE_VERTEX;
        case ErrorCode::DuplicateEdge: return DYNCADE_ERR_DUPLICATE_EDGE;
        case ErrorCode::MissingEdge: return DYNCADE_ERR_MISSING_EDGE;
        case ErrorCode::SelfLoop: return DYNCADE_ERR_SELF_LOOP;
        case ErrorCode::DegreeExceeded: return DYNCADE_ERR_DEGREE_EXCEEDED;
        case ErrorCode::SyntaxError: return DYNCADE_ERR_SYNTAX;
        case ErrorCode::UnboundVariable: return DYNCADE_ERR_UNBOUND_VARIABLE;
        case ErrorCode::DuplicateName: return DYNCADE_ERR_DUPLICATE_NAME;
        case ErrorCode::ComponentMismatch: return DYNCADE_ERR_COMPONENT_MISMATCH;
        case ErrorCode::RadiusExceeded: return DYNCADE_ERR_RADIUS_EXCEEDED;
        case ErrorCode::TauClash: return DYNCADE_ERR_TAU_CLASH;
        case ErrorCode::NonContiguousGroups: return DYNCADE_ERR_NONCONTIGUOUS_GROUPS;
        case ErrorCode::MixedClauseRadii: return DYNCADE_ERR_MIXED_CLAUSE_RADII;
        case ErrorCode::ArityMismatch: return DYNCADE_ERR_ARITY_MISMATCH;
        case ErrorCode::StaleCursor: return DYNCADE_ERR_STALE_CURSOR;
        case ErrorCode::RadiusTooLarge: return DYNCADE_ERR_RADIUS_TOO_LARGE;
        case ErrorCode::TupleNotInList: return DYNCADE_ERR_TUPLE_NOT_IN_LIST;
        case ErrorCode::DuplicateTuple: return DYNCADE_ERR_DUPLICATE_TUPLE;
        case ErrorCode::MissingLeafCount: return DYNCADE_ERR_MISSING_LEAF_COUNT;
        case ErrorCode::InvalidArgument: return DYNCADE_ERR_INVALID_ARGUMENT;
        case ErrorCode::Io: return DYNCADE_ERR_IO;
        case ErrorCode::Internal: return DYNCADE_ERR_INTERNAL;
    }
    return DYNCADE_ERR_INTERNAL;
}

template <class F>
dyncade_status guarded(F&& fn) {
    try {
        g_last_error.clear();
        g_last_line = g_last_col = 0;
        fn();
        return DYNCADE_OK;
    } catch (const EngineError& e) {
        g_last_error = e.what();
        g_last_line = e.line();
        g_last_col = e.col();
        return map_code(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return DYNCADE_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return DYNCADE_ERR_INTERNAL;
    }
}

ColorSet parse_csv_colors(const char* csv) {
    std::vector<std::string> names;
    if (csv && *csv) {
        std::string s(csv);
        std::size_t i = 0;
        while (i <= s.size()) {
            std::size_t j = s.find(',', i);
            if (j == std::string::npos) j = s.size();
            if (j > i) names.push_back(s.substr(i, j - i));
            if (j == s.size()) break;
            i = j + 1;
        }
    }
    return make_color_set(std::move(names));
}

}  // namespace

struct dyncade_graph {
    DynamicGraph g;
};
struct dyncade_query {
    NormalizedQuery q;
};
struct dyncade_engine {
    Engine e;
    // Borrowed view handle returned by dyncade_engine_graph.
    mutable dyncade_graph view;
};
struct dyncade_cursor {
    Cursor c;
};

extern "C" {

const char* dyncade_last_error(void) { return g_last_error.c_str(); }
int dyncade_last_error_line(void) { return g_last_line; }
int dyncade_last_error_col(void) { return g_last_col; }

const char* dyncade_status_name(dyncade_status s) {
    switch (s) {
        case DYNCADE_OK: return "ok";
        case DYNCADE_ERR_MISSING_VERTEX: return "missing-vertex";
        case DYNCADE_ERR_DUPLICATE_VERTEX: return "duplicate-vertex";
        case DYNCADE_ERR_DUPLICATE_EDGE: return "duplicate-edge";
        case DYNCADE_ERR_MISSING_EDGE: return "missing-edge";
        case DYNCADE_ERR_SELF_LOOP: return "self-loop";
        case DYNCADE_ERR_DEGREE_EXCEEDED: return "degree-exceeded";
        case DYNCADE_ERR_SYNTAX: return "syntax-error";
        case DYNCADE_ERR_UNBOUND_VARIABLE: return "unbound-variable";
        case DYNCADE_ERR_DUPLICATE_NAME: return "duplicate-name";
        case DYNCADE_ERR_COMPONENT_MISMATCH: return "component-mismatch";
        case DYNCADE_ERR_RADIUS_EXCEEDED: return "radius-exceeded";
        case DYNCADE_ERR_TAU_CLASH: return "tau-clash";
        case DYNCADE_ERR_NONCONTIGUOUS_GROUPS: return "noncontiguous-groups";
        case DYNCADE_ERR_MIXED_CLAUSE_RADII: return "mixed-clause-radii";
        case DYNCADE_ERR_ARITY_MISMATCH: return "arity-mismatch";
        case DYNCADE_ERR_STALE_CURSOR: return "stale-cursor";
        case DYNCADE_ERR_RADIUS_TOO_LARGE: return "radius-too-large";
        case DYNCADE_ERR_TUPLE_NOT_IN_LIST: return "tuple-not-in-list";
        case DYNCADE_ERR_DUPLICATE_TUPLE: return "duplicate-tuple";
        case DYNCADE_ERR_MISSING_LEAF_COUNT: return "missing-leaf-count";
        case DYNCADE_ERR_INVALID_ARGUMENT: return "invalid-argument";
        case DYNCADE_ERR_IO: return "io-error";
        case DYNCADE_ERR_INTERNAL: return "internal-error";
    }
    return "unknown";
}

dyncade_status dyncade_graph_new_bounded(uint32_t degree_cap, dyncade_graph** out) {
    return guarded([&] { *out = new dyncade_graph{DynamicGraph(DegreePolicy::bounded(degree_cap))}; });
}

dyncade_status dyncade_graph_new_low_degree(double C, double eps, dyncade_graph** out) {
    return guarded(
        [&] { *out = new dyncade_graph{DynamicGraph(DegreePolicy::low_degree(C, eps))}; });
}

dyncade_status dyncade_graph_parse(const char* text, uint32_t degree_cap, dyncade_graph** out) {
    return guarded([&] {
        *out = new dyncade_graph{parse_graph_text(text ? text : "", DegreePolicy::bounded(degree_cap))};
    });
}

dyncade_status dyncade_graph_parse_low_degree(const char* text, double C, double eps,
                                              dyncade_graph** out) {
    return guarded([&] {
        *out = new dyncade_graph{parse_graph_text(text ? text : "", DegreePolicy::low_degree(C, eps))};
    });
}

void dyncade_graph_free(dyncade_graph* g) { delete g; }

dyncade_status dyncade_graph_add_vertex(dyncade_graph* g, uint32_t id, const char* colors_csv) {
    return guarded([&] { g->g.apply(UpdateOp::add_vertex(id, parse_csv_colors(colors_csv))); });
}
dyncade_status dyncade_graph_remove_vertex(dyncade_graph* g, uint32_t id) {
    return guarded([&] {
        if (g->g.has_vertex(id) && g->g.degree(id) > 0) {
            auto nbrs = g->g.neighbors(id);
            std::vector<VertexId> copy(nbrs.begin(), nbrs.end());
            g->g.validate_op(UpdateOp::remove_vertex(id));
            for (VertexId w : copy) g->g.apply(UpdateOp::remove_edge(id, w));
        }
        g->g.apply(UpdateOp::remove_vertex(id));
    });
}
dyncade_status dyncade_graph_add_edge(dyncade_graph* g, uint32_t u, uint32_t v) {
    return guarded([&] { g->g.apply(UpdateOp::add_edge(u, v)); });
}
dyncade_status dyncade_graph_remove_edge(dyncade_graph* g, uint32_t u, uint32_t v) {
    return guarded([&] { g->g.apply(UpdateOp::remove_edge(u, v)); });
}
dyncade_status dyncade_graph_relabel(dyncade_graph* g, uint32_t id, const char* colors_csv) {
    return guarded([&] { g->g.apply(UpdateOp::relabel(id, parse_csv_colors(colors_csv))); });
}
dyncade_status dyncade_graph_apply_line(dyncade_graph* g, const char* line) {
    return guarded([&] {
        UpdateOp op = parse_update_line(line ? line : "");
        if (op.kind == UpdateOp::Kind::RemoveVertex && g->g.has_vertex(op.a) && g->g.degree(op.a) > 0) {
            g->g.validate_op(op);
            auto nbrs = g->g.neighbors(op.a);
            std::vector<VertexId> copy(nbrs.begin(), nbrs.end());
            for (VertexId w : copy) g->g.apply(UpdateOp::remove_edge(op.a, w));
        }
        g->g.apply(op);
    });
}

dyncade_status dyncade_graph_vertex_count(const dyncade_graph* g, uint64_t* out) {
    return guarded([&] { *out = g->g.vertex_count(); });
}
dyncade_status dyncade_graph_edge_count(const dyncade_graph* g, uint64_t* out) {
    return guarded([&] { *out = g->g.edge_count(); });
}
dyncade_status dyncade_graph_max_degree(const dyncade_graph* g, uint32_t* out) {
    return guarded([&] { *out = g->g.max_degree(); });
}

dyncade_status dyncade_query_parse(const char* text, dyncade_query** out) {
    return guarded([&] { *out = new dyncade_query{validate(parse_query(text ? text : ""))}; });
}
void dyncade_query_free(dyncade_query* q) { delete q; }

dyncade_status dyncade_query_arity(const dyncade_query* q, uint32_t* out) {
    return guarded([&] { *out = q->q.arity; });
}
dyncade_status dyncade_query_sentence_count(const dyncade_query* q, uint32_t* out) {
    return guarded([&] { *out = static_cast<uint32_t>(q->q.query.sentences.size()); });
}
dyncade_status dyncade_query_sentence_name(const dyncade_query* q, uint32_t index,
                                           const char** out) {
    return guarded([&] {
        if (index >= q->q.query.sentences.size())
            fail(ErrorCode::InvalidArgument, "sentence index out of range");
        *out = q->q.query.sentences[index].name.c_str();
    });
}
dyncade_status dyncade_query_color_count(const dyncade_query* q, uint32_t* out) {
    return guarded([&] { *out = static_cast<uint32_t>(q->q.color_names.size()); });
}
dyncade_status dyncade_query_color_name(const dyncade_query* q, uint32_t index, const char** out) {
    return guarded([&] {
        if (index >= q->q.color_names.size())
            fail(ErrorCode::InvalidArgument, "color index out of range");
        *out = q->q.color_names[index].c_str();
    });
}

dyncade_status dyncade_engine_new(const dyncade_graph* g, const dyncade_query* q, dyncade_mode mode,
                                  dyncade_engine** out) {
    return guarded([&] {
        EngineMode m = mode == DYNCADE_MODE_BOUNDED_DEGREE ? EngineMode::BoundedDegree
                                                           : EngineMode::LowDegree;
        *out = new dyncade_engine{Engine(g->g, q->q, m), dyncade_graph{DynamicGraph(g->g.policy())}};
    });
}
void dyncade_engine_free(dyncade_engine* e) { delete e; }

dyncade_status dyncade_engine_apply(dyncade_engine* e, const char* update_line) {
    return guarded([&] { e->e.update(parse_update_line(update_line ? update_line : "")); });
}
dyncade_status dyncade_engine_add_vertex(dyncade_engine* e, uint32_t id, const char* colors_csv) {
    return guarded([&] { e->e.update(UpdateOp::add_vertex(id, parse_csv_colors(colors_csv))); });
}
dyncade_status dyncade_engine_remove_vertex(dyncade_engine* e, uint32_t id) {
    return guarded([&] { e->e.update(UpdateOp::remove_vertex(id)); });
}
dyncade_status dyncade_engine_add_edge(dyncade_engine* e, uint32_t u, uint32_t v) {
    return guarded([&] { e->e.update(UpdateOp::add_edge(u, v)); });
}
dyncade_status dyncade_engine_remove_edge(dyncade_engine* e, uint32_t u, uint32_t v) {
    return guarded([&] { e->e.update(UpdateOp::remove_edge(u, v)); });
}
dyncade_status dyncade_engine_relabel(dyncade_engine* e, uint32_t id, const char* colors_csv) {
    return guarded([&] { e->e.update(UpdateOp::relabel(id, parse_csv_colors(colors_csv))); });
}

dyncade_status dyncade_engine_version(const dyncade_engine* e, uint64_t* out) {
    return guarded([&] { *out = e->e.version(); });
}

dyncade_status dyncade_engine_graph(const dyncade_engine* e, const dyncade_graph** out) {
    return guarded([&] {
        e->view.g = e->e.graph();
        *out = &e->view;
    });
}

dyncade_status dyncade_engine_check(const dyncade_engine* e, int* out) {
    return guarded([&] { *out = e->e.check() ? 1 : 0; });
}
dyncade_status dyncade_engine_check_sentence(const dyncade_engine* e, const char* name, int* out) {
    return guarded([&] { *out = e->e.check_sentence(name ? name : "") ? 1 : 0; });
}
dyncade_status dyncade_engine_count(const dyncade_engine* e, int64_t* out) {
    return guarded([&] { *out = e->e.count(); });
}
dyncade_status dyncade_engine_test(const dyncade_engine* e, const uint32_t* tuple, uint32_t arity,
                                   int* out) {
    return guarded([&] {
        std::span<const VertexId> t(tuple, arity);
        *out = e->e.test(t) ? 1 : 0;
    });
}

dyncade_status dyncade_cursor_open(const dyncade_engine* e, dyncade_cursor** out) {
    return guarded([&] { *out = new dyncade_cursor{e->e.open_cursor()}; });
}
dyncade_status dyncade_cursor_next(dyncade_cursor* c, uint32_t* buf, int* done) {
    return guarded([&] {
        auto t = c->c.next();
        if (!t) {
            *done = 1;
            return;
        }
        *done = 0;
        for (std::size_t i = 0; i < t->size(); ++i) buf[i] = (*t)[i];
    });
}
void dyncade_cursor_free(dyncade_cursor* c) { delete c; }

dyncade_status dyncade_oracle_count(const dyncade_graph* g, const dyncade_query* q, int64_t* out) {
    return guarded([&] { *out = oracle_count(g->g, q->q); });
}
dyncade_status dyncade_oracle_check_sentence(const dyncade_graph* g, const dyncade_query* q,
                                             const char* name, int* out) {
    return guarded([&] { *out = oracle_check_sentence(g->g, q->q, name ? name : "") ? 1 : 0; });
}
dyncade_status dyncade_oracle_answers(const dyncade_graph* g, const dyncade_query* q,
                                      uint32_t** out, uint64_t* n_tuples) {
    return guarded([&] {
        auto answers = oracle_answers(g->g, q->q);
        uint32_t arity = q->q.arity;
        uint32_t* flat =
            static_cast<uint32_t*>(::operator new[](sizeof(uint32_t) * answers.size() * std::max<uint32_t>(arity, 1)));
        std::size_t at = 0;
        for (const Tuple& t : answers)
            for (VertexId v : t) flat[at++] = v;
        *out = flat;
        *n_tuples = answers.size();
    });
}
void dyncade_tuples_free(uint32_t* tuples) { ::operator delete[](tuples); }

}  // extern "C"
