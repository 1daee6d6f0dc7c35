#include "type_catalog.hpp"

#include <algorithm>

namespace dyncade {

namespace {

// Sorted-row helpers for the pair-distance table.
using Row = std::vector<std::pair<VertexId, std::uint32_t>>;

Row::const_iterator row_find(const Row& row, VertexId v) {
    auto it = std::lower_bound(row.begin(), row.end(), v,
                               [](const auto& e, VertexId x) { return e.first < x; });
    return (it != row.end() && it->first == v) ? it : row.end();
}

void row_set(Row& row, VertexId v, std::uint32_t d) {
    auto it = std::lower_bound(row.begin(), row.end(), v,
                               [](const auto& e, VertexId x) { return e.first < x; });
    if (it != row.end() && it->first == v) {
        it->second = d;
    } else {
        row.insert(it, {v, d});
    }
}

void row_erase(Row& row, VertexId v) {
    auto it = std::lower_bound(row.begin(), row.end(), v,
                               [](const auto& e, VertexId x) { return e.first < x; });
    if (it != row.end() && it->first == v) row.erase(it);
}

}  // namespace

std::vector<std::pair<VertexId, std::uint32_t>> TypeCatalog::bfs_row(const DynamicGraph& g,
                                                                     VertexId v) const {
    Row row;
    std::unordered_map<VertexId, std::uint32_t> dist;
    dist.emplace(v, 0);
    std::vector<VertexId> frontier{v};
    std::uint32_t depth = 0;
    while (!frontier.empty() && depth < delta_radius_) {
        ++depth;
        std::vector<VertexId> next;
        for (VertexId u : frontier)
            for (VertexId w : g.neighbors(u))
                if (dist.emplace(w, depth).second) next.push_back(w);
        frontier = std::move(next);
    }
    row.assign(dist.begin(), dist.end());
    std::sort(row.begin(), row.end());
    return row;
}

void TypeCatalog::assign(const DynamicGraph& g, VertexId v) {
    PointedBall ball = g.ball(v, rho_);
    CanonResult canon = canonize(ball);
    auto it = realized_.find(canon.key);
    if (it == realized_.end()) {
        auto entry = std::make_unique<TypeEntry>();
        entry->key = canon.key;
        entry->graph = std::move(canon.type);
        it = realized_.emplace(canon.key, std::move(entry)).first;
    }
    VertexState st;
    st.type = it->second.get();
    st.f_inv.resize(ball.size());
    for (std::uint32_t local = 0; local < ball.size(); ++local)
        st.f_inv[local] = ball.members[canon.order[local]];
    st.type->members.insert(v);
    by_vertex_[v] = std::move(st);
}

void TypeCatalog::build(const DynamicGraph& g) {
    realized_.clear();
    by_vertex_.clear();
    delta_.clear();
    for (VertexId v : g.vertex_ids_sorted()) {
        assign(g, v);
        delta_[v] = bfs_row(g, v);
    }
}

std::vector<TypeCatalog::Move> TypeCatalog::refresh(const DynamicGraph& g,
                                                    std::span<const VertexId> rho_impacted,
                                                    std::span<const VertexId> delta_impacted) {
    std::vector<Move> moves;
    for (VertexId v : rho_impacted) {
        Move mv;
        mv.v = v;
        TypeEntry* old_entry = nullptr;
        auto old = by_vertex_.find(v);
        if (old != by_vertex_.end()) {
            old_entry = old->second.type;
            mv.old_type = old_entry;
            mv.old_embedding = old->second.f_inv;
        }
        if (g.has_vertex(v)) {
            assign(g, v);
            mv.new_type = by_vertex_[v].type;
            if (old_entry && old_entry != mv.new_type) {
                // assign() inserted into the new member list; drop the old one.
                old_entry->members.erase(v);
            } else if (old_entry == mv.new_type && mv.old_embedding == by_vertex_[v].f_inv) {
                continue;  // nothing changed for this vertex
            }
        } else {
            if (!old_entry) continue;
            old_entry->members.erase(v);
            by_vertex_.erase(v);
        }
        moves.push_back(std::move(mv));
    }

    for (VertexId v : delta_impacted) {
        auto it = delta_.find(v);
        if (it != delta_.end()) {
            for (const auto& [u, d] : it->second)
                if (u != v) {
                    auto other = delta_.find(u);
                    if (other != delta_.end()) row_erase(other->second, v);
                }
        }
        if (g.has_vertex(v)) {
            Row row = bfs_row(g, v);
            for (const auto& [u, d] : row)
                if (u != v) row_set(delta_[u], v, d);
            delta_[v] = std::move(row);
        } else {
            delta_.erase(v);
        }
    }
    return moves;
}

const TypeCatalog::TypeEntry* TypeCatalog::type_of(VertexId v) const {
    auto it = by_vertex_.find(v);
    if (it == by_vertex_.end()) fail(ErrorCode::MissingVertex, "no type for vertex " + std::to_string(v));
    return it->second.type;
}

std::span<const VertexId> TypeCatalog::embedding(VertexId v) const {
    auto it = by_vertex_.find(v);
    if (it == by_vertex_.end()) fail(ErrorCode::MissingVertex, "no embedding for vertex " + std::to_string(v));
    return {it->second.f_inv.data(), it->second.f_inv.size()};
}

std::optional<std::uint32_t> TypeCatalog::delta_lookup(VertexId a, VertexId b) const {
    auto ra = delta_.find(a);
    if (ra == delta_.end()) fail(ErrorCode::MissingVertex, "no distance row for " + std::to_string(a));
    if (delta_.find(b) == delta_.end())
        fail(ErrorCode::MissingVertex, "no distance row for " + std::to_string(b));
    if (a == b) return 0;
    auto hit = row_find(ra->second, b);
    if (hit == ra->second.end()) return std::nullopt;
    return hit->second;
}

const TypeCatalog::SolTable& TypeCatalog::sol(const TypeEntry& t, std::uint32_t source_id,
                                              const CenteredQuery& q) {
    if (q.region_radius() > rho_)
        fail(ErrorCode::RadiusTooLarge,
             "centered query needs radius " + std::to_string(q.region_radius()) +
                 " but the catalog holds " + std::to_string(rho_));
    auto& entry = const_cast<TypeEntry&>(t);
    if (entry.sol.size() <= source_id) entry.sol.resize(source_id + 1);
    if (!entry.sol[source_id]) {
        auto table = std::make_unique<SolTable>();
        table->tuples = solve_anchored(t.graph, q, 0);
        table->lookup.insert(table->tuples.begin(), table->tuples.end());
        entry.sol[source_id] = std::move(table);
    }
    return *entry.sol[source_id];
}

const TypeCatalog::SolTable* TypeCatalog::sol_if_cached(const TypeEntry& t,
                                                        std::uint32_t source_id) const {
    if (t.sol.size() <= source_id) return nullptr;
    return t.sol[source_id].get();
}

long long TypeCatalog::alpha_count(const CenteredQuery& q, std::uint32_t source_id) {
    long long total = 0;
    for (auto& [key, entry] : realized_) {
        if (entry->members.empty()) continue;
        const SolTable& table = sol(*entry, source_id, q);
        total += static_cast<long long>(table.tuples.size()) *
                 static_cast<long long>(entry->members.size());
    }
    return total;
}

std::vector<Tuple> TypeCatalog::alpha_list(const CenteredQuery& q, std::uint32_t source_id) {
    std::vector<std::pair<VertexId, const VertexState*>> verts;
    verts.reserve(by_vertex_.size());
    for (const auto& [v, st] : by_vertex_) verts.emplace_back(v, &st);
    std::sort(verts.begin(), verts.end());
    std::vector<Tuple> out;
    for (const auto& [v, st] : verts) {
        const SolTable& table = sol(*st->type, source_id, q);
        std::vector<Tuple> here;
        here.reserve(table.tuples.size());
        for (const Tuple& local : table.tuples) {
            Tuple mapped(local.size());
            for (std::size_t i = 0; i < local.size(); ++i) mapped[i] = st->f_inv[local[i]];
            here.push_back(std::move(mapped));
        }
        std::sort(here.begin(), here.end());
        out.insert(out.end(), here.begin(), here.end());
    }
    return out;
}

}  // namespace dyncade
