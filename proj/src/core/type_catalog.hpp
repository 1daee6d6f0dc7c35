#pragma once

#include "canonize.hpp"
#include "centered.hpp"
#include "graph.hpp"

#include <memory>
#include <set>
#include <unordered_map>

namespace dyncade {

// Catalog of realized neighborhood types: every vertex is assigned the
// canonical form of its rho-ball, with the witnessing embedding kept per
// vertex. Realized types are cached forever (the catalog is monotone), and
// solution tables per (type, centered query) are memoized. Also owns the
// bounded-radius pair-distance table.
class TypeCatalog {
public:
    struct SolTable {
        std::vector<Tuple> tuples;  // local-id tuples anchored at the center, sorted
        std::unordered_set<Tuple, TupleHash> lookup;
    };

    struct TypeEntry {
        std::string key;
        TypeGraph graph;
        std::set<VertexId> members;  // vertices of this type
        std::vector<std::unique_ptr<SolTable>> sol;  // per engine source id
    };

    struct Move {
        VertexId v = 0;
        const TypeEntry* old_type = nullptr;  // null: vertex is new
        std::vector<VertexId> old_embedding;
        const TypeEntry* new_type = nullptr;  // null: vertex removed
    };

    TypeCatalog(std::uint32_t rho, std::uint32_t delta_radius)
        : rho_(rho), delta_radius_(delta_radius) {}

    std::uint32_t rho() const { return rho_; }
    std::uint32_t delta_radius() const { return delta_radius_; }

    // Full build: one canonize and one distance BFS per vertex.
    void build(const DynamicGraph& g);

    // Re-derive assignments of the impacted vertices against the post-update
    // graph. rho_impacted / delta_impacted must cover every vertex whose
    // rho-ball (resp. delta-radius ball) changed, plus insertions/removals.
    std::vector<Move> refresh(const DynamicGraph& g, std::span<const VertexId> rho_impacted,
                              std::span<const VertexId> delta_impacted);

    const TypeEntry* type_of(VertexId v) const;             // MissingVertex
    std::span<const VertexId> embedding(VertexId v) const;  // local id -> vertex

    // Exact distance if <= delta_radius, nullopt otherwise; O(log row).
    std::optional<std::uint32_t> delta_lookup(VertexId a, VertexId b) const;

    // Memoized solutions anchored at the type's center. Throws RadiusTooLarge
    // if the query's region exceeds rho. Non-const: fills the cache.
    const SolTable& sol(const TypeEntry& t, std::uint32_t source_id, const CenteredQuery& q);
    const SolTable* sol_if_cached(const TypeEntry& t, std::uint32_t source_id) const;

    long long alpha_count(const CenteredQuery& q, std::uint32_t source_id);
    std::vector<Tuple> alpha_list(const CenteredQuery& q, std::uint32_t source_id);

    std::size_t assigned_vertex_count() const { return by_vertex_.size(); }
    std::size_t realized_count() const { return realized_.size(); }
    const std::unordered_map<std::string, std::unique_ptr<TypeEntry>>& realized() const {
        return realized_;
    }

private:
    struct VertexState {
        TypeEntry* type = nullptr;
        std::vector<VertexId> f_inv;  // local id -> vertex
    };

    void assign(const DynamicGraph& g, VertexId v);
    void rebuild_delta_row(const DynamicGraph& g, VertexId v);
    std::vector<std::pair<VertexId, std::uint32_t>> bfs_row(const DynamicGraph& g, VertexId v) const;

    std::uint32_t rho_;
    std::uint32_t delta_radius_;
    std::unordered_map<std::string, std::unique_ptr<TypeEntry>> realized_;
    std::unordered_map<VertexId, VertexState> by_vertex_;
    std::unordered_map<VertexId, std::vector<std::pair<VertexId, std::uint32_t>>> delta_;
};

}  // namespace dyncade
