#pragma once

#include "errors.hpp"
#include "ids.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dyncade {

// Sorted, duplicate-free set of color names.
using ColorSet = std::vector<std::string>;
ColorSet make_color_set(std::vector<std::string> names);

struct DegreePolicy {
    enum class Kind { Bounded, LowDegree };
    Kind kind = Kind::Bounded;
    std::uint32_t d = 0;  // Bounded cap
    double C = 1.0;       // LowDegree cap: ceil(C * n^eps), with cap(0)=cap(1)=ceil(C)
    double eps = 0.0;

    static DegreePolicy bounded(std::uint32_t d);
    static DegreePolicy low_degree(double C, double eps);

    std::uint32_t cap(std::size_t n) const;
};

struct UpdateOp {
    enum class Kind { AddVertex, RemoveVertex, AddEdge, RemoveEdge, Relabel };
    Kind kind = Kind::AddVertex;
    VertexId a = 0;
    VertexId b = 0;    // second endpoint for edge ops
    ColorSet colors;   // AddVertex / Relabel

    static UpdateOp add_vertex(VertexId id, ColorSet colors = {});
    static UpdateOp remove_vertex(VertexId id);
    static UpdateOp add_edge(VertexId u, VertexId v);
    static UpdateOp remove_edge(VertexId u, VertexId v);
    static UpdateOp relabel(VertexId id, ColorSet colors);
};

std::string to_string(const UpdateOp& op);

// Induced substructure on all vertices within `radius` of `center`.
// Members are ordered by (distance from center, id); edges are pairs of
// member indices with first < second.
struct PointedBall {
    VertexId center = 0;
    std::uint32_t radius = 0;
    std::vector<VertexId> members;
    std::vector<std::uint32_t> member_dist;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    // Borrowed from the parent graph; valid until the graph is mutated.
    std::vector<const ColorSet*> member_colors;

    std::size_t size() const { return members.size(); }
};

// Mutable undirected colored graph with degree-policy enforcement.
// All update entry points validate first and leave the graph untouched on
// rejection. Single writer; concurrent readers are safe between updates.
class DynamicGraph {
public:
    explicit DynamicGraph(DegreePolicy policy = DegreePolicy::bounded(3));

    // Throws EngineError on violated preconditions or policy; atomic.
    void apply(const UpdateOp& op);
    // Same checks as apply, no mutation.
    void validate_op(const UpdateOp& op) const;

    bool has_vertex(VertexId v) const;
    bool has_edge(VertexId u, VertexId v) const;
    const ColorSet& colors(VertexId v) const;
    bool has_color(VertexId v, const std::string& name) const;
    std::span<const VertexId> neighbors(VertexId v) const;
    std::uint32_t degree(VertexId v) const;

    std::size_t vertex_count() const { return verts_.size(); }
    std::size_t edge_count() const { return edge_count_; }
    std::uint32_t max_degree() const;
    const DegreePolicy& policy() const { return policy_; }

    std::vector<VertexId> vertex_ids_sorted() const;
    std::vector<std::pair<VertexId, VertexId>> edges_sorted() const;

    // Monotone allocator: never hands out an id that was ever used.
    VertexId fresh_id();

    PointedBall ball(VertexId a, std::uint32_t r) const;

    // Exact distance if <= r, nullopt otherwise. Radius-bounded bidirectional BFS.
    std::optional<std::uint32_t> bounded_distance(VertexId a, VertexId b, std::uint32_t r) const;
    bool distance_leq(VertexId a, VertexId b, std::uint32_t r) const;

    // All vertices within distance r (in this graph or in the post-update
    // graph) of a vertex or edge endpoint touched by op, plus inserted
    // vertices. Sorted by id. Call on the pre-update graph.
    std::vector<VertexId> impacted(const UpdateOp& op, std::uint32_t r) const;
    // Same set with BFS depths, ordered by (depth, id); a prefix gives the
    // impacted set at any smaller radius.
    std::vector<std::pair<VertexId, std::uint32_t>> impacted_layers(const UpdateOp& op,
                                                                    std::uint32_t rmax) const;

    // Union of balls around the sources; sorted by id.
    std::vector<VertexId> ball_members(std::span<const VertexId> sources, std::uint32_t r) const;

    // Full structural check (adjacency symmetry, counters, policy cap).
    // Throws EngineError{Internal} on violation.
    void check_invariants() const;

private:
    struct VertexRec {
        ColorSet colors;
        std::vector<VertexId> nbrs;  // sorted
    };

    const VertexRec& rec(VertexId v) const;
    void require_vertex(VertexId v) const;
    void bump_degree(std::uint32_t from, std::uint32_t to);

    DegreePolicy policy_;
    std::unordered_map<VertexId, VertexRec> verts_;
    std::map<std::uint32_t, std::uint32_t> degree_hist_;
    std::size_t edge_count_ = 0;
    std::uint64_t next_id_ = 0;
};

}  // namespace dyncade
