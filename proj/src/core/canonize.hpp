#pragma once

#include "graph.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dyncade {

// Canonical pointed colored graph; local ids 0..n-1 with the center at 0.
// Provides the same view interface as DynamicGraph so formulas evaluate on it
// directly.
struct TypeGraph {
    std::uint32_t n = 0;
    std::vector<std::vector<VertexId>> adj;  // sorted local ids
    std::vector<ColorSet> colors;

    bool has_vertex(VertexId v) const { return v < n; }
    std::span<const VertexId> neighbors(VertexId v) const {
        return {adj[v].data(), adj[v].size()};
    }
    bool has_color(VertexId v, const std::string& name) const;
    std::optional<std::uint32_t> bounded_distance(VertexId a, VertexId b, std::uint32_t r) const;
    std::vector<VertexId> ball_members(std::span<const VertexId> sources, std::uint32_t r) const;
};

struct CanonResult {
    std::string key;                   // identical iff pointed-colored-isomorphic
    std::vector<std::uint32_t> order;  // order[local id] = ball member index
    TypeGraph type;                    // the ball relabeled into canonical form
};

// Canonical form by iterated (distance, colors, degree) refinement plus
// branching on the remaining symmetric cells, taking the minimal adjacency
// encoding. Balls are small, so the worst-case branching is acceptable.
CanonResult canonize(const PointedBall& ball);

}  // namespace dyncade
