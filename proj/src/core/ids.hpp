#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace dyncade {

using VertexId = std::uint32_t;
inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

// Tuple of vertex ids; std::vector's operator< gives the lexicographic order
// used throughout for solution lists.
using Tuple = std::vector<VertexId>;

struct TupleHash {
    std::size_t operator()(const Tuple& t) const noexcept {
        std::uint64_t h = 0x9e3779b97f4a7c15ull ^ t.size();
        for (VertexId v : t) {
            h ^= v;
            h *= 0x100000001b3ull;
        }
        return static_cast<std::size_t>(h);
    }
};

// sum_{i=0..r} d^i, saturating at uint64 max.
std::uint64_t ball_size_bound(std::uint64_t d, std::uint32_t r);

}  // namespace dyncade
