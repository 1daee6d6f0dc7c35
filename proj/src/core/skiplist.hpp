#pragma once

#include "graph.hpp"
#include "ids.hpp"

#include <map>
#include <optional>
#include <span>
#include <vector>

namespace dyncade {

// Ordered list of r-centered m-tuples with precomputed skip pointers.
// skip(b, I) returns the first tuple after b whose elements all avoid the
// r-neighborhood of the vertex set I (|I| <= k), in constant time:
// one successor probe plus a maximal stored-subset lookup.
//
// Stored state per tuple b is the family SC(b) of "charged" forbidden sets
// together with their successors:
//   rule 1: {a} for every vertex a within r of an element of b;
//   rule 2: I + {a} whenever I is charged, |I| < k, and the stored successor
//           of (b, I) has an element within r of a.
// Entries are derived from the immediate successor's entries, so a backward
// pass computes everything; a list change or a graph change near a tuple only
// invalidates a bounded window of preceding entries.
class SkipIndex {
public:
    using SetKey = std::vector<VertexId>;  // sorted, duplicate-free
    using ScMap = std::map<SetKey, std::optional<Tuple>>;

    SkipIndex(const DynamicGraph& g, std::uint32_t m, std::uint32_t r, std::uint32_t k);

    // Bulk construction from a sorted duplicate-free tuple list.
    void build(std::span<const Tuple> sorted_tuples);

    std::optional<Tuple> skip(const Tuple& b, std::span<const VertexId> forbidden) const;

    void insert(const Tuple& t);  // DuplicateTuple
    void remove(const Tuple& t);  // TupleNotInList

    // Re-derive entries after graph mutations; dirty = present tuples whose
    // elements' r-balls changed.
    void refresh_dirty(std::span<const Tuple> dirty);

    bool contains(const Tuple& t) const { return list_.count(t) != 0; }
    std::size_t size() const { return list_.size(); }
    std::uint32_t arity() const { return m_; }
    std::uint32_t radius() const { return r_; }
    std::uint32_t max_forbidden() const { return k_; }
    const std::map<Tuple, ScMap>& raw() const { return list_; }

    // min(|L|, (k * ballsize(d, 3mr))^m): how many predecessors of a change
    // point can be affected.
    std::uint64_t window() const;

private:
    using List = std::map<Tuple, ScMap>;

    ScMap compute_entry(List::const_iterator pos) const;
    std::optional<Tuple> derive(List::const_iterator pos, const SetKey& forbidden) const;
    // Recompute entries from the given seeds (present tuples) downward.
    void sweep(std::vector<Tuple> seeds);

    std::vector<VertexId> neighborhood(std::span<const VertexId> sources) const;
    bool tuple_meets(const Tuple& t, const std::vector<VertexId>& ball) const;

    const DynamicGraph* g_;
    std::uint32_t m_, r_, k_;
    List list_;
};

}  // namespace dyncade
