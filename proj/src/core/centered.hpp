#pragma once

#include "graph.hpp"
#include "local_eval.hpp"
#include "query.hpp"

#include <functional>
#include <map>
#include <set>
#include <span>
#include <unordered_map>
#include <unordered_set>

namespace dyncade {

// A conjunction of group formulas over one tuple of variables, together with
// the exact within-tuple distance type at threshold 2r. Solutions always sit
// inside one ball: the tuple's distance type is connected, so every element
// lies within 2r(arity-1) of the first one.
struct CenteredQuery {
    std::uint32_t arity = 0;
    std::uint32_t r = 0;  // distance-type threshold is 2r
    struct Part {
        Formula formula;
        std::vector<std::string> vars;       // formula variables, in order
        std::vector<std::uint32_t> positions;  // tuple position per variable
        std::uint32_t declared_radius = 0;
    };
    std::vector<Part> parts;
    DistanceType tau;  // connected over [0..arity)

    std::uint32_t max_part_radius() const;
    // Tuple spread bound from the first element.
    std::uint32_t spread() const { return arity == 0 ? 0 : 2 * r * (arity - 1); }
    // Ball radius around the anchor that determines whether an anchored tuple
    // is a solution.
    std::uint32_t region_radius() const;
    // Spec-style evaluation radius bound: 2 * r * arity + max declared radius.
    std::uint32_t eval_radius() const { return 2 * r * arity + max_part_radius(); }

    std::string key() const;  // canonical serialization, for structural dedup

    static CenteredQuery from_group(const Clause& cl, std::uint32_t group_index,
                                    const GroupInfo& info);
    static CenteredQuery unary(const Formula& alpha, const std::string& var, std::uint32_t r,
                               std::uint32_t declared_radius);
};

// Solutions with first element = anchor, over any graph view; sorted.
// Candidates are generated by walking tau from position 0, each new element
// constrained to the 2r-ball of an already placed tau-neighbor.
template <class G>
std::vector<Tuple> solve_anchored(const G& g, const CenteredQuery& q, VertexId anchor);

// Exact within-tuple distance type check at threshold 2r on a graph view.
template <class G>
bool tuple_matches_tau(const G& g, const DistanceType& tau, std::uint32_t r, const Tuple& t);

template <class G>
bool satisfies_centered(const G& g, const CenteredQuery& q, const Tuple& t);

// Sorted solution list with hash membership and per-anchor / per-element
// indexes for incremental maintenance.
class SolutionList {
public:
    bool contains(const Tuple& t) const { return members_.count(t) != 0; }
    std::size_t size() const { return sorted_.size(); }
    const std::set<Tuple>& sorted() const { return sorted_; }
    const std::set<Tuple>& anchored_at(VertexId v) const;
    std::vector<Tuple> tuples_containing(VertexId v) const;

    bool insert(const Tuple& t);
    bool erase(const Tuple& t);

private:
    std::set<Tuple> sorted_;
    std::unordered_set<Tuple, TupleHash> members_;
    std::unordered_map<VertexId, std::set<Tuple>> by_anchor_;
    std::unordered_map<VertexId, std::unordered_set<Tuple, TupleHash>> by_element_;
};

// Materialized solution list and count for one centered query, maintained
// under local updates by re-solving around impacted anchors.
class CenteredIndex {
public:
    explicit CenteredIndex(CenteredQuery q) : q_(std::move(q)) {}

    // Replays g as a stream of updates from the empty graph.
    static CenteredIndex build(const DynamicGraph& g, CenteredQuery q);

    struct Diff {
        std::vector<Tuple> added;
        std::vector<Tuple> removed;
        bool empty() const { return added.empty() && removed.empty(); }
    };

    // Call with the post-update graph and the impacted anchors (any superset
    // of the vertices whose region ball changed works).
    Diff refresh(const DynamicGraph& g_after, std::span<const VertexId> anchors);
    // Convenience: impacted computation + apply + refresh on a scratch graph.
    Diff on_update(DynamicGraph& g, const UpdateOp& op);

    const CenteredQuery& query() const { return q_; }
    const SolutionList& list() const { return list_; }
    long long count() const { return static_cast<long long>(list_.size()); }

private:
    CenteredQuery q_;
    SolutionList list_;
};

// --- template implementations ---------------------------------------------

template <class G>
bool tuple_matches_tau(const G& g, const DistanceType& tau, std::uint32_t r, const Tuple& t) {
    for (std::uint32_t i = 0; i < tau.k; ++i)
        for (std::uint32_t j = i + 1; j < tau.k; ++j) {
            bool close = g.bounded_distance(t[i], t[j], 2 * r).has_value();
            if (close != tau.has_edge(i, j)) return false;
        }
    return true;
}

template <class G>
bool satisfies_centered(const G& g, const CenteredQuery& q, const Tuple& t) {
    if (!tuple_matches_tau(g, q.tau, q.r, t)) return false;
    for (const auto& part : q.parts) {
        Assignment sigma;
        for (std::size_t i = 0; i < part.vars.size(); ++i)
            sigma.push(part.vars[i], t[part.positions[i]]);
        if (!eval_local(g, part.formula, sigma)) return false;
    }
    return true;
}

template <class G>
std::vector<Tuple> solve_anchored(const G& g, const CenteredQuery& q, VertexId anchor) {
    std::vector<Tuple> out;
    if (q.arity == 0) return out;

    // Fill order: BFS over tau edges from position 0; parent[i] is a
    // tau-neighbor placed earlier, so candidates for slot i come from the
    // 2r-ball of the parent's value.
    std::vector<std::uint32_t> order{0};
    std::vector<std::uint32_t> parent(q.arity, 0);
    {
        std::vector<bool> seen(q.arity, false);
        seen[0] = true;
        for (std::size_t head = 0; head < order.size(); ++head) {
            std::uint32_t u = order[head];
            for (auto [a, b] : q.tau.edges) {
                std::uint32_t other = a == u ? b : (b == u ? a : u);
                if (other != u && !seen[other]) {
                    seen[other] = true;
                    parent[other] = u;
                    order.push_back(other);
                }
            }
        }
        if (order.size() != q.arity)
            fail(ErrorCode::Internal, "centered query with disconnected distance type");
    }

    Tuple t(q.arity, anchor);
    std::function<void(std::size_t)> rec = [&](std::size_t step) {
        if (step == order.size()) {
            if (satisfies_centered(g, q, t)) out.push_back(t);
            return;
        }
        std::uint32_t slot = order[step];
        VertexId base = t[parent[slot]];
        for (VertexId v : g.ball_members(std::span<const VertexId>(&base, 1), 2 * q.r)) {
            t[slot] = v;
            rec(step + 1);
        }
    };
    rec(1);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace dyncade
