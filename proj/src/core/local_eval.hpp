#pragma once

#include "graph.hpp"
#include "query.hpp"

#include <algorithm>
#include <string_view>

namespace dyncade {

// Total map from variable names to vertices; scoped push/pop for quantifiers.
class Assignment {
public:
    void push(std::string_view name, VertexId v) { vars_.emplace_back(name, v); }
    void pop() { vars_.pop_back(); }
    VertexId at(std::string_view name) const {
        for (auto it = vars_.rbegin(); it != vars_.rend(); ++it)
            if (it->first == name) return it->second;
        fail(ErrorCode::Internal, "assignment misses variable '" + std::string(name) + "'");
    }

private:
    std::vector<std::pair<std::string, VertexId>> vars_;
};

// Relativized semantics of local formulas over any graph view that provides
// has_vertex / neighbors / has_color / bounded_distance / ball_members.
// Quantifiers range over vertices within the binder radius of some anchor
// value.
template <class G>
bool eval_local(const G& g, const Formula& f, Assignment& sigma) {
    switch (f.kind) {
        case FormKind::Eq:
            return sigma.at(f.v1) == sigma.at(f.v2);
        case FormKind::Edge: {
            VertexId a = sigma.at(f.v1);
            VertexId b = sigma.at(f.v2);
            if (a == b) return false;
            auto nb = g.neighbors(a);
            return std::find(nb.begin(), nb.end(), b) != nb.end();
        }
        case FormKind::Color:
            return g.has_color(sigma.at(f.v1), f.name);
        case FormKind::DistLeq:
            return g.bounded_distance(sigma.at(f.v1), sigma.at(f.v2), f.bound).has_value();
        case FormKind::Not:
            return !eval_local(g, f.kids[0], sigma);
        case FormKind::And:
            for (const auto& k : f.kids)
                if (!eval_local(g, k, sigma)) return false;
            return true;
        case FormKind::Or:
            for (const auto& k : f.kids)
                if (eval_local(g, k, sigma)) return true;
            return false;
        case FormKind::Exists:
        case FormKind::Forall: {
            std::vector<VertexId> sources;
            sources.reserve(f.anchors.size());
            for (const auto& a : f.anchors) sources.push_back(sigma.at(a));
            auto domain = g.ball_members({sources.data(), sources.size()}, f.bound);
            bool want = f.kind == FormKind::Exists;
            for (VertexId v : domain) {
                sigma.push(f.qvar, v);
                bool hit = eval_local(g, f.kids[0], sigma);
                sigma.pop();
                if (hit == want) return want;
            }
            return !want;
        }
    }
    return false;
}

// Checked entry point: verifies the assigned vertices are live first.
bool eval_local_checked(const DynamicGraph& g, const Formula& f,
                        const std::vector<std::pair<std::string, VertexId>>& values);

// True iff for every position pair (i, j): dist(a_i, a_j) <= 2r exactly when
// (i, j) is a tau edge.
bool eval_delta(const DynamicGraph& g, const DistanceType& tau, std::uint32_t r, const Tuple& a);

}  // namespace dyncade
