#include "local_eval.hpp"

namespace dyncade {

bool eval_local_checked(const DynamicGraph& g, const Formula& f,
                        const std::vector<std::pair<std::string, VertexId>>& values) {
    Assignment sigma;
    for (const auto& [name, v] : values) {
        if (!g.has_vertex(v))
            fail(ErrorCode::MissingVertex, "assignment binds dead vertex " + std::to_string(v));
        sigma.push(name, v);
    }
    return eval_local(g, f, sigma);
}

bool eval_delta(const DynamicGraph& g, const DistanceType& tau, std::uint32_t r, const Tuple& a) {
    if (a.size() != tau.k) fail(ErrorCode::ArityMismatch, "tuple arity does not match distance type");
    for (VertexId v : a)
        if (!g.has_vertex(v)) fail(ErrorCode::MissingVertex, "dead vertex " + std::to_string(v));
    for (std::uint32_t i = 0; i < tau.k; ++i)
        for (std::uint32_t j = i + 1; j < tau.k; ++j) {
            bool close = g.distance_leq(a[i], a[j], 2 * r);
            if (close != tau.has_edge(i, j)) return false;
        }
    return true;
}

}  // namespace dyncade
