#include "graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>
#include <unordered_set>

namespace dyncade {

std::uint64_t ball_size_bound(std::uint64_t d, std::uint32_t r) {
    std::uint64_t total = 1;  // the center
    std::uint64_t layer = 1;
    for (std::uint32_t i = 0; i < r; ++i) {
        if (d != 0 && layer > std::numeric_limits<std::uint64_t>::max() / d)
            return std::numeric_limits<std::uint64_t>::max();
        layer *= d;
        if (total > std::numeric_limits<std::uint64_t>::max() - layer)
            return std::numeric_limits<std::uint64_t>::max();
        total += layer;
    }
    return total;
}

const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::Ok: return "Ok";
        case ErrorCode::MissingVertex: return "MissingVertex";
        case ErrorCode::DuplicateVertex: return "DuplicateVertex";
        case ErrorCode::DuplicateEdge: return "DuplicateEdge";
        case ErrorCode::MissingEdge: return "MissingEdge";
        case ErrorCode::SelfLoop: return "SelfLoop";
        case ErrorCode::DegreeExceeded: return "DegreeExceeded";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::UnboundVariable: return "UnboundVariable";
        case ErrorCode::DuplicateName: return "DuplicateName";
        case ErrorCode::ComponentMismatch: return "ComponentMismatch";
        case ErrorCode::RadiusExceeded: return "RadiusExceeded";
        case ErrorCode::TauClash: return "TauClash";
        case ErrorCode::NonContiguousGroups: return "NonContiguousGroups";
        case ErrorCode::MixedClauseRadii: return "MixedClauseRadii";
        case ErrorCode::ArityMismatch: return "ArityMismatch";
        case ErrorCode::StaleCursor: return "StaleCursor";
        case ErrorCode::RadiusTooLarge: return "RadiusTooLarge";
        case ErrorCode::TupleNotInList: return "TupleNotInList";
        case ErrorCode::DuplicateTuple: return "DuplicateTuple";
        case ErrorCode::MissingLeafCount: return "MissingLeafCount";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::Io: return "Io";
        case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

ColorSet make_color_set(std::vector<std::string> names) {
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    return names;
}

DegreePolicy DegreePolicy::bounded(std::uint32_t d) {
    DegreePolicy p;
    p.kind = Kind::Bounded;
    p.d = d;
    return p;
}

DegreePolicy DegreePolicy::low_degree(double C, double eps) {
    DegreePolicy p;
    p.kind = Kind::LowDegree;
    p.C = C;
    p.eps = eps;
    return p;
}

std::uint32_t DegreePolicy::cap(std::size_t n) const {
    if (kind == Kind::Bounded) return d;
    double base = (n <= 1) ? C : C * std::pow(static_cast<double>(n), eps);
    double c = std::ceil(base - 1e-9);
    if (c < 0) c = 0;
    if (c > 4e9) return std::numeric_limits<std::uint32_t>::max();
    return static_cast<std::uint32_t>(c);
}

UpdateOp UpdateOp::add_vertex(VertexId id, ColorSet colors) {
    return UpdateOp{Kind::AddVertex, id, 0, make_color_set(std::move(colors))};
}
UpdateOp UpdateOp::remove_vertex(VertexId id) { return UpdateOp{Kind::RemoveVertex, id, 0, {}}; }
UpdateOp UpdateOp::add_edge(VertexId u, VertexId v) { return UpdateOp{Kind::AddEdge, u, v, {}}; }
UpdateOp UpdateOp::remove_edge(VertexId u, VertexId v) { return UpdateOp{Kind::RemoveEdge, u, v, {}}; }
UpdateOp UpdateOp::relabel(VertexId id, ColorSet colors) {
    return UpdateOp{Kind::Relabel, id, 0, make_color_set(std::move(colors))};
}

std::string to_string(const UpdateOp& op) {
    std::ostringstream os;
    auto colors = [&]() {
        std::string s;
        for (std::size_t i = 0; i < op.colors.size(); ++i) {
            if (i) s += ',';
            s += op.colors[i];
        }
        return s;
    };
    switch (op.kind) {
        case UpdateOp::Kind::AddVertex: os << "+v " << op.a; if (!op.colors.empty()) os << ' ' << colors(); break;
        case UpdateOp::Kind::RemoveVertex: os << "-v " << op.a; break;
        case UpdateOp::Kind::AddEdge: os << "+e " << op.a << ' ' << op.b; break;
        case UpdateOp::Kind::RemoveEdge: os << "-e " << op.a << ' ' << op.b; break;
        case UpdateOp::Kind::Relabel: os << "!v " << op.a; if (!op.colors.empty()) os << ' ' << colors(); break;
    }
    return os.str();
}

DynamicGraph::DynamicGraph(DegreePolicy policy) : policy_(policy) {}

const DynamicGraph::VertexRec& DynamicGraph::rec(VertexId v) const {
    auto it = verts_.find(v);
    if (it == verts_.end()) fail(ErrorCode::MissingVertex, "no vertex " + std::to_string(v));
    return it->second;
}

void DynamicGraph::require_vertex(VertexId v) const { (void)rec(v); }

bool DynamicGraph::has_vertex(VertexId v) const { return verts_.count(v) != 0; }

bool DynamicGraph::has_edge(VertexId u, VertexId v) const {
    auto it = verts_.find(u);
    if (it == verts_.end()) return false;
    const auto& n = it->second.nbrs;
    return std::binary_search(n.begin(), n.end(), v);
}

const ColorSet& DynamicGraph::colors(VertexId v) const { return rec(v).colors; }

bool DynamicGraph::has_color(VertexId v, const std::string& name) const {
    const auto& c = rec(v).colors;
    return std::binary_search(c.begin(), c.end(), name);
}

std::span<const VertexId> DynamicGraph::neighbors(VertexId v) const {
    const auto& n = rec(v).nbrs;
    return {n.data(), n.size()};
}

std::uint32_t DynamicGraph::degree(VertexId v) const {
    return static_cast<std::uint32_t>(rec(v).nbrs.size());
}

std::uint32_t DynamicGraph::max_degree() const {
    if (degree_hist_.empty()) return 0;
    return degree_hist_.rbegin()->first;
}

std::vector<VertexId> DynamicGraph::vertex_ids_sorted() const {
    std::vector<VertexId> ids;
    ids.reserve(verts_.size());
    for (const auto& [id, _] : verts_) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::vector<std::pair<VertexId, VertexId>> DynamicGraph::edges_sorted() const {
    std::vector<std::pair<VertexId, VertexId>> es;
    es.reserve(edge_count_);
    for (const auto& [id, r] : verts_)
        for (VertexId w : r.nbrs)
            if (id < w) es.emplace_back(id, w);
    std::sort(es.begin(), es.end());
    return es;
}

VertexId DynamicGraph::fresh_id() {
    if (next_id_ >= kNoVertex) fail(ErrorCode::Internal, "vertex id space exhausted");
    return static_cast<VertexId>(next_id_);
}

void DynamicGraph::bump_degree(std::uint32_t from, std::uint32_t to) {
    if (from == to) return;
    auto it = degree_hist_.find(from);
    if (it != degree_hist_.end() && --it->second == 0) degree_hist_.erase(it);
    ++degree_hist_[to];
}

void DynamicGraph::validate_op(const UpdateOp& op) const {
    switch (op.kind) {
        case UpdateOp::Kind::AddVertex:
            if (has_vertex(op.a)) fail(ErrorCode::DuplicateVertex, "vertex " + std::to_string(op.a) + " already present");
            break;
        case UpdateOp::Kind::RemoveVertex: {
            const auto& r = rec(op.a);
            if (policy_.kind == DegreePolicy::Kind::LowDegree && verts_.size() >= 1) {
                // Removal shrinks n, and with it the cap; the post-removal max
                // degree must still fit.
                std::uint32_t cap_after = policy_.cap(verts_.size() - 1);
                for (const auto& [id, vr] : verts_) {
                    if (id == op.a) continue;
                    std::uint32_t deg = static_cast<std::uint32_t>(vr.nbrs.size());
                    if (std::binary_search(vr.nbrs.begin(), vr.nbrs.end(), op.a)) --deg;
                    if (deg > cap_after)
                        fail(ErrorCode::DegreeExceeded,
                             "removing vertex " + std::to_string(op.a) + " would violate the degree cap");
                }
            }
            (void)r;
            break;
        }
        case UpdateOp::Kind::AddEdge: {
            if (op.a == op.b) fail(ErrorCode::SelfLoop, "self loop on " + std::to_string(op.a));
            const auto& ra = rec(op.a);
            const auto& rb = rec(op.b);
            if (std::binary_search(ra.nbrs.begin(), ra.nbrs.end(), op.b))
                fail(ErrorCode::DuplicateEdge, "edge " + std::to_string(op.a) + "-" + std::to_string(op.b) + " already present");
            std::uint32_t cap = policy_.cap(verts_.size());
            if (ra.nbrs.size() + 1 > cap || rb.nbrs.size() + 1 > cap)
                fail(ErrorCode::DegreeExceeded, "edge " + std::to_string(op.a) + "-" + std::to_string(op.b) + " exceeds degree cap " + std::to_string(cap));
            break;
        }
        case UpdateOp::Kind::RemoveEdge: {
            if (op.a == op.b) fail(ErrorCode::SelfLoop, "self loop on " + std::to_string(op.a));
            const auto& ra = rec(op.a);
            require_vertex(op.b);
            if (!std::binary_search(ra.nbrs.begin(), ra.nbrs.end(), op.b))
                fail(ErrorCode::MissingEdge, "no edge " + std::to_string(op.a) + "-" + std::to_string(op.b));
            break;
        }
        case UpdateOp::Kind::Relabel:
            require_vertex(op.a);
            break;
    }
}

void DynamicGraph::apply(const UpdateOp& op) {
    validate_op(op);
    switch (op.kind) {
        case UpdateOp::Kind::AddVertex: {
            verts_.emplace(op.a, VertexRec{op.colors, {}});
            ++degree_hist_[0];
            if (static_cast<std::uint64_t>(op.a) + 1 > next_id_) next_id_ = static_cast<std::uint64_t>(op.a) + 1;
            break;
        }
        case UpdateOp::Kind::RemoveVertex: {
            // Convenience composite: drop incident edges first, each a local step.
            auto nbrs = rec(op.a).nbrs;  // copy
            for (VertexId w : nbrs) {
                auto& rw = verts_.at(w).nbrs;
                std::uint32_t deg = static_cast<std::uint32_t>(rw.size());
                rw.erase(std::lower_bound(rw.begin(), rw.end(), op.a));
                bump_degree(deg, deg - 1);
                --edge_count_;
            }
            bump_degree(static_cast<std::uint32_t>(nbrs.size()), 0);
            auto it = degree_hist_.find(0);
            if (--it->second == 0) degree_hist_.erase(it);
            verts_.erase(op.a);
            break;
        }
        case UpdateOp::Kind::AddEdge: {
            auto& ra = verts_.at(op.a).nbrs;
            auto& rb = verts_.at(op.b).nbrs;
            bump_degree(static_cast<std::uint32_t>(ra.size()), static_cast<std::uint32_t>(ra.size()) + 1);
            bump_degree(static_cast<std::uint32_t>(rb.size()), static_cast<std::uint32_t>(rb.size()) + 1);
            ra.insert(std::upper_bound(ra.begin(), ra.end(), op.b), op.b);
            rb.insert(std::upper_bound(rb.begin(), rb.end(), op.a), op.a);
            ++edge_count_;
            break;
        }
        case UpdateOp::Kind::RemoveEdge: {
            auto& ra = verts_.at(op.a).nbrs;
            auto& rb = verts_.at(op.b).nbrs;
            bump_degree(static_cast<std::uint32_t>(ra.size()), static_cast<std::uint32_t>(ra.size()) - 1);
            bump_degree(static_cast<std::uint32_t>(rb.size()), static_cast<std::uint32_t>(rb.size()) - 1);
            ra.erase(std::lower_bound(ra.begin(), ra.end(), op.b));
            rb.erase(std::lower_bound(rb.begin(), rb.end(), op.a));
            --edge_count_;
            break;
        }
        case UpdateOp::Kind::Relabel:
            verts_.at(op.a).colors = op.colors;
            break;
    }
#ifndef NDEBUG
    check_invariants();
#endif
}

PointedBall DynamicGraph::ball(VertexId a, std::uint32_t r) const {
    require_vertex(a);
    PointedBall out;
    out.center = a;
    out.radius = r;

    std::unordered_map<VertexId, std::uint32_t> dist;
    dist.emplace(a, 0);
    std::deque<VertexId> queue{a};
    while (!queue.empty()) {
        VertexId v = queue.front();
        queue.pop_front();
        std::uint32_t dv = dist[v];
        if (dv == r) continue;
        for (VertexId w : rec(v).nbrs) {
            if (dist.emplace(w, dv + 1).second) queue.push_back(w);
        }
    }

    out.members.reserve(dist.size());
    for (const auto& [v, _] : dist) out.members.push_back(v);
    std::sort(out.members.begin(), out.members.end(), [&](VertexId x, VertexId y) {
        std::uint32_t dx = dist[x], dy = dist[y];
        return dx != dy ? dx < dy : x < y;
    });
    out.member_dist.reserve(out.members.size());
    out.member_colors.reserve(out.members.size());
    std::unordered_map<VertexId, std::uint32_t> index;
    for (std::uint32_t i = 0; i < out.members.size(); ++i) {
        VertexId v = out.members[i];
        out.member_dist.push_back(dist[v]);
        out.member_colors.push_back(&rec(v).colors);
        index.emplace(v, i);
    }
    for (std::uint32_t i = 0; i < out.members.size(); ++i) {
        for (VertexId w : rec(out.members[i]).nbrs) {
            auto it = index.find(w);
            if (it != index.end() && i < it->second) out.edges.emplace_back(i, it->second);
        }
    }
    std::sort(out.edges.begin(), out.edges.end());
    return out;
}

std::optional<std::uint32_t> DynamicGraph::bounded_distance(VertexId a, VertexId b,
                                                            std::uint32_t r) const {
    require_vertex(a);
    require_vertex(b);
    if (a == b) return 0;
    if (r == 0) return std::nullopt;

    // Bidirectional BFS, expanding the smaller frontier. A meeting is checked
    // when a vertex first enters one side while already present in the other;
    // by the time ra + rb reaches r, every path of length <= r has produced a
    // meeting, so `best` is exact.
    std::unordered_map<VertexId, std::uint32_t> da{{a, 0}}, db{{b, 0}};
    std::vector<VertexId> fa{a}, fb{b};
    std::uint32_t ra = 0, rb = 0;
    std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
    while (ra + rb < r && !fa.empty() && !fb.empty()) {
        bool expand_a = fa.size() <= fb.size();
        auto& frontier = expand_a ? fa : fb;
        auto& mine = expand_a ? da : db;
        auto& other = expand_a ? db : da;
        std::uint32_t depth = (expand_a ? ++ra : ++rb);
        std::vector<VertexId> next;
        for (VertexId v : frontier) {
            for (VertexId w : rec(v).nbrs) {
                if (!mine.emplace(w, depth).second) continue;
                next.push_back(w);
                auto hit = other.find(w);
                if (hit != other.end()) best = std::min(best, depth + hit->second);
            }
        }
        frontier = std::move(next);
        if (best <= ra + rb) break;
    }
    if (best <= r) return best;
    return std::nullopt;
}

bool DynamicGraph::distance_leq(VertexId a, VertexId b, std::uint32_t r) const {
    return bounded_distance(a, b, r).has_value();
}

std::vector<std::pair<VertexId, std::uint32_t>> DynamicGraph::impacted_layers(
    const UpdateOp& op, std::uint32_t rmax) const {
    validate_op(op);

    std::vector<VertexId> touched;
    std::vector<VertexId> inserted;
    switch (op.kind) {
        case UpdateOp::Kind::AddVertex:
            inserted.push_back(op.a);
            break;
        case UpdateOp::Kind::RemoveVertex: {
            touched.push_back(op.a);
            for (VertexId w : rec(op.a).nbrs) touched.push_back(w);
            break;
        }
        case UpdateOp::Kind::AddEdge:
        case UpdateOp::Kind::RemoveEdge:
            touched.push_back(op.a);
            touched.push_back(op.b);
            break;
        case UpdateOp::Kind::Relabel:
            touched.push_back(op.a);
            break;
    }

    std::unordered_map<VertexId, std::uint32_t> dist;
    std::deque<VertexId> queue;
    for (VertexId v : touched) {
        if (dist.emplace(v, 0).second) queue.push_back(v);
    }
    while (!queue.empty()) {
        VertexId v = queue.front();
        queue.pop_front();
        std::uint32_t dv = dist[v];
        if (dv == rmax) continue;
        for (VertexId w : rec(v).nbrs) {
            if (dist.emplace(w, dv + 1).second) queue.push_back(w);
        }
    }

    std::vector<std::pair<VertexId, std::uint32_t>> out;
    out.reserve(dist.size() + inserted.size());
    for (VertexId v : inserted) out.emplace_back(v, 0);
    for (const auto& [v, d] : dist) out.emplace_back(v, d);
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        return x.second != y.second ? x.second < y.second : x.first < y.first;
    });
    return out;
}

std::vector<VertexId> DynamicGraph::impacted(const UpdateOp& op, std::uint32_t r) const {
    auto layers = impacted_layers(op, r);
    std::vector<VertexId> out;
    out.reserve(layers.size());
    for (const auto& [v, _] : layers) out.push_back(v);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<VertexId> DynamicGraph::ball_members(std::span<const VertexId> sources,
                                                 std::uint32_t r) const {
    std::unordered_map<VertexId, std::uint32_t> dist;
    std::deque<VertexId> queue;
    for (VertexId v : sources) {
        require_vertex(v);
        if (dist.emplace(v, 0).second) queue.push_back(v);
    }
    while (!queue.empty()) {
        VertexId v = queue.front();
        queue.pop_front();
        std::uint32_t dv = dist[v];
        if (dv == r) continue;
        for (VertexId w : rec(v).nbrs) {
            if (dist.emplace(w, dv + 1).second) queue.push_back(w);
        }
    }
    std::vector<VertexId> out;
    out.reserve(dist.size());
    for (const auto& [v, _] : dist) out.push_back(v);
    std::sort(out.begin(), out.end());
    return out;
}

void DynamicGraph::check_invariants() const {
    std::size_t edges_seen = 0;
    std::uint32_t maxdeg = 0;
    std::map<std::uint32_t, std::uint32_t> hist;
    std::uint32_t cap = policy_.cap(verts_.size());
    for (const auto& [id, r] : verts_) {
        if (!std::is_sorted(r.nbrs.begin(), r.nbrs.end()))
            fail(ErrorCode::Internal, "adjacency not sorted");
        if (std::adjacent_find(r.nbrs.begin(), r.nbrs.end()) != r.nbrs.end())
            fail(ErrorCode::Internal, "parallel edge");
        for (VertexId w : r.nbrs) {
            if (w == id) fail(ErrorCode::Internal, "self loop stored");
            auto it = verts_.find(w);
            if (it == verts_.end()) fail(ErrorCode::Internal, "dangling adjacency");
            if (!std::binary_search(it->second.nbrs.begin(), it->second.nbrs.end(), id))
                fail(ErrorCode::Internal, "asymmetric adjacency");
        }
        std::uint32_t deg = static_cast<std::uint32_t>(r.nbrs.size());
        if (deg > cap) fail(ErrorCode::Internal, "degree cap violated");
        maxdeg = std::max(maxdeg, deg);
        ++hist[deg];
        edges_seen += r.nbrs.size();
    }
    if (edges_seen != 2 * edge_count_) fail(ErrorCode::Internal, "edge count mismatch");
    if (hist != degree_hist_) fail(ErrorCode::Internal, "degree histogram mismatch");
    if (max_degree() != maxdeg) fail(ErrorCode::Internal, "max degree mismatch");
}

}  // namespace dyncade
