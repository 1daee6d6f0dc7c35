#include "canonize.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace dyncade {

bool TypeGraph::has_color(VertexId v, const std::string& name) const {
    const ColorSet& c = colors[v];
    return std::binary_search(c.begin(), c.end(), name);
}

std::optional<std::uint32_t> TypeGraph::bounded_distance(VertexId a, VertexId b,
                                                         std::uint32_t r) const {
    if (a == b) return 0;
    std::vector<std::uint32_t> dist(n, std::numeric_limits<std::uint32_t>::max());
    dist[a] = 0;
    std::deque<VertexId> q{a};
    while (!q.empty()) {
        VertexId v = q.front();
        q.pop_front();
        if (dist[v] == r) continue;
        for (VertexId w : adj[v]) {
            if (dist[w] != std::numeric_limits<std::uint32_t>::max()) continue;
            dist[w] = dist[v] + 1;
            if (w == b) return dist[w];
            q.push_back(w);
        }
    }
    return std::nullopt;
}

std::vector<VertexId> TypeGraph::ball_members(std::span<const VertexId> sources,
                                              std::uint32_t r) const {
    std::vector<std::uint32_t> dist(n, std::numeric_limits<std::uint32_t>::max());
    std::deque<VertexId> q;
    for (VertexId s : sources) {
        if (dist[s] != 0) {
            dist[s] = 0;
            q.push_back(s);
        }
    }
    while (!q.empty()) {
        VertexId v = q.front();
        q.pop_front();
        if (dist[v] == r) continue;
        for (VertexId w : adj[v]) {
            if (dist[w] != std::numeric_limits<std::uint32_t>::max()) continue;
            dist[w] = dist[v] + 1;
            q.push_back(w);
        }
    }
    std::vector<VertexId> out;
    for (VertexId v = 0; v < n; ++v)
        if (dist[v] != std::numeric_limits<std::uint32_t>::max()) out.push_back(v);
    return out;
}

namespace {

void append_u16(std::string& s, std::uint32_t x) {
    s.push_back(static_cast<char>(x & 0xff));
    s.push_back(static_cast<char>((x >> 8) & 0xff));
}

std::string color_bytes(const ColorSet& colors) {
    std::string s;
    append_u16(s, static_cast<std::uint32_t>(colors.size()));
    for (const auto& name : colors) {
        append_u16(s, static_cast<std::uint32_t>(name.size()));
        s += name;
    }
    return s;
}

struct Refiner {
    std::uint32_t n;
    const std::vector<std::vector<std::uint32_t>>& adj;  // ball-index adjacency
    std::vector<std::string> invariant;                  // per-vertex initial bytes

    // Partition as ordered cells of ball indices.
    using Partition = std::vector<std::vector<std::uint32_t>>;

    Partition initial() const {
        std::vector<std::uint32_t> verts(n);
        for (std::uint32_t i = 0; i < n; ++i) verts[i] = i;
        std::stable_sort(verts.begin(), verts.end(), [&](std::uint32_t a, std::uint32_t b) {
            return invariant[a] < invariant[b];
        });
        Partition p;
        for (std::uint32_t i = 0; i < n; ++i) {
            if (i == 0 || invariant[verts[i]] != invariant[verts[i - 1]]) p.emplace_back();
            p.back().push_back(verts[i]);
        }
        return p;
    }

    // Split cells by the sorted multiset of neighbor cell indices until stable.
    void refine(Partition& p) const {
        bool changed = true;
        while (changed) {
            changed = false;
            std::vector<std::uint32_t> cell_of(n);
            for (std::uint32_t c = 0; c < p.size(); ++c)
                for (std::uint32_t v : p[c]) cell_of[v] = c;
            Partition next;
            for (const auto& cell : p) {
                if (cell.size() == 1) {
                    next.push_back(cell);
                    continue;
                }
                std::map<std::vector<std::uint32_t>, std::vector<std::uint32_t>> split;
                for (std::uint32_t v : cell) {
                    std::vector<std::uint32_t> sig;
                    sig.reserve(adj[v].size());
                    for (std::uint32_t w : adj[v]) sig.push_back(cell_of[w]);
                    std::sort(sig.begin(), sig.end());
                    split[std::move(sig)].push_back(v);
                }
                if (split.size() > 1) changed = true;
                for (auto& [sig, members] : split) next.push_back(std::move(members));
            }
            p = std::move(next);
        }
    }
};

}  // namespace

CanonResult canonize(const PointedBall& ball) {
    std::uint32_t n = static_cast<std::uint32_t>(ball.size());
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (auto [i, j] : ball.edges) {
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());

    Refiner ref{n, adj, {}};
    ref.invariant.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        std::string s;
        append_u16(s, ball.member_dist[i]);
        append_u16(s, static_cast<std::uint32_t>(adj[i].size()));
        s += color_bytes(*ball.member_colors[i]);
        ref.invariant[i] = std::move(s);
    }

    // Encodes a full labeling: per canonical position the color bytes, then
    // the adjacency as sorted canonical neighbor positions.
    auto encode = [&](const std::vector<std::uint32_t>& order) {
        std::vector<std::uint32_t> where(n);
        for (std::uint32_t c = 0; c < n; ++c) where[order[c]] = c;
        std::string key;
        append_u16(key, n);
        for (std::uint32_t c = 0; c < n; ++c) key += color_bytes(*ball.member_colors[order[c]]);
        for (std::uint32_t c = 0; c < n; ++c) {
            std::vector<std::uint32_t> nb;
            nb.reserve(adj[order[c]].size());
            for (std::uint32_t w : adj[order[c]]) nb.push_back(where[w]);
            std::sort(nb.begin(), nb.end());
            append_u16(key, static_cast<std::uint32_t>(nb.size()));
            for (std::uint32_t x : nb) append_u16(key, x);
        }
        return key;
    };

    std::string best_key;
    std::vector<std::uint32_t> best_order;
    bool have_best = false;

    auto consider = [&](const Refiner::Partition& p) {
        std::vector<std::uint32_t> order;
        order.reserve(n);
        for (const auto& cell : p) order.push_back(cell[0]);
        std::string key = encode(order);
        if (!have_best || key < best_key) {
            best_key = std::move(key);
            best_order = std::move(order);
            have_best = true;
        }
    };

    std::function<void(Refiner::Partition)> search = [&](Refiner::Partition p) {
        ref.refine(p);
        std::size_t split_at = p.size();
        for (std::size_t c = 0; c < p.size(); ++c) {
            if (p[c].size() > 1) {
                split_at = c;
                break;
            }
        }
        if (split_at == p.size()) {
            consider(p);
            return;
        }
        for (std::uint32_t v : p[split_at]) {
            Refiner::Partition q;
            q.reserve(p.size() + 1);
            for (std::size_t c = 0; c < split_at; ++c) q.push_back(p[c]);
            q.push_back({v});
            std::vector<std::uint32_t> rest;
            for (std::uint32_t w : p[split_at])
                if (w != v) rest.push_back(w);
            q.push_back(std::move(rest));
            for (std::size_t c = split_at + 1; c < p.size(); ++c) q.push_back(p[c]);
            search(std::move(q));
        }
    };

    search(ref.initial());

    CanonResult out;
    out.key = best_key;
    out.order = best_order;
    out.type.n = n;
    out.type.adj.resize(n);
    out.type.colors.resize(n);
    std::vector<std::uint32_t> where(n);
    for (std::uint32_t c = 0; c < n; ++c) where[best_order[c]] = c;
    for (std::uint32_t c = 0; c < n; ++c) {
        out.type.colors[c] = *ball.member_colors[best_order[c]];
        for (std::uint32_t w : adj[best_order[c]]) out.type.adj[c].push_back(where[w]);
        std::sort(out.type.adj[c].begin(), out.type.adj[c].end());
    }
    return out;
}

}  // namespace dyncade
