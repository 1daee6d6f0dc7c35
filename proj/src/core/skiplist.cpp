#include "skiplist.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace dyncade {

SkipIndex::SkipIndex(const DynamicGraph& g, std::uint32_t m, std::uint32_t r, std::uint32_t k)
    : g_(&g), m_(m), r_(r), k_(k) {}

std::uint64_t SkipIndex::window() const {
    // How many list positions a skip target can lie ahead, i.e. how many
    // tuples can intersect N_r(I) for any |I| <= k: at most k*ballsize(d, r)
    // forbidden-adjacent vertices, and every centered tuple through one of
    // them keeps its other elements within the 2mr-ball.
    std::uint64_t d = g_->max_degree();
    std::uint64_t w = std::max<std::uint64_t>(k_, 1) * ball_size_bound(d, r_);
    std::uint64_t per = ball_size_bound(d, 2 * m_ * r_);
    for (std::uint32_t i = 0; i + 1 < m_; ++i) {
        if (per != 0 && w > std::numeric_limits<std::uint64_t>::max() / per) return list_.size();
        w *= per;
        if (w >= list_.size()) return list_.size();
    }
    if (w > std::numeric_limits<std::uint64_t>::max() / std::max<std::uint32_t>(m_, 1))
        return list_.size();
    w *= std::max<std::uint32_t>(m_, 1);
    return std::min<std::uint64_t>(w, list_.size());
}

std::vector<VertexId> SkipIndex::neighborhood(std::span<const VertexId> sources) const {
    return g_->ball_members(sources, r_);
}

bool SkipIndex::tuple_meets(const Tuple& t, const std::vector<VertexId>& ball) const {
    for (VertexId v : t)
        if (std::binary_search(ball.begin(), ball.end(), v)) return true;
    return false;
}

std::optional<Tuple> SkipIndex::derive(List::const_iterator pos, const SetKey& forbidden) const {
    auto next = std::next(pos);
    if (next == list_.end()) return std::nullopt;
    if (forbidden.empty()) return next->first;
    auto ball = neighborhood({forbidden.data(), forbidden.size()});
    if (!tuple_meets(next->first, ball)) return next->first;

    // Maximal subset of `forbidden` charged at the successor; scanning by
    // decreasing size makes the first hit inclusion-maximal.
    const ScMap& sc = next->second;
    std::size_t n = forbidden.size();
    for (std::size_t size = n; size >= 1; --size) {
        // subsets of the given size via bitmask enumeration (n <= k, small)
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            if (static_cast<std::size_t>(__builtin_popcount(mask)) != size) continue;
            SetKey j;
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (1u << i)) j.push_back(forbidden[i]);
            auto it = sc.find(j);
            if (it != sc.end()) return it->second;
        }
    }
    fail(ErrorCode::Internal, "successor intersects the forbidden neighborhood but charges no subset");
}

SkipIndex::ScMap SkipIndex::compute_entry(List::const_iterator pos) const {
    ScMap sc;
    if (k_ == 0) return sc;
    const Tuple& b = pos->first;

    std::deque<SetKey> work;
    std::set<SetKey> enqueued;
    for (VertexId a : neighborhood({b.data(), b.size()})) {
        SetKey s{a};
        if (enqueued.insert(s).second) work.push_back(std::move(s));
    }
    while (!work.empty()) {
        SetKey I = std::move(work.front());
        work.pop_front();
        std::optional<Tuple> target = derive(pos, I);
        if (I.size() < k_ && target) {
            for (VertexId a : neighborhood({target->data(), target->size()})) {
                SetKey J = I;
                auto at = std::lower_bound(J.begin(), J.end(), a);
                if (at != J.end() && *at == a) continue;
                J.insert(at, a);
                if (enqueued.insert(J).second) work.push_back(std::move(J));
            }
        }
        sc.emplace(std::move(I), std::move(target));
    }
    return sc;
}

void SkipIndex::build(std::span<const Tuple> sorted_tuples) {
    list_.clear();
    for (const Tuple& t : sorted_tuples) {
        if (t.size() != m_) fail(ErrorCode::InvalidArgument, "tuple arity mismatch");
        if (!list_.emplace(t, ScMap{}).second) fail(ErrorCode::DuplicateTuple, "duplicate tuple in build");
    }
    for (auto it = list_.rbegin(); it != list_.rend(); ++it) {
        auto fwd = std::prev(it.base());
        fwd->second = compute_entry(fwd);
    }
}

std::optional<Tuple> SkipIndex::skip(const Tuple& b, std::span<const VertexId> forbidden) const {
    auto pos = list_.find(b);
    if (pos == list_.end()) fail(ErrorCode::TupleNotInList, "skip from a tuple that is not listed");
    if (forbidden.size() > k_)
        fail(ErrorCode::InvalidArgument, "forbidden set larger than the index bound");
    SetKey key(forbidden.begin(), forbidden.end());
    std::sort(key.begin(), key.end());
    key.erase(std::unique(key.begin(), key.end()), key.end());
    for (VertexId v : key)
        if (!g_->has_vertex(v)) fail(ErrorCode::MissingVertex, "forbidden vertex is dead");
    return derive(pos, key);
}

void SkipIndex::sweep(std::vector<Tuple> seeds) {
    if (list_.empty() || seeds.empty()) return;
    std::sort(seeds.begin(), seeds.end(), std::greater<>());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

    std::uint64_t W = window() + 2;
    auto it = list_.find(seeds.front());
    if (it == list_.end()) fail(ErrorCode::Internal, "sweep seed vanished");
    std::size_t si = 1;
    std::uint64_t below = 0;
    while (true) {
        ScMap fresh = compute_entry(it);
        bool changed = fresh != it->second;
        it->second = std::move(fresh);
        while (si < seeds.size() && seeds[si] >= it->first) ++si;
        bool pending_below = si < seeds.size();
        if (pending_below) {
            below = 0;
        } else {
            ++below;
            if (below > W && !changed) break;
        }
        if (it == list_.begin()) break;
        --it;
    }
}

void SkipIndex::insert(const Tuple& t) {
    if (t.size() != m_) fail(ErrorCode::InvalidArgument, "tuple arity mismatch");
    auto [it, ok] = list_.emplace(t, ScMap{});
    if (!ok) fail(ErrorCode::DuplicateTuple, "tuple already listed");
    sweep({t});
}

void SkipIndex::remove(const Tuple& t) {
    auto it = list_.find(t);
    if (it == list_.end()) fail(ErrorCode::TupleNotInList, "tuple not listed");
    bool at_begin = it == list_.begin();
    auto prev = at_begin ? list_.end() : std::prev(it);
    list_.erase(it);
    if (!at_begin) sweep({prev->first});
}

void SkipIndex::refresh_dirty(std::span<const Tuple> dirty) {
    std::vector<Tuple> seeds;
    for (const Tuple& t : dirty)
        if (list_.count(t)) seeds.push_back(t);
    sweep(std::move(seeds));
}

}  // namespace dyncade
