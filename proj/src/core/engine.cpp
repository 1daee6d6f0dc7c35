#include "engine.hpp"

#include <algorithm>
#include <functional>

namespace dyncade {

namespace {

std::vector<VertexId> impacted_at(const std::vector<std::pair<VertexId, std::uint32_t>>& layers,
                                  std::uint32_t radius) {
    std::vector<VertexId> out;
    for (const auto& [v, d] : layers) {
        if (d > radius) break;
        out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Tuple> map_tuples(const std::vector<Tuple>& local, std::span<const VertexId> emb) {
    std::vector<Tuple> out;
    out.reserve(local.size());
    for (const Tuple& t : local) {
        Tuple m(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) m[i] = emb[t[i]];
        out.push_back(std::move(m));
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool guard_true(const Guard& g, const Query& q, const std::vector<bool>& truth) {
    switch (g.kind) {
        case Guard::Kind::Name:
            for (std::size_t i = 0; i < q.sentences.size(); ++i)
                if (q.sentences[i].name == g.name) return truth[i];
            fail(ErrorCode::Internal, "guard sentence vanished");
        case Guard::Kind::Not:
            return !guard_true(g.kids[0], q, truth);
        case Guard::Kind::And:
            for (const auto& k : g.kids)
                if (!guard_true(k, q, truth)) return false;
            return true;
        case Guard::Kind::Or:
            for (const auto& k : g.kids)
                if (guard_true(k, q, truth)) return true;
            return false;
    }
    return false;
}

}  // namespace

Engine::Engine(const DynamicGraph& g, NormalizedQuery q, EngineMode mode)
    : g_(g.policy()), q_(std::move(q)), mode_(mode) {
    if (mode_ == EngineMode::BoundedDegree && g.policy().kind != DegreePolicy::Kind::Bounded)
        fail(ErrorCode::InvalidArgument, "the bounded-degree engine needs a Bounded policy");
    build_plans();

    max_impact_radius_ = 0;
    for (const auto& s : sources_)
        max_impact_radius_ = std::max(max_impact_radius_, s.cq.region_radius());
    max_impact_radius_ = std::max(max_impact_radius_, q_.rho);
    max_impact_radius_ = std::max(max_impact_radius_, q_.delta_radius);
    for (const auto& cs : cases_)
        for (const auto& cl : cs) max_impact_radius_ = std::max(max_impact_radius_, 2 * cl.r);

    if (mode_ == EngineMode::LowDegree) {
        preprocess_low(g);
    } else {
        preprocess_bounded(g);
    }
    refresh_sentences();
}

std::uint32_t Engine::register_source(const CenteredQuery& cq, bool need_list, bool need_skip,
                                      std::uint32_t skip_k) {
    std::string key = cq.key();
    auto it = source_by_key_.find(key);
    if (it == source_by_key_.end()) {
        Source s;
        s.cq = cq;
        it = source_by_key_.emplace(std::move(key), static_cast<std::uint32_t>(sources_.size())).first;
        sources_.push_back(std::move(s));
    }
    Source& s = sources_[it->second];
    s.need_list = s.need_list || need_list;
    s.need_skip = s.need_skip || need_skip;
    s.skip_k = std::max(s.skip_k, skip_k);
    return it->second;
}

void Engine::build_plans() {
    for (std::size_t si = 0; si < q_.query.sentences.size(); ++si) {
        const Sentence& sd = q_.query.sentences[si];
        SentencePlan sp;
        sp.s = sd.s;
        sp.r = sd.r;
        sp.source = register_source(CenteredQuery::unary(sd.alpha, sd.var, sd.r, sd.r),
                                    /*need_list=*/true, /*need_skip=*/false, 0);
        sentences_.push_back(sp);
    }
    cases_.resize(q_.query.cases.size());
    for (std::size_t ci = 0; ci < q_.query.cases.size(); ++ci) {
        const Case& cs = q_.query.cases[ci];
        for (std::size_t li = 0; li < cs.clauses.size(); ++li) {
            const Clause& cl = cs.clauses[li];
            const ClauseInfo& info = q_.case_info[ci][li];
            ClausePlan plan;
            plan.r = cl.r;
            plan.tau = cl.tau;
            std::uint32_t prefix_arity = 0;
            for (std::uint32_t gi = 0; gi < cl.groups.size(); ++gi) {
                GroupPlan gp;
                gp.first_pos = info.groups[gi].first_pos;
                gp.arity = info.groups[gi].arity;
                CenteredQuery cq = CenteredQuery::from_group(cl, gi, info.groups[gi]);
                bool needs_skip = gi > 0;
                gp.source = register_source(cq, /*need_list=*/true, needs_skip, prefix_arity);
                plan.groups.push_back(gp);
                prefix_arity += gp.arity;
            }
            if (!cl.groups.empty()) {
                plan.decomp = decompose(cl);
                for (const CenteredQuery& leaf : plan.decomp.leaves)
                    plan.leaf_sources.push_back(
                        register_source(leaf, /*need_list=*/false, /*need_skip=*/false, 0));
            }
            cases_[ci].push_back(std::move(plan));
        }
    }
}

void Engine::preprocess_low(const DynamicGraph& input) {
    for (Source& s : sources_) {
        s.index = std::make_unique<CenteredIndex>(s.cq);
        if (s.need_skip)
            s.skip = std::make_unique<SkipIndex>(g_, s.cq.arity, 2 * s.cq.r, s.skip_k);
    }
    for (VertexId v : input.vertex_ids_sorted())
        apply_single(UpdateOp::add_vertex(v, input.colors(v)));
    for (auto [u, v] : input.edges_sorted()) apply_single(UpdateOp::add_edge(u, v));
}

void Engine::preprocess_bounded(const DynamicGraph& input) {
    for (VertexId v : input.vertex_ids_sorted()) g_.apply(UpdateOp::add_vertex(v, input.colors(v)));
    for (auto [u, v] : input.edges_sorted()) g_.apply(UpdateOp::add_edge(u, v));

    catalog_ = std::make_unique<TypeCatalog>(q_.rho, q_.delta_radius);
    catalog_->build(g_);
    for (std::uint32_t sid = 0; sid < sources_.size(); ++sid) {
        Source& s = sources_[sid];
        if (s.need_list) {
            auto tuples = catalog_->alpha_list(s.cq, sid);
            for (const Tuple& t : tuples) s.list.insert(t);
            s.count = static_cast<long long>(s.list.size());
            if (s.need_skip) {
                s.skip = std::make_unique<SkipIndex>(g_, s.cq.arity, 2 * s.cq.r, s.skip_k);
                std::vector<Tuple> sorted(s.list.sorted().begin(), s.list.sorted().end());
                s.skip->build(sorted);
            }
        } else {
            s.count = catalog_->alpha_count(s.cq, sid);
        }
    }
}

void Engine::update(const UpdateOp& op) {
    g_.validate_op(op);
    if (op.kind == UpdateOp::Kind::RemoveVertex && g_.degree(op.a) > 0) {
        // Composite convenience removal: validated as a whole above, then
        // expanded into local steps.
        auto nbrs = g_.neighbors(op.a);
        std::vector<VertexId> copy(nbrs.begin(), nbrs.end());
        for (VertexId w : copy) apply_single(UpdateOp::remove_edge(op.a, w));
        apply_single(UpdateOp::remove_vertex(op.a));
    } else {
        apply_single(op);
    }
    refresh_sentences();
    ++version_;
}

void Engine::apply_single(const UpdateOp& op) {
    auto layers = g_.impacted_layers(op, max_impact_radius_);
    g_.apply(op);

    std::vector<TypeCatalog::Move> moves;
    if (mode_ == EngineMode::BoundedDegree) {
        moves = catalog_->refresh(g_, impacted_at(layers, q_.rho), impacted_at(layers, q_.delta_radius));
    }

    for (std::uint32_t sid = 0; sid < sources_.size(); ++sid) {
        Source& s = sources_[sid];
        std::vector<Tuple> added, removed;
        if (mode_ == EngineMode::LowDegree) {
            auto anchors = impacted_at(layers, s.cq.region_radius());
            auto diff = s.index->refresh(g_, anchors);
            added = std::move(diff.added);
            removed = std::move(diff.removed);
        } else {
            for (const auto& mv : moves) {
                std::vector<Tuple> old_tuples, new_tuples;
                if (mv.old_type) {
                    const auto& table = catalog_->sol(*mv.old_type, sid, s.cq);
                    old_tuples = map_tuples(table.tuples, mv.old_embedding);
                }
                if (mv.new_type) {
                    const auto& table = catalog_->sol(*mv.new_type, sid, s.cq);
                    new_tuples = map_tuples(table.tuples, catalog_->embedding(mv.v));
                }
                s.count += static_cast<long long>(new_tuples.size()) -
                           static_cast<long long>(old_tuples.size());
                if (s.need_list) {
                    std::set_difference(old_tuples.begin(), old_tuples.end(), new_tuples.begin(),
                                        new_tuples.end(), std::back_inserter(removed));
                    std::set_difference(new_tuples.begin(), new_tuples.end(), old_tuples.begin(),
                                        old_tuples.end(), std::back_inserter(added));
                }
            }
        }
        auto skip_dirty = s.skip ? impacted_at(layers, 2 * s.cq.r) : std::vector<VertexId>{};
        apply_source_diff(sid, added, removed, skip_dirty);
    }
}

void Engine::apply_source_diff(std::uint32_t sid, const std::vector<Tuple>& added,
                               const std::vector<Tuple>& removed,
                               const std::vector<VertexId>& skip_dirty) {
    Source& s = sources_[sid];
    if (mode_ == EngineMode::BoundedDegree && s.need_list) {
        for (const Tuple& t : removed) s.list.erase(t);
        for (const Tuple& t : added) s.list.insert(t);
        s.count = static_cast<long long>(s.list.size());
    }
    if (!s.skip) return;
    for (const Tuple& t : removed) s.skip->remove(t);
    for (const Tuple& t : added) s.skip->insert(t);
    if (!skip_dirty.empty()) {
        const SolutionList& list = source_list(sid);
        std::vector<Tuple> dirty;
        for (VertexId v : skip_dirty)
            for (const Tuple& t : list.tuples_containing(v)) dirty.push_back(t);
        std::sort(dirty.begin(), dirty.end());
        dirty.erase(std::unique(dirty.begin(), dirty.end()), dirty.end());
        s.skip->refresh_dirty(dirty);
    }
}

void Engine::refresh_sentences() {
    sentence_truth_.assign(sentences_.size(), false);
    for (std::size_t i = 0; i < sentences_.size(); ++i) {
        const SentencePlan& sp = sentences_[i];
        std::uint64_t cnt = static_cast<std::uint64_t>(source_count(sp.source));
        std::uint64_t threshold =
            static_cast<std::uint64_t>(sp.s) * ball_size_bound(d_cur(), 2 * sp.r);
        if (cnt > threshold) {
            sentence_truth_[i] = true;
        } else {
            sentence_truth_[i] = sentence_truth_slow(sp);
        }
    }
    active_case_ = q_.query.cases.size() - 1;
    for (std::size_t i = 0; i < q_.query.cases.size(); ++i) {
        const Case& cs = q_.query.cases[i];
        if (cs.is_else || guard_true(cs.guard, q_.query, sentence_truth_)) {
            active_case_ = i;
            break;
        }
    }
}

std::uint32_t Engine::d_cur() const {
    if (mode_ == EngineMode::BoundedDegree) return g_.policy().d;
    return g_.max_degree();
}

bool Engine::far_apart(VertexId a, VertexId b, std::uint32_t r) const {
    if (mode_ == EngineMode::BoundedDegree) {
        auto d = catalog_->delta_lookup(a, b);
        return !d || *d > 2 * r;
    }
    return !g_.distance_leq(a, b, 2 * r);
}

bool Engine::tuple_far(std::span<const VertexId> a, std::span<const VertexId> b,
                       std::uint32_t r) const {
    for (VertexId x : a)
        for (VertexId y : b)
            if (!far_apart(x, y, r)) return false;
    return true;
}

bool Engine::sentence_truth_slow(const SentencePlan& sp) const {
    const SolutionList& list = source_list(sp.source);
    std::vector<VertexId> sat;
    sat.reserve(list.size());
    for (const Tuple& t : list.sorted()) sat.push_back(t[0]);
    if (sp.s == 0) return true;
    std::vector<VertexId> chosen;
    std::function<bool(std::size_t)> rec = [&](std::size_t from) -> bool {
        if (chosen.size() == sp.s) return true;
        for (std::size_t i = from; i < sat.size(); ++i) {
            bool ok = true;
            for (VertexId u : chosen)
                if (!far_apart(u, sat[i], sp.r)) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            chosen.push_back(sat[i]);
            if (rec(i + 1)) return true;
            chosen.pop_back();
        }
        return false;
    };
    return rec(0);
}

bool Engine::check_sentence(std::string_view name) const {
    for (std::size_t i = 0; i < q_.query.sentences.size(); ++i)
        if (q_.query.sentences[i].name == name) return sentence_truth_[i];
    fail(ErrorCode::UnboundVariable, "no sentence named '" + std::string(name) + "'");
}

bool Engine::check_sentence_bruteforce(std::string_view name) const {
    for (std::size_t i = 0; i < q_.query.sentences.size(); ++i)
        if (q_.query.sentences[i].name == name) return sentence_truth_slow(sentences_[i]);
    fail(ErrorCode::UnboundVariable, "no sentence named '" + std::string(name) + "'");
}

bool Engine::check() const {
    if (q_.arity != 0)
        fail(ErrorCode::InvalidArgument, "check is defined for boolean queries; use count/test");
    return !cases_[active_case_].empty();
}

long long Engine::count() const {
    long long total = 0;
    for (const ClausePlan& plan : cases_[active_case_]) {
        if (plan.groups.empty()) {
            total += 1;  // the empty tuple
            continue;
        }
        std::vector<long long> leaf_counts;
        leaf_counts.reserve(plan.leaf_sources.size());
        for (std::uint32_t sid : plan.leaf_sources) leaf_counts.push_back(source_count(sid));
        total += evaluate(plan.decomp, leaf_counts);
    }
    return total;
}

const SolutionList& Engine::source_list(std::uint32_t sid) const {
    const Source& s = sources_[sid];
    if (mode_ == EngineMode::LowDegree) return s.index->list();
    return s.list;
}

long long Engine::source_count(std::uint32_t sid) const {
    const Source& s = sources_[sid];
    if (mode_ == EngineMode::LowDegree) return s.index->count();
    return s.count;
}

bool Engine::group_member(const ClausePlan& plan, std::size_t gi, const Tuple& sub) const {
    const GroupPlan& gp = plan.groups[gi];
    if (mode_ == EngineMode::LowDegree) return source_list(gp.source).contains(sub);
    // SOL-table lookup through the anchor's embedding.
    const TypeCatalog::TypeEntry* entry = catalog_->type_of(sub[0]);
    const TypeCatalog::SolTable* table = catalog_->sol_if_cached(*entry, gp.source);
    if (!table) fail(ErrorCode::Internal, "solution table missing for a realized type");
    auto emb = catalog_->embedding(sub[0]);
    Tuple local(sub.size());
    for (std::size_t i = 0; i < sub.size(); ++i) {
        bool found = false;
        for (std::uint32_t l = 0; l < emb.size(); ++l) {
            if (emb[l] == sub[i]) {
                local[i] = l;
                found = true;
                break;
            }
        }
        if (!found) return false;  // element outside the anchor's ball
    }
    return table->lookup.count(local) != 0;
}

bool Engine::test(std::span<const VertexId> tuple) const {
    if (tuple.size() != q_.arity) fail(ErrorCode::ArityMismatch, "tuple arity mismatch");
    for (VertexId v : tuple)
        if (!g_.has_vertex(v)) fail(ErrorCode::MissingVertex, "dead vertex " + std::to_string(v));

    const auto& clauses = cases_[active_case_];
    if (clauses.empty()) return false;
    if (q_.arity == 0) return true;  // a caseful boolean query holds

    // All clauses of a case share r, so one close-pair matrix serves them all.
    std::uint32_t r = clauses[0].r;
    std::uint32_t k = q_.arity;
    std::vector<bool> close(k * k, false);
    for (std::uint32_t i = 0; i < k; ++i)
        for (std::uint32_t j = i + 1; j < k; ++j) {
            bool c = !far_apart(tuple[i], tuple[j], r);
            close[i * k + j] = close[j * k + i] = c;
        }

    for (const ClausePlan& plan : clauses) {
        bool match = true;
        for (std::uint32_t i = 0; i < k && match; ++i)
            for (std::uint32_t j = i + 1; j < k; ++j)
                if (close[i * k + j] != plan.tau.has_edge(i, j)) {
                    match = false;
                    break;
                }
        if (!match) continue;
        bool all = true;
        for (std::size_t gi = 0; gi < plan.groups.size() && all; ++gi) {
            const GroupPlan& gp = plan.groups[gi];
            Tuple sub(tuple.begin() + gp.first_pos, tuple.begin() + gp.first_pos + gp.arity);
            all = group_member(plan, gi, sub);
        }
        if (all) return true;
        return false;  // distance types are exclusive; no other clause can match
    }
    return false;
}

std::uint64_t Engine::list_block_bound(const ClausePlan& plan, std::size_t level) const {
    const GroupPlan& gp = plan.groups[level];
    std::uint32_t others = q_.arity - gp.arity;
    std::uint64_t d = d_cur();
    std::uint64_t b = static_cast<std::uint64_t>(others) *
                      ball_size_bound(d, 2 * plan.r + 2 * gp.arity * plan.r);
    std::uint64_t per = ball_size_bound(d, 2 * gp.arity * plan.r);
    for (std::uint32_t i = 0; i + 1 < gp.arity; ++i) {
        if (per != 0 && b > std::numeric_limits<std::uint64_t>::max() / per)
            return std::numeric_limits<std::uint64_t>::max();
        b *= per;
    }
    return b;
}

bool Engine::completable(const ClausePlan& plan, std::size_t from_level,
                         std::span<const VertexId> prefix) const {
    std::vector<std::size_t> smalls;
    for (std::size_t lvl = from_level; lvl < plan.groups.size(); ++lvl) {
        if (source_list(plan.groups[lvl].source).size() <= list_block_bound(plan, lvl))
            smalls.push_back(lvl);
    }
    if (smalls.empty()) return true;

    std::vector<const SolutionList*> lists;
    for (std::size_t lvl : smalls) lists.push_back(&source_list(plan.groups[lvl].source));
    std::vector<Tuple> chosen;
    std::function<bool(std::size_t)> rec = [&](std::size_t si) -> bool {
        if (si == smalls.size()) return true;
        for (const Tuple& t : lists[si]->sorted()) {
            if (!tuple_far(prefix, t, plan.r)) continue;
            bool ok = true;
            for (const Tuple& c : chosen)
                if (!tuple_far(c, t, plan.r)) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            chosen.push_back(t);
            if (rec(si + 1)) return true;
            chosen.pop_back();
        }
        return false;
    };
    return rec(0);
}

void Engine::advance_clause(Cursor::ClauseCursor& cc) const {
    const ClausePlan& plan = cases_[active_case_][cc.clause];
    std::size_t p = plan.groups.size();
    cc.pending.reset();
    if (cc.exhausted || p == 0) {
        cc.exhausted = true;
        return;
    }
    cc.level.resize(p);

    auto prefix_elems = [&](std::size_t j) {
        std::vector<VertexId> out;
        for (std::size_t i = 0; i < j; ++i)
            out.insert(out.end(), cc.level[i].begin(), cc.level[i].end());
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    };

    auto first_candidate = [&](std::size_t j,
                               const std::vector<VertexId>& prefix) -> std::optional<Tuple> {
        const SolutionList& list = source_list(plan.groups[j].source);
        if (list.sorted().empty()) return std::nullopt;
        const Tuple& first = *list.sorted().begin();
        if (prefix.empty() || tuple_far(prefix, first, plan.r)) return first;
        return sources_[plan.groups[j].source].skip->skip(first, prefix);
    };
    auto next_candidate = [&](std::size_t j, const Tuple& cur,
                              const std::vector<VertexId>& prefix) -> std::optional<Tuple> {
        const SolutionList& list = source_list(plan.groups[j].source);
        if (j == 0 || prefix.empty()) {
            auto it = list.sorted().upper_bound(cur);
            if (it == list.sorted().end()) return std::nullopt;
            return *it;
        }
        return sources_[plan.groups[j].source].skip->skip(cur, prefix);
    };

    std::size_t j;
    bool fresh;  // take the first candidate at level j vs. advance past current
    if (!cc.primed) {
        cc.primed = true;
        j = 0;
        fresh = true;
    } else {
        j = p - 1;
        fresh = false;
    }

    while (true) {
        auto prefix = prefix_elems(j);
        std::optional<Tuple> cand =
            fresh ? first_candidate(j, prefix) : next_candidate(j, cc.level[j], prefix);
        while (cand) {
            cc.level[j] = *cand;
            if (j + 1 == p) {
                Tuple full;
                full.reserve(q_.arity);
                for (const Tuple& t : cc.level) full.insert(full.end(), t.begin(), t.end());
                cc.pending = std::move(full);
                return;
            }
            auto deeper_prefix = prefix_elems(j + 1);
            if (completable(plan, j + 1, deeper_prefix)) break;
            cand = next_candidate(j, cc.level[j], prefix);
        }
        if (cand) {
            ++j;
            fresh = true;
            continue;
        }
        if (j == 0) {
            cc.exhausted = true;
            return;
        }
        --j;
        fresh = false;
    }
}

Cursor Engine::open_cursor() const {
    Cursor cur;
    cur.eng_ = this;
    cur.version_ = version_;
    const auto& clauses = cases_[active_case_];
    if (q_.arity == 0) {
        cur.empty_tuple_pending_ = !clauses.empty();
        return cur;
    }
    cur.clauses_.resize(clauses.size());
    for (std::size_t i = 0; i < clauses.size(); ++i) {
        cur.clauses_[i].clause = i;
        advance_clause(cur.clauses_[i]);
    }
    return cur;
}

std::optional<Tuple> Cursor::next() {
    if (!eng_) fail(ErrorCode::InvalidArgument, "cursor not bound to an engine");
    if (version_ != eng_->version()) fail(ErrorCode::StaleCursor, "the engine was updated");
    if (done_) return std::nullopt;
    if (eng_->query().arity == 0) {
        done_ = true;
        if (empty_tuple_pending_) return Tuple{};
        return std::nullopt;
    }
    std::size_t best = clauses_.size();
    for (std::size_t i = 0; i < clauses_.size(); ++i) {
        if (!clauses_[i].pending) continue;
        if (best == clauses_.size() || *clauses_[i].pending < *clauses_[best].pending) best = i;
    }
    if (best == clauses_.size()) {
        done_ = true;
        return std::nullopt;
    }
    Tuple out = *clauses_[best].pending;
    eng_->advance_clause(clauses_[best]);
    return out;
}

}  // namespace dyncade
