#include "centered.hpp"

#include <map>
#include <sstream>

namespace dyncade {

namespace {

// Prints a formula with variables renamed positionally, so keys identify
// conjunctions up to variable naming.
void canonical_formula(const Formula& f, std::map<std::string, std::string>& rename,
                       std::uint32_t& bound_counter, std::ostringstream& os) {
    auto nm = [&](const std::string& v) -> const std::string& { return rename.at(v); };
    switch (f.kind) {
        case FormKind::Eq: os << "(= " << nm(f.v1) << ' ' << nm(f.v2) << ')'; return;
        case FormKind::Edge: os << "(edge " << nm(f.v1) << ' ' << nm(f.v2) << ')'; return;
        case FormKind::Color: os << "(color " << f.name << ' ' << nm(f.v1) << ')'; return;
        case FormKind::DistLeq:
            os << "(distle " << f.bound << ' ' << nm(f.v1) << ' ' << nm(f.v2) << ')';
            return;
        case FormKind::Not:
            os << "(not ";
            canonical_formula(f.kids[0], rename, bound_counter, os);
            os << ')';
            return;
        case FormKind::And:
        case FormKind::Or:
            os << (f.kind == FormKind::And ? "(and" : "(or");
            for (const auto& k : f.kids) {
                os << ' ';
                canonical_formula(k, rename, bound_counter, os);
            }
            os << ')';
            return;
        case FormKind::Exists:
        case FormKind::Forall: {
            std::string fresh = "b" + std::to_string(bound_counter++);
            os << (f.kind == FormKind::Exists ? "(exists (" : "(forall (") << fresh << ' '
               << f.bound << " (anchors";
            for (const auto& a : f.anchors) os << ' ' << nm(a);
            os << ")) ";
            rename.emplace(f.qvar, fresh);
            canonical_formula(f.kids[0], rename, bound_counter, os);
            rename.erase(f.qvar);
            os << ')';
            return;
        }
    }
}

}  // namespace

std::uint32_t CenteredQuery::max_part_radius() const {
    std::uint32_t m = 0;
    for (const auto& p : parts) m = std::max(m, p.declared_radius);
    return m;
}

std::uint32_t CenteredQuery::region_radius() const {
    return spread() + std::max(r, max_part_radius());
}

std::string CenteredQuery::key() const {
    std::ostringstream os;
    os << "k" << arity << " r" << r << " tau";
    for (auto [i, j] : tau.edges) os << '(' << i << ',' << j << ')';
    // Parts are keyed up to variable naming (free vars by tuple position,
    // bound vars by traversal order) and listed in a canonical order, so
    // structurally equal conjunctions dedup.
    std::vector<std::string> printed;
    for (const auto& p : parts) {
        std::ostringstream ps;
        ps << " part rg" << p.declared_radius << " | ";
        std::map<std::string, std::string> rename;
        for (std::size_t i = 0; i < p.vars.size(); ++i)
            rename.emplace(p.vars[i], "p" + std::to_string(p.positions[i]));
        std::uint32_t bound_counter = 0;
        canonical_formula(p.formula, rename, bound_counter, ps);
        printed.push_back(ps.str());
    }
    std::sort(printed.begin(), printed.end());
    for (const auto& s : printed) os << s;
    return os.str();
}

CenteredQuery CenteredQuery::from_group(const Clause& cl, std::uint32_t group_index,
                                        const GroupInfo& info) {
    CenteredQuery q;
    q.arity = info.arity;
    q.r = cl.r;
    const Group& g = cl.groups[group_index];
    Part p;
    p.formula = g.formula;
    p.vars = g.vars;
    p.declared_radius = g.declared_radius;
    for (std::uint32_t i = 0; i < info.arity; ++i) p.positions.push_back(i);
    q.parts.push_back(std::move(p));
    std::vector<std::uint32_t> block(info.arity);
    for (std::uint32_t i = 0; i < info.arity; ++i) block[i] = info.first_pos + i;
    q.tau = cl.tau.restrict_to(block);
    return q;
}

CenteredQuery CenteredQuery::unary(const Formula& alpha, const std::string& var, std::uint32_t r,
                                   std::uint32_t declared_radius) {
    CenteredQuery q;
    q.arity = 1;
    q.r = r;
    Part p;
    p.formula = alpha;
    p.vars = {var};
    p.positions = {0};
    p.declared_radius = declared_radius;
    q.parts.push_back(std::move(p));
    q.tau.k = 1;
    return q;
}

const std::set<Tuple>& SolutionList::anchored_at(VertexId v) const {
    static const std::set<Tuple> kEmpty;
    auto it = by_anchor_.find(v);
    return it == by_anchor_.end() ? kEmpty : it->second;
}

std::vector<Tuple> SolutionList::tuples_containing(VertexId v) const {
    auto it = by_element_.find(v);
    if (it == by_element_.end()) return {};
    std::vector<Tuple> out(it->second.begin(), it->second.end());
    std::sort(out.begin(), out.end());
    return out;
}

bool SolutionList::insert(const Tuple& t) {
    if (!members_.insert(t).second) return false;
    sorted_.insert(t);
    by_anchor_[t.front()].insert(t);
    for (VertexId v : t) by_element_[v].insert(t);
    return true;
}

bool SolutionList::erase(const Tuple& t) {
    if (!members_.erase(t)) return false;
    sorted_.erase(t);
    auto a = by_anchor_.find(t.front());
    a->second.erase(t);
    if (a->second.empty()) by_anchor_.erase(a);
    for (VertexId v : t) {
        auto e = by_element_.find(v);
        if (e == by_element_.end()) continue;  // repeated element, already dropped
        e->second.erase(t);
        if (e->second.empty()) by_element_.erase(e);
    }
    return true;
}

CenteredIndex CenteredIndex::build(const DynamicGraph& g, CenteredQuery q) {
    CenteredIndex idx(std::move(q));
    DynamicGraph replay(g.policy());
    for (VertexId v : g.vertex_ids_sorted())
        idx.on_update(replay, UpdateOp::add_vertex(v, g.colors(v)));
    for (auto [u, v] : g.edges_sorted()) idx.on_update(replay, UpdateOp::add_edge(u, v));
    return idx;
}

CenteredIndex::Diff CenteredIndex::on_update(DynamicGraph& g, const UpdateOp& op) {
    auto anchors = g.impacted(op, q_.region_radius());
    g.apply(op);
    return refresh(g, anchors);
}

CenteredIndex::Diff CenteredIndex::refresh(const DynamicGraph& g_after,
                                           std::span<const VertexId> anchors) {
    Diff diff;
    for (VertexId a : anchors) {
        std::vector<Tuple> fresh;
        if (g_after.has_vertex(a)) fresh = solve_anchored(g_after, q_, a);
        const auto& old = list_.anchored_at(a);
        // old is sorted (std::set), fresh is sorted.
        std::vector<Tuple> to_remove;
        std::set_difference(old.begin(), old.end(), fresh.begin(), fresh.end(),
                            std::back_inserter(to_remove));
        for (const Tuple& t : fresh)
            if (!list_.contains(t)) {
                list_.insert(t);
                diff.added.push_back(t);
            }
        for (const Tuple& t : to_remove) {
            list_.erase(t);
            diff.removed.push_back(t);
        }
    }
    return diff;
}

}  // namespace dyncade
