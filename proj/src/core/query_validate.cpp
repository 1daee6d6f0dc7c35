#include "query.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace dyncade {

namespace {

// Depth of a variable = guaranteed bound on its distance from the formula's
// free variables. A quantifier (exists y n (anchors a...)) puts y at
// n + max depth(a); a (distle n u v) atom is decidable inside a ball of
// radius max depth(u,v) + n around the free variables.
struct ReachWalker {
    std::map<std::string, std::uint32_t> depth;

    std::uint32_t var_depth(const std::string& v, const Formula& f) const {
        auto it = depth.find(v);
        if (it == depth.end())
            fail(ErrorCode::UnboundVariable, "unbound variable '" + v + "'", f.line, f.col);
        return it->second;
    }

    std::uint32_t walk(const Formula& f) {
        switch (f.kind) {
            case FormKind::Eq:
            case FormKind::Edge:
                return std::max(var_depth(f.v1, f), var_depth(f.v2, f));
            case FormKind::Color:
                return var_depth(f.v1, f);
            case FormKind::DistLeq:
                return std::max(var_depth(f.v1, f), var_depth(f.v2, f)) + f.bound;
            case FormKind::Not:
                return walk(f.kids[0]);
            case FormKind::And:
            case FormKind::Or: {
                std::uint32_t m = 0;
                for (const auto& k : f.kids) m = std::max(m, walk(k));
                return m;
            }
            case FormKind::Exists:
            case FormKind::Forall: {
                if (depth.count(f.qvar))
                    fail(ErrorCode::DuplicateName, "variable '" + f.qvar + "' shadows an enclosing binding",
                         f.line, f.col);
                std::uint32_t base = 0;
                for (const auto& a : f.anchors) base = std::max(base, var_depth(a, f));
                std::uint32_t dq = base + f.bound;
                depth.emplace(f.qvar, dq);
                std::uint32_t inner = walk(f.kids[0]);
                depth.erase(f.qvar);
                return std::max(dq, inner);
            }
        }
        return 0;
    }
};

void collect_vars(const Formula& f, std::set<std::string>& bound, std::set<std::string>& free) {
    auto use = [&](const std::string& v) {
        if (!bound.count(v)) free.insert(v);
    };
    switch (f.kind) {
        case FormKind::Eq:
        case FormKind::Edge:
        case FormKind::DistLeq:
            use(f.v1);
            use(f.v2);
            break;
        case FormKind::Color:
            use(f.v1);
            break;
        case FormKind::Not:
        case FormKind::And:
        case FormKind::Or:
            for (const auto& k : f.kids) collect_vars(k, bound, free);
            break;
        case FormKind::Exists:
        case FormKind::Forall:
            for (const auto& a : f.anchors) use(a);
            bound.insert(f.qvar);
            collect_vars(f.kids[0], bound, free);
            bound.erase(f.qvar);
            break;
    }
}

void collect_colors(const Formula& f, std::set<std::string>& out) {
    if (f.kind == FormKind::Color) out.insert(f.name);
    for (const auto& k : f.kids) collect_colors(k, out);
}

void check_guard(const Guard& g, const std::set<std::string>& sentence_names) {
    if (g.kind == Guard::Kind::Name) {
        if (g.name == "else")
            fail(ErrorCode::SyntaxError, "'else' is not a sentence name", g.line, g.col);
        if (!sentence_names.count(g.name))
            fail(ErrorCode::UnboundVariable, "guard references undefined sentence '" + g.name + "'",
                 g.line, g.col);
        return;
    }
    for (const auto& k : g.kids) check_guard(k, sentence_names);
}

}  // namespace

std::uint32_t formula_reach(const Formula& f, const std::vector<std::string>& free_vars) {
    ReachWalker w;
    for (const auto& v : free_vars) w.depth.emplace(v, 0);
    return w.walk(f);
}

std::vector<std::string> formula_free_vars(const Formula& f) {
    std::set<std::string> bound, free;
    collect_vars(f, bound, free);
    return {free.begin(), free.end()};
}

NormalizedQuery validate(Query q) {
    NormalizedQuery nq;
    nq.arity = static_cast<std::uint32_t>(q.vars.size());

    {
        std::set<std::string> seen;
        for (const auto& v : q.vars)
            if (!seen.insert(v).second)
                fail(ErrorCode::DuplicateName, "duplicate query variable '" + v + "'");
    }

    std::set<std::string> sentence_names;
    std::set<std::string> colors;
    for (auto& s : q.sentences) {
        if (!sentence_names.insert(s.name).second)
            fail(ErrorCode::DuplicateName, "duplicate sentence name '" + s.name + "'", s.line, s.col);
        auto free = formula_free_vars(s.alpha);
        if (free.size() != 1)
            fail(ErrorCode::UnboundVariable,
                 "sentence '" + s.name + "' needs exactly one free variable", s.line, s.col);
        s.var = free[0];
        std::uint32_t reach = formula_reach(s.alpha, free);
        if (reach > s.r)
            fail(ErrorCode::RadiusExceeded,
                 "sentence '" + s.name + "' reach " + std::to_string(reach) + " exceeds radius " +
                     std::to_string(s.r),
                 s.line, s.col);
        collect_colors(s.alpha, colors);
        nq.sentence_radii.push_back(s.r);
    }

    if (q.cases.empty()) fail(ErrorCode::SyntaxError, "query needs at least one case");
    for (std::size_t i = 0; i < q.cases.size(); ++i) {
        const Case& c = q.cases[i];
        bool last = i + 1 == q.cases.size();
        if (last && !c.is_else)
            fail(ErrorCode::SyntaxError, "final case must be 'else'", c.line, c.col);
        if (!last && c.is_else)
            fail(ErrorCode::SyntaxError, "'else' case must be last", c.line, c.col);
        if (!c.is_else) check_guard(c.guard, sentence_names);
    }

    std::uint32_t rho = 0;
    for (std::uint32_t r : nq.sentence_radii) rho = std::max(rho, r);
    std::uint32_t max_2r = 0;
    for (std::uint32_t r : nq.sentence_radii) max_2r = std::max(max_2r, 2 * r);

    nq.case_info.resize(q.cases.size());
    for (std::size_t ci = 0; ci < q.cases.size(); ++ci) {
        Case& c = q.cases[ci];
        std::set<std::vector<std::pair<std::uint32_t, std::uint32_t>>> taus_seen;
        std::uint32_t case_r = 0;
        for (std::size_t li = 0; li < c.clauses.size(); ++li) {
            Clause& cl = c.clauses[li];
            if (li == 0) {
                case_r = cl.r;
            } else if (cl.r != case_r) {
                fail(ErrorCode::MixedClauseRadii,
                     "clauses within one case must share the locality radius", cl.line, cl.col);
            }

            // Groups must partition the query variables into contiguous blocks
            // in variable order.
            std::vector<std::string> concat;
            for (const auto& g : cl.groups)
                for (const auto& v : g.vars) concat.push_back(v);
            if (concat != q.vars)
                fail(ErrorCode::NonContiguousGroups,
                     "clause groups must list the query variables in order", cl.line, cl.col);
            if (q.vars.empty() && !cl.groups.empty())
                fail(ErrorCode::NonContiguousGroups, "clause has groups but the query has no variables",
                     cl.line, cl.col);

            std::uint32_t k = nq.arity;
            cl.tau.k = k;
            for (auto [a, b] : cl.tau.edges) {
                if (a >= k || b >= k)
                    fail(ErrorCode::ComponentMismatch, "tau position out of range", cl.line, cl.col);
                if (a == b)
                    fail(ErrorCode::ComponentMismatch, "tau pair is reflexive", cl.line, cl.col);
            }

            // Components of tau must be exactly the group blocks.
            ClauseInfo info;
            std::uint32_t pos = 0;
            std::vector<std::uint32_t> owner(k);
            for (std::uint32_t gi = 0; gi < cl.groups.size(); ++gi) {
                const Group& g = cl.groups[gi];
                GroupInfo gin;
                gin.first_pos = pos;
                gin.arity = static_cast<std::uint32_t>(g.vars.size());
                gin.eval_radius = 2 * cl.r * gin.arity + g.declared_radius;
                for (std::uint32_t j = 0; j < gin.arity; ++j) owner[pos + j] = gi;
                pos += gin.arity;
                info.groups.push_back(gin);
            }
            for (auto [a, b] : cl.tau.edges)
                if (owner[a] != owner[b])
                    fail(ErrorCode::ComponentMismatch, "tau connects variables of different groups",
                         cl.line, cl.col);
            auto comps = cl.tau.components();
            for (const auto& comp : comps) {
                // Every component lies inside one group; require it to be the
                // whole group.
                std::uint32_t gi = owner[comp[0]];
                if (comp.size() != info.groups[gi].arity)
                    fail(ErrorCode::ComponentMismatch,
                         "tau restricted to a group must be connected", cl.line, cl.col);
            }

            // Group formulas: free vars exactly the group vars; reach within
            // the declared radius.
            std::uint32_t max_rg = 0;
            for (std::uint32_t gi = 0; gi < cl.groups.size(); ++gi) {
                const Group& g = cl.groups[gi];
                std::set<std::string> gvars(g.vars.begin(), g.vars.end());
                if (gvars.size() != g.vars.size())
                    fail(ErrorCode::DuplicateName, "duplicate variable in group", cl.line, cl.col);
                auto free = formula_free_vars(g.formula);
                for (const auto& v : free)
                    if (!gvars.count(v))
                        fail(ErrorCode::UnboundVariable,
                             "group formula uses variable '" + v + "' outside the group", cl.line,
                             cl.col);
                std::uint32_t reach = formula_reach(g.formula, g.vars);
                if (reach > g.declared_radius)
                    fail(ErrorCode::RadiusExceeded,
                         "group reach " + std::to_string(reach) + " exceeds declared radius " +
                             std::to_string(g.declared_radius),
                         cl.line, cl.col);
                collect_colors(g.formula, colors);
                max_rg = std::max(max_rg, g.declared_radius);
            }

            if (!taus_seen.insert(cl.tau.edges).second)
                fail(ErrorCode::TauClash, "two clauses in one case share a distance type", cl.line,
                     cl.col);

            // Type radius must cover the merged-group evaluation region used
            // by the counting decomposition: spread 2r(k-1) plus formula reach.
            if (k > 0)
                rho = std::max(rho, 2 * cl.r * (k - 1) + std::max(cl.r, max_rg));
            else
                rho = std::max(rho, cl.r);
            max_2r = std::max(max_2r, 2 * cl.r);
            nq.max_clause_r = std::max(nq.max_clause_r, cl.r);
            nq.case_info[ci].push_back(std::move(info));
        }
    }

    nq.rho = rho;
    nq.delta_radius = std::max(max_2r, rho);
    nq.color_names.assign(colors.begin(), colors.end());
    nq.query = std::move(q);
    return nq;
}

}  // namespace dyncade
