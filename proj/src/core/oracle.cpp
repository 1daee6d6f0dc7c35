#include "oracle.hpp"

#include "local_eval.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <unordered_map>
#include <unordered_set>

namespace dyncade {

namespace {

// All-pairs shortest paths by |V| BFS runs; kNoDistance for unreachable.
constexpr std::uint32_t kNoDistance = std::numeric_limits<std::uint32_t>::max();

struct DistMatrix {
    std::vector<VertexId> ids;  // sorted
    std::unordered_map<VertexId, std::uint32_t> index;
    std::vector<std::uint32_t> d;  // n*n

    std::uint32_t at(VertexId a, VertexId b) const {
        return d[index.at(a) * ids.size() + index.at(b)];
    }
};

DistMatrix all_pairs(const DynamicGraph& g) {
    DistMatrix m;
    m.ids = g.vertex_ids_sorted();
    for (std::uint32_t i = 0; i < m.ids.size(); ++i) m.index.emplace(m.ids[i], i);
    std::size_t n = m.ids.size();
    m.d.assign(n * n, kNoDistance);
    for (std::size_t s = 0; s < n; ++s) {
        std::uint32_t* row = m.d.data() + s * n;
        row[s] = 0;
        std::deque<VertexId> q{m.ids[s]};
        while (!q.empty()) {
            VertexId v = q.front();
            q.pop_front();
            std::uint32_t dv = row[m.index.at(v)];
            for (VertexId w : g.neighbors(v)) {
                std::uint32_t& dw = row[m.index.at(w)];
                if (dw == kNoDistance) {
                    dw = dv + 1;
                    q.push_back(w);
                }
            }
        }
    }
    return m;
}

bool guard_holds(const Guard& gd, const Query& q, const std::vector<bool>& truth) {
    switch (gd.kind) {
        case Guard::Kind::Name:
            for (std::size_t i = 0; i < q.sentences.size(); ++i)
                if (q.sentences[i].name == gd.name) return truth[i];
            fail(ErrorCode::Internal, "guard sentence vanished");
        case Guard::Kind::Not:
            return !guard_holds(gd.kids[0], q, truth);
        case Guard::Kind::And:
            for (const auto& k : gd.kids)
                if (!guard_holds(k, q, truth)) return false;
            return true;
        case Guard::Kind::Or:
            for (const auto& k : gd.kids)
                if (guard_holds(k, q, truth)) return true;
            return false;
    }
    return false;
}

// Exhaustive search for s vertices of `candidates`, pairwise farther than 2r.
bool scattered_exists(const DistMatrix& m, const std::vector<VertexId>& candidates, std::uint32_t s,
                      std::uint32_t r) {
    if (s == 0) return true;
    std::vector<VertexId> chosen;
    auto far = [&](VertexId v) {
        for (VertexId u : chosen) {
            std::uint32_t d = m.at(u, v);
            if (d != kNoDistance && d <= 2 * r) return false;
        }
        return true;
    };
    std::function<bool(std::size_t)> rec = [&](std::size_t from) -> bool {
        if (chosen.size() == s) return true;
        for (std::size_t i = from; i < candidates.size(); ++i) {
            if (!far(candidates[i])) continue;
            chosen.push_back(candidates[i]);
            if (rec(i + 1)) return true;
            chosen.pop_back();
        }
        return false;
    };
    return rec(0);
}

bool sentence_holds(const DynamicGraph& g, const DistMatrix& m, const Sentence& s) {
    std::vector<VertexId> sat;
    for (VertexId v : m.ids) {
        Assignment sigma;
        sigma.push(s.var, v);
        if (eval_local(g, s.alpha, sigma)) sat.push_back(v);
    }
    return scattered_exists(m, sat, s.s, s.r);
}

}  // namespace

OracleResult oracle_evaluate(const DynamicGraph& g, const NormalizedQuery& nq) {
    const Query& q = nq.query;
    OracleResult out;
    DistMatrix m = all_pairs(g);

    for (const auto& s : q.sentences) out.sentence_truth.push_back(sentence_holds(g, m, s));

    out.active_case = q.cases.size() - 1;
    for (std::size_t i = 0; i < q.cases.size(); ++i) {
        if (q.cases[i].is_else || guard_holds(q.cases[i].guard, q, out.sentence_truth)) {
            out.active_case = i;
            break;
        }
    }

    const Case& active = q.cases[out.active_case];
    std::uint32_t k = nq.arity;
    std::size_t n = m.ids.size();

    std::unordered_set<Tuple, TupleHash> seen;
    for (const Clause& cl : active.clauses) {
        if (k == 0) {
            // A clause with no groups is satisfied by the empty tuple.
            seen.insert(Tuple{});
            continue;
        }
        if (n == 0) continue;

        // Per-group solution sets, then a filtered pass over all |V|^k tuples.
        std::vector<std::unordered_set<Tuple, TupleHash>> group_sols;
        std::uint32_t pos = 0;
        for (const Group& grp : cl.groups) {
            std::uint32_t kg = static_cast<std::uint32_t>(grp.vars.size());
            std::unordered_set<Tuple, TupleHash> sols;
            Tuple t(kg);
            std::function<void(std::uint32_t)> rec = [&](std::uint32_t i) {
                if (i == kg) {
                    Assignment sigma;
                    for (std::uint32_t j = 0; j < kg; ++j) sigma.push(grp.vars[j], t[j]);
                    if (eval_local(g, grp.formula, sigma)) sols.insert(t);
                    return;
                }
                for (VertexId v : m.ids) {
                    t[i] = v;
                    rec(i + 1);
                }
            };
            rec(0);
            group_sols.push_back(std::move(sols));
            pos += kg;
        }
        (void)pos;

        Tuple full(k);
        std::function<void(std::uint32_t)> rec = [&](std::uint32_t i) {
            if (i == k) {
                // Exact distance type at threshold 2r.
                for (std::uint32_t a = 0; a < k; ++a)
                    for (std::uint32_t b = a + 1; b < k; ++b) {
                        std::uint32_t d = m.at(full[a], full[b]);
                        bool close = d != kNoDistance && d <= 2 * cl.r;
                        if (close != cl.tau.has_edge(a, b)) return;
                    }
                std::uint32_t off = 0;
                for (std::size_t gi = 0; gi < cl.groups.size(); ++gi) {
                    std::uint32_t kg = static_cast<std::uint32_t>(cl.groups[gi].vars.size());
                    Tuple sub(full.begin() + off, full.begin() + off + kg);
                    if (!group_sols[gi].count(sub)) return;
                    off += kg;
                }
                seen.insert(full);
                return;
            }
            for (VertexId v : m.ids) {
                full[i] = v;
                rec(i + 1);
            }
        };
        rec(0);
    }

    out.answers.assign(seen.begin(), seen.end());
    std::sort(out.answers.begin(), out.answers.end());
    return out;
}

std::vector<Tuple> oracle_answers(const DynamicGraph& g, const NormalizedQuery& q) {
    return oracle_evaluate(g, q).answers;
}

bool oracle_check_sentence(const DynamicGraph& g, const NormalizedQuery& nq, const std::string& name) {
    DistMatrix m = all_pairs(g);
    for (const auto& s : nq.query.sentences)
        if (s.name == name) return sentence_holds(g, m, s);
    fail(ErrorCode::UnboundVariable, "no sentence named '" + name + "'");
}

long long oracle_count(const DynamicGraph& g, const NormalizedQuery& q) {
    return static_cast<long long>(oracle_evaluate(g, q).answers.size());
}

}  // namespace dyncade
