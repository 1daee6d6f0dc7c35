#pragma once

#include "errors.hpp"
#include "ids.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace dyncade {

enum class FormKind { Eq, Edge, Color, DistLeq, Not, And, Or, Exists, Forall };

// Local formula AST. Quantifiers are relativized: (exists (y n (anchors a...)) body)
// ranges over vertices within distance n of some anchor value.
struct Formula {
    FormKind kind = FormKind::Eq;
    std::string name;                  // color name
    std::string v1, v2;                // operand variables (Color uses v1)
    std::uint32_t bound = 0;           // DistLeq bound / quantifier radius
    std::string qvar;                  // quantified variable
    std::vector<std::string> anchors;  // quantifier anchors
    std::vector<Formula> kids;
    int line = 0, col = 0;

    bool equals(const Formula& o) const;  // structural, ignores positions
};

Formula f_eq(std::string a, std::string b);
Formula f_edge(std::string a, std::string b);
Formula f_color(std::string name, std::string v);
Formula f_distle(std::uint32_t n, std::string a, std::string b);
Formula f_not(Formula f);
Formula f_and(std::vector<Formula> kids);
Formula f_or(std::vector<Formula> kids);
Formula f_exists(std::string var, std::uint32_t radius, std::vector<std::string> anchors, Formula body);
Formula f_forall(std::string var, std::uint32_t radius, std::vector<std::string> anchors, Formula body);

// Undirected, irreflexive graph on tuple positions [0..k). Edges normalized
// to first < second, sorted, duplicate-free.
struct DistanceType {
    std::uint32_t k = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;

    bool operator==(const DistanceType&) const = default;
    void normalize();
    bool has_edge(std::uint32_t i, std::uint32_t j) const;
    // Connected components as sorted position sets, ordered by least member.
    std::vector<std::vector<std::uint32_t>> components() const;
    // Restriction to a sorted subset of positions, reindexed to [0..subset size).
    DistanceType restrict_to(const std::vector<std::uint32_t>& positions) const;
};

struct Group {
    std::vector<std::string> vars;      // ordered, nonempty
    Formula formula;                    // free vars exactly `vars`
    std::uint32_t declared_radius = 0;  // quantifier reach bound
    bool radius_explicit = false;       // false: defaulted to clause r at parse
};

struct Clause {
    std::uint32_t r = 0;  // locality radius; the distance-type threshold is 2r
    std::vector<Group> groups;
    DistanceType tau;  // over all clause variables
    int line = 0, col = 0;
};

// "There exist s vertices, pairwise at distance > 2r, each satisfying alpha."
struct Sentence {
    std::string name;
    std::uint32_t s = 0;
    std::uint32_t r = 0;
    Formula alpha;     // exactly one free variable
    std::string var;   // that variable (derived at validation)
    int line = 0, col = 0;
};

struct Guard {
    enum class Kind { Name, Not, And, Or };
    Kind kind = Kind::Name;
    std::string name;
    std::vector<Guard> kids;
    int line = 0, col = 0;

    bool equals(const Guard& o) const;
};

struct Case {
    bool is_else = false;
    Guard guard;  // meaningful when !is_else
    std::vector<Clause> clauses;
    int line = 0, col = 0;
};

struct Query {
    std::vector<std::string> vars;  // free variables; may be empty
    std::vector<Sentence> sentences;
    std::vector<Case> cases;

    bool equals(const Query& o) const;
};

// Derived per-group data after validation.
struct GroupInfo {
    std::uint32_t first_pos = 0;  // offset of the group's block in the clause variables
    std::uint32_t arity = 0;
    std::uint32_t eval_radius = 0;  // 2 * r * arity + declared_radius
};

struct ClauseInfo {
    std::vector<GroupInfo> groups;
};

struct NormalizedQuery {
    Query query;
    std::uint32_t arity = 0;
    std::vector<std::vector<ClauseInfo>> case_info;  // parallel to query.cases
    // Neighborhood-type radius: covers every per-group and merged-group
    // evaluation region and every sentence radius.
    std::uint32_t rho = 0;
    // Pair-distance table radius: max(2r over clauses, 2r over sentences, rho).
    std::uint32_t delta_radius = 0;
    std::uint32_t max_clause_r = 0;
    std::vector<std::uint32_t> sentence_radii;
    std::vector<std::string> color_names;  // every color mentioned, sorted
};

// Parses the s-expression query text. Throws EngineError with line/col.
Query parse_query(std::string_view text);

// Canonical text form; parse_query(print_query(q)).equals(q) holds.
std::string print_query(const Query& q);
std::string print_formula(const Formula& f);

// Checks all structural invariants and computes derived radii.
NormalizedQuery validate(Query q);

// Quantifier reach of a formula whose free variables sit at depth 0.
// Throws UnboundVariable / DuplicateName (shadowing) for scope errors.
std::uint32_t formula_reach(const Formula& f, const std::vector<std::string>& free_vars);

// Free variables actually used, sorted.
std::vector<std::string> formula_free_vars(const Formula& f);

}  // namespace dyncade
