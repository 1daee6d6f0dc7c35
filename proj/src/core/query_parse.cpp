#include "query.hpp"

#include <algorithm>
#include <charconv>
#include <memory>
#include <sstream>

namespace dyncade {

Formula f_eq(std::string a, std::string b) {
    Formula f;
    f.kind = FormKind::Eq;
    f.v1 = std::move(a);
    f.v2 = std::move(b);
    return f;
}
Formula f_edge(std::string a, std::string b) {
    Formula f;
    f.kind = FormKind::Edge;
    f.v1 = std::move(a);
    f.v2 = std::move(b);
    return f;
}
Formula f_color(std::string name, std::string v) {
    Formula f;
    f.kind = FormKind::Color;
    f.name = std::move(name);
    f.v1 = std::move(v);
    return f;
}
Formula f_distle(std::uint32_t n, std::string a, std::string b) {
    Formula f;
    f.kind = FormKind::DistLeq;
    f.bound = n;
    f.v1 = std::move(a);
    f.v2 = std::move(b);
    return f;
}
Formula f_not(Formula inner) {
    Formula f;
    f.kind = FormKind::Not;
    f.kids.push_back(std::move(inner));
    return f;
}
Formula f_and(std::vector<Formula> kids) {
    Formula f;
    f.kind = FormKind::And;
    f.kids = std::move(kids);
    return f;
}
Formula f_or(std::vector<Formula> kids) {
    Formula f;
    f.kind = FormKind::Or;
    f.kids = std::move(kids);
    return f;
}
Formula f_exists(std::string var, std::uint32_t radius, std::vector<std::string> anchors, Formula body) {
    Formula f;
    f.kind = FormKind::Exists;
    f.qvar = std::move(var);
    f.bound = radius;
    f.anchors = std::move(anchors);
    f.kids.push_back(std::move(body));
    return f;
}
Formula f_forall(std::string var, std::uint32_t radius, std::vector<std::string> anchors, Formula body) {
    Formula f = f_exists(std::move(var), radius, std::move(anchors), std::move(body));
    f.kind = FormKind::Forall;
    return f;
}

bool Formula::equals(const Formula& o) const {
    if (kind != o.kind || name != o.name || v1 != o.v1 || v2 != o.v2 || bound != o.bound ||
        qvar != o.qvar || anchors != o.anchors || kids.size() != o.kids.size())
        return false;
    for (std::size_t i = 0; i < kids.size(); ++i)
        if (!kids[i].equals(o.kids[i])) return false;
    return true;
}

bool Guard::equals(const Guard& o) const {
    if (kind != o.kind || name != o.name || kids.size() != o.kids.size()) return false;
    for (std::size_t i = 0; i < kids.size(); ++i)
        if (!kids[i].equals(o.kids[i])) return false;
    return true;
}

bool Query::equals(const Query& o) const {
    if (vars != o.vars || sentences.size() != o.sentences.size() || cases.size() != o.cases.size())
        return false;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        const auto& a = sentences[i];
        const auto& b = o.sentences[i];
        if (a.name != b.name || a.s != b.s || a.r != b.r || !a.alpha.equals(b.alpha)) return false;
    }
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto& a = cases[i];
        const auto& b = o.cases[i];
        if (a.is_else != b.is_else || a.clauses.size() != b.clauses.size()) return false;
        if (!a.is_else && !a.guard.equals(b.guard)) return false;
        for (std::size_t j = 0; j < a.clauses.size(); ++j) {
            const auto& ca = a.clauses[j];
            const auto& cb = b.clauses[j];
            if (ca.r != cb.r || !(ca.tau == cb.tau) || ca.groups.size() != cb.groups.size())
                return false;
            for (std::size_t k = 0; k < ca.groups.size(); ++k) {
                const auto& ga = ca.groups[k];
                const auto& gb = cb.groups[k];
                if (ga.vars != gb.vars || ga.declared_radius != gb.declared_radius ||
                    !ga.formula.equals(gb.formula))
                    return false;
            }
        }
    }
    return true;
}

void DistanceType::normalize() {
    for (auto& [i, j] : edges)
        if (i > j) std::swap(i, j);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

bool DistanceType::has_edge(std::uint32_t i, std::uint32_t j) const {
    if (i > j) std::swap(i, j);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(i, j));
}

std::vector<std::vector<std::uint32_t>> DistanceType::components() const {
    std::vector<std::uint32_t> parent(k);
    for (std::uint32_t i = 0; i < k; ++i) parent[i] = i;
    auto find = [&](std::uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto [i, j] : edges) parent[find(i)] = find(j);
    std::vector<std::vector<std::uint32_t>> comps;
    std::vector<int> slot(k, -1);
    for (std::uint32_t i = 0; i < k; ++i) {
        std::uint32_t root = find(i);
        if (slot[root] < 0) {
            slot[root] = static_cast<int>(comps.size());
            comps.emplace_back();
        }
        comps[slot[root]].push_back(i);
    }
    return comps;
}

DistanceType DistanceType::restrict_to(const std::vector<std::uint32_t>& positions) const {
    DistanceType out;
    out.k = static_cast<std::uint32_t>(positions.size());
    std::vector<int> where(k, -1);
    for (std::uint32_t i = 0; i < positions.size(); ++i) where[positions[i]] = static_cast<int>(i);
    for (auto [i, j] : edges)
        if (where[i] >= 0 && where[j] >= 0)
            out.edges.emplace_back(static_cast<std::uint32_t>(where[i]),
                                   static_cast<std::uint32_t>(where[j]));
    out.normalize();
    return out;
}

namespace {

// --- s-expression reader -------------------------------------------------

struct Node {
    bool is_atom = false;
    std::string atom;
    std::vector<Node> kids;
    int line = 1, col = 1;
};

struct Lexer {
    std::string_view text;
    std::size_t pos = 0;
    int line = 1, col = 1;

    void advance() {
        if (text[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }
    void skip_space() {
        while (pos < text.size()) {
            char c = text[pos];
            if (c == ';') {
                while (pos < text.size() && text[pos] != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
                advance();
            } else {
                break;
            }
        }
    }
    bool eof() {
        skip_space();
        return pos >= text.size();
    }
};

Node parse_node(Lexer& lx) {
    lx.skip_space();
    if (lx.pos >= lx.text.size()) fail(ErrorCode::SyntaxError, "unexpected end of input", lx.line, lx.col);
    Node n;
    n.line = lx.line;
    n.col = lx.col;
    char c = lx.text[lx.pos];
    if (c == '(') {
        lx.advance();
        while (true) {
            lx.skip_space();
            if (lx.pos >= lx.text.size())
                fail(ErrorCode::SyntaxError, "unbalanced parenthesis", n.line, n.col);
            if (lx.text[lx.pos] == ')') {
                lx.advance();
                return n;
            }
            n.kids.push_back(parse_node(lx));
        }
    }
    if (c == ')') fail(ErrorCode::SyntaxError, "unexpected ')'", lx.line, lx.col);
    n.is_atom = true;
    std::size_t start = lx.pos;
    while (lx.pos < lx.text.size()) {
        char d = lx.text[lx.pos];
        if (d == '(' || d == ')' || d == ' ' || d == '\t' || d == '\n' || d == '\r' || d == ';') break;
        lx.advance();
    }
    n.atom = std::string(lx.text.substr(start, lx.pos - start));
    return n;
}

[[noreturn]] void bad(const Node& n, const std::string& what) {
    fail(ErrorCode::SyntaxError, what, n.line, n.col);
}

const Node& kid(const Node& n, std::size_t i, const char* what) {
    if (n.is_atom || i >= n.kids.size()) bad(n, std::string("expected ") + what);
    return n.kids[i];
}

std::string atom(const Node& n, const char* what) {
    if (!n.is_atom) bad(n, std::string("expected ") + what);
    return n.atom;
}

bool is_form(const Node& n, const char* head) {
    return !n.is_atom && !n.kids.empty() && n.kids[0].is_atom && n.kids[0].atom == head;
}

std::uint32_t parse_uint(const Node& n, const char* what) {
    std::string s = atom(n, what);
    std::uint32_t value = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || p != s.data() + s.size()) bad(n, std::string("expected integer ") + what);
    return value;
}

// --- query grammar --------------------------------------------------------

Formula parse_local(const Node& n);

std::vector<Formula> parse_local_list(const Node& n, std::size_t from) {
    std::vector<Formula> out;
    for (std::size_t i = from; i < n.kids.size(); ++i) out.push_back(parse_local(n.kids[i]));
    if (out.empty()) bad(n, "expected at least one formula");
    return out;
}

Formula parse_local(const Node& n) {
    if (n.is_atom) bad(n, "expected formula");
    if (n.kids.empty() || !n.kids[0].is_atom) bad(n, "expected formula head");
    const std::string& head = n.kids[0].atom;
    Formula f;
    f.line = n.line;
    f.col = n.col;
    if (head == "=") {
        if (n.kids.size() != 3) bad(n, "(= V V)");
        f = f_eq(atom(n.kids[1], "variable"), atom(n.kids[2], "variable"));
    } else if (head == "edge") {
        if (n.kids.size() != 3) bad(n, "(edge V V)");
        f = f_edge(atom(n.kids[1], "variable"), atom(n.kids[2], "variable"));
    } else if (head == "color") {
        if (n.kids.size() != 3) bad(n, "(color NAME V)");
        f = f_color(atom(n.kids[1], "color name"), atom(n.kids[2], "variable"));
    } else if (head == "distle") {
        if (n.kids.size() != 4) bad(n, "(distle INT V V)");
        f = f_distle(parse_uint(n.kids[1], "bound"), atom(n.kids[2], "variable"),
                     atom(n.kids[3], "variable"));
    } else if (head == "not") {
        if (n.kids.size() != 2) bad(n, "(not local)");
        f = f_not(parse_local(n.kids[1]));
    } else if (head == "and") {
        f = f_and(parse_local_list(n, 1));
    } else if (head == "or") {
        f = f_or(parse_local_list(n, 1));
    } else if (head == "exists" || head == "forall") {
        if (n.kids.size() != 3) bad(n, "(exists (V INT (anchors V+)) local)");
        const Node& binder = kid(n, 1, "binder");
        if (binder.is_atom || binder.kids.size() != 3) bad(binder, "(V INT (anchors V+))");
        std::string var = atom(binder.kids[0], "variable");
        std::uint32_t radius = parse_uint(binder.kids[1], "radius");
        const Node& anch = binder.kids[2];
        if (!is_form(anch, "anchors") || anch.kids.size() < 2) bad(anch, "(anchors V+)");
        std::vector<std::string> anchors;
        for (std::size_t i = 1; i < anch.kids.size(); ++i)
            anchors.push_back(atom(anch.kids[i], "anchor variable"));
        Formula body = parse_local(n.kids[2]);
        f = head == "exists" ? f_exists(std::move(var), radius, std::move(anchors), std::move(body))
                             : f_forall(std::move(var), radius, std::move(anchors), std::move(body));
    } else {
        bad(n, "unknown formula head '" + head + "'");
    }
    f.line = n.line;
    f.col = n.col;
    return f;
}

Guard parse_guard(const Node& n) {
    Guard g;
    g.line = n.line;
    g.col = n.col;
    if (n.is_atom) {
        g.kind = Guard::Kind::Name;
        g.name = n.atom;
        return g;
    }
    if (n.kids.empty() || !n.kids[0].is_atom) bad(n, "expected guard");
    const std::string& head = n.kids[0].atom;
    if (head == "not") {
        if (n.kids.size() != 2) bad(n, "(not guard)");
        g.kind = Guard::Kind::Not;
        g.kids.push_back(parse_guard(n.kids[1]));
    } else if (head == "and" || head == "or") {
        if (n.kids.size() < 2) bad(n, "(and guard+)");
        g.kind = head == "and" ? Guard::Kind::And : Guard::Kind::Or;
        for (std::size_t i = 1; i < n.kids.size(); ++i) g.kids.push_back(parse_guard(n.kids[i]));
    } else {
        bad(n, "unknown guard head '" + head + "'");
    }
    return g;
}

Group parse_group(const Node& n, std::uint32_t clause_r) {
    if (!is_form(n, "group") || n.kids.size() < 3 || n.kids.size() > 4) bad(n, "(group (VAR+) local [radius])");
    Group g;
    const Node& vars = n.kids[1];
    if (vars.is_atom || vars.kids.empty()) bad(vars, "(VAR+)");
    for (const Node& v : vars.kids) g.vars.push_back(atom(v, "variable"));
    g.formula = parse_local(n.kids[2]);
    if (n.kids.size() == 4) {
        g.declared_radius = parse_uint(n.kids[3], "group radius");
        g.radius_explicit = true;
    } else {
        g.declared_radius = clause_r;
        g.radius_explicit = false;
    }
    return g;
}

Clause parse_clause(const Node& n) {
    if (!is_form(n, "clause") || n.kids.size() < 3) bad(n, "(clause r group* (tau pair*))");
    Clause c;
    c.line = n.line;
    c.col = n.col;
    c.r = parse_uint(n.kids[1], "clause radius");
    const Node& tau_node = n.kids.back();
    if (!is_form(tau_node, "tau")) bad(tau_node, "(tau pair*)");
    for (std::size_t i = 2; i + 1 < n.kids.size(); ++i) c.groups.push_back(parse_group(n.kids[i], c.r));
    std::uint32_t k = 0;
    for (const auto& g : c.groups) k += static_cast<std::uint32_t>(g.vars.size());
    c.tau.k = k;
    for (std::size_t i = 1; i < tau_node.kids.size(); ++i) {
        const Node& p = tau_node.kids[i];
        if (p.is_atom || p.kids.size() != 2) bad(p, "(I J)");
        std::uint32_t a = parse_uint(p.kids[0], "position");
        std::uint32_t b = parse_uint(p.kids[1], "position");
        if (a == 0 || b == 0) bad(p, "tau positions are 1-based");
        c.tau.edges.emplace_back(a - 1, b - 1);
    }
    c.tau.normalize();
    return c;
}

}  // namespace

Query parse_query(std::string_view text) {
    Lexer lx{text};
    Node root = parse_node(lx);
    if (!lx.eof()) fail(ErrorCode::SyntaxError, "trailing input after query", lx.line, lx.col);
    if (!is_form(root, "query")) bad(root, "(query (vars VAR*) sentdef* case+)");

    Query q;
    if (root.kids.size() < 2) bad(root, "missing (vars ...)");
    const Node& vars = root.kids[1];
    if (!is_form(vars, "vars")) bad(vars, "(vars VAR*)");
    for (std::size_t i = 1; i < vars.kids.size(); ++i) q.vars.push_back(atom(vars.kids[i], "variable"));

    bool seen_case = false;
    for (std::size_t i = 2; i < root.kids.size(); ++i) {
        const Node& n = root.kids[i];
        if (is_form(n, "sentence")) {
            if (seen_case) bad(n, "sentence definitions must precede cases");
            if (n.kids.size() != 5) bad(n, "(sentence NAME s r local)");
            Sentence s;
            s.line = n.line;
            s.col = n.col;
            s.name = atom(n.kids[1], "sentence name");
            s.s = parse_uint(n.kids[2], "multiplicity");
            s.r = parse_uint(n.kids[3], "radius");
            s.alpha = parse_local(n.kids[4]);
            q.sentences.push_back(std::move(s));
        } else if (is_form(n, "case")) {
            seen_case = true;
            if (n.kids.size() < 2) bad(n, "(case guard clause*)");
            Case cs;
            cs.line = n.line;
            cs.col = n.col;
            const Node& guard = n.kids[1];
            if (guard.is_atom && guard.atom == "else") {
                cs.is_else = true;
            } else {
                cs.guard = parse_guard(guard);
            }
            for (std::size_t j = 2; j < n.kids.size(); ++j) cs.clauses.push_back(parse_clause(n.kids[j]));
            q.cases.push_back(std::move(cs));
        } else {
            bad(n, "expected (sentence ...) or (case ...)");
        }
    }
    if (q.cases.empty()) bad(root, "query needs at least one case");
    return q;
}

namespace {

void print_formula(std::ostringstream& os, const Formula& f) {
    switch (f.kind) {
        case FormKind::Eq: os << "(= " << f.v1 << ' ' << f.v2 << ')'; return;
        case FormKind::Edge: os << "(edge " << f.v1 << ' ' << f.v2 << ')'; return;
        case FormKind::Color: os << "(color " << f.name << ' ' << f.v1 << ')'; return;
        case FormKind::DistLeq: os << "(distle " << f.bound << ' ' << f.v1 << ' ' << f.v2 << ')'; return;
        case FormKind::Not:
            os << "(not ";
            print_formula(os, f.kids[0]);
            os << ')';
            return;
        case FormKind::And:
        case FormKind::Or:
            os << (f.kind == FormKind::And ? "(and" : "(or");
            for (const auto& k : f.kids) {
                os << ' ';
                print_formula(os, k);
            }
            os << ')';
            return;
        case FormKind::Exists:
        case FormKind::Forall:
            os << (f.kind == FormKind::Exists ? "(exists (" : "(forall (") << f.qvar << ' ' << f.bound
               << " (anchors";
            for (const auto& a : f.anchors) os << ' ' << a;
            os << ")) ";
            print_formula(os, f.kids[0]);
            os << ')';
            return;
    }
}

void print_guard(std::ostringstream& os, const Guard& g) {
    switch (g.kind) {
        case Guard::Kind::Name: os << g.name; return;
        case Guard::Kind::Not:
            os << "(not ";
            print_guard(os, g.kids[0]);
            os << ')';
            return;
        case Guard::Kind::And:
        case Guard::Kind::Or:
            os << (g.kind == Guard::Kind::And ? "(and" : "(or");
            for (const auto& k : g.kids) {
                os << ' ';
                print_guard(os, k);
            }
            os << ')';
            return;
    }
}

}  // namespace

std::string print_formula(const Formula& f) {
    std::ostringstream os;
    print_formula(os, f);
    return os.str();
}

std::string print_query(const Query& q) {
    std::ostringstream os;
    os << "(query (vars";
    for (const auto& v : q.vars) os << ' ' << v;
    os << ')';
    for (const auto& s : q.sentences) {
        os << "\n  (sentence " << s.name << ' ' << s.s << ' ' << s.r << ' ';
        print_formula(os, s.alpha);
        os << ')';
    }
    for (const auto& c : q.cases) {
        os << "\n  (case ";
        if (c.is_else) {
            os << "else";
        } else {
            print_guard(os, c.guard);
        }
        for (const auto& cl : c.clauses) {
            os << "\n    (clause " << cl.r;
            for (const auto& g : cl.groups) {
                os << " (group (";
                for (std::size_t i = 0; i < g.vars.size(); ++i) {
                    if (i) os << ' ';
                    os << g.vars[i];
                }
                os << ") ";
                print_formula(os, g.formula);
                if (g.radius_explicit) os << ' ' << g.declared_radius;
                os << ')';
            }
            os << " (tau";
            for (auto [i, j] : cl.tau.edges) os << " (" << i + 1 << ' ' << j + 1 << ')';
            os << "))";
        }
        os << ')';
    }
    os << ')';
    return os.str();
}

}  // namespace dyncade
