// Command-line front end over the shared-library C API: load graphs, replay
// update streams, run the answering modes, compare against the brute-force
// oracle, and benchmark scaling and delay.

#include "dyncade.h"

#include "CLI11.hpp"

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitOracleMismatch = 3;
constexpr int kExitDegreeExceeded = 4;

struct CliError {
    int exit_code;
    std::string message;
};

void require_ok(dyncade_status st, const std::string& what) {
    if (st == DYNCADE_OK) return;
    std::ostringstream os;
    os << what << ": " << dyncade_status_name(st) << ": " << dyncade_last_error();
    if (dyncade_last_error_line() > 0)
        os << " (line " << dyncade_last_error_line() << ", col " << dyncade_last_error_col() << ")";
    int code = 1;
    switch (st) {
        case DYNCADE_ERR_SYNTAX:
        case DYNCADE_ERR_UNBOUND_VARIABLE:
        case DYNCADE_ERR_DUPLICATE_NAME:
        case DYNCADE_ERR_COMPONENT_MISMATCH:
        case DYNCADE_ERR_RADIUS_EXCEEDED:
        case DYNCADE_ERR_TAU_CLASH:
        case DYNCADE_ERR_NONCONTIGUOUS_GROUPS:
        case DYNCADE_ERR_MIXED_CLAUSE_RADII:
        case DYNCADE_ERR_ARITY_MISMATCH:
        case DYNCADE_ERR_INVALID_ARGUMENT:
        case DYNCADE_ERR_IO:
            code = kExitUsage;
            break;
        case DYNCADE_ERR_DEGREE_EXCEEDED:
            code = kExitDegreeExceeded;
            break;
        default:
            code = 1;
    }
    throw CliError{code, os.str()};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliError{kExitUsage, "cannot open " + path};
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct GraphHandle {
    dyncade_graph* g = nullptr;
    ~GraphHandle() { dyncade_graph_free(g); }
};
struct QueryHandle {
    dyncade_query* q = nullptr;
    ~QueryHandle() { dyncade_query_free(q); }
};
struct EngineHandle {
    dyncade_engine* e = nullptr;
    ~EngineHandle() { dyncade_engine_free(e); }
};
struct CursorHandle {
    dyncade_cursor* c = nullptr;
    ~CursorHandle() { dyncade_cursor_free(c); }
};

struct Options {
    std::string mode = "bounded";
    std::uint32_t degree = 0;
    bool degree_set = false;
    double low_C = 2.0;
    double low_eps = 0.5;
    std::string graph_path;
    std::string query_path;
    std::string updates_path;
    std::string tuple_csv;
    std::uint64_t limit = 0;
    bool limit_set = false;
    std::string after_each = "count";
    bool oracle = false;
    std::string output_path;
    // bench
    std::uint64_t seed = 1;
    std::string sizes_csv = "10000,20000,40000";
    std::uint64_t bench_updates = 500;
    std::uint64_t enum_limit = 20000;
};

dyncade_mode engine_mode(const Options& opt) {
    return opt.mode == "bounded" ? DYNCADE_MODE_BOUNDED_DEGREE : DYNCADE_MODE_LOW_DEGREE;
}

void load_graph(const Options& opt, GraphHandle& gh) {
    std::string text = read_file(opt.graph_path);
    if (opt.degree_set) {
        require_ok(dyncade_graph_parse(text.c_str(), opt.degree, &gh.g), "graph");
    } else if (opt.mode == "bounded") {
        throw CliError{kExitUsage, "--mode bounded needs --degree"};
    } else {
        require_ok(dyncade_graph_parse_low_degree(text.c_str(), opt.low_C, opt.low_eps, &gh.g),
                   "graph");
    }
}

void load_query(const Options& opt, QueryHandle& qh) {
    std::string text = read_file(opt.query_path);
    require_ok(dyncade_query_parse(text.c_str(), &qh.q), "query");
}

std::vector<std::uint32_t> parse_tuple_csv(const std::string& csv) {
    std::vector<std::uint32_t> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(static_cast<std::uint32_t>(std::stoul(item)));
    }
    return out;
}

std::vector<std::uint64_t> parse_sizes_csv(const std::string& csv) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoull(item));
    }
    return out;
}

std::ostream& open_output(const Options& opt, std::ofstream& file) {
    if (opt.output_path.empty()) return std::cout;
    file.open(opt.output_path);
    if (!file) throw CliError{kExitUsage, "cannot open " + opt.output_path};
    return file;
}

// --- oracle comparisons ---------------------------------------------------

std::vector<std::uint32_t> oracle_flat(const dyncade_engine* e, const dyncade_query* q,
                                       std::uint64_t* n_tuples) {
    const dyncade_graph* view = nullptr;
    require_ok(dyncade_engine_graph(e, &view), "engine graph");
    std::uint32_t* flat = nullptr;
    require_ok(dyncade_oracle_answers(view, q, &flat, n_tuples), "oracle");
    std::uint32_t arity = 0;
    require_ok(dyncade_query_arity(q, &arity), "query arity");
    std::vector<std::uint32_t> out(flat, flat + *n_tuples * arity);
    dyncade_tuples_free(flat);
    return out;
}

long long oracle_count_of(const dyncade_engine* e, const dyncade_query* q) {
    const dyncade_graph* view = nullptr;
    require_ok(dyncade_engine_graph(e, &view), "engine graph");
    int64_t n = 0;
    require_ok(dyncade_oracle_count(view, q, &n), "oracle count");
    return n;
}

[[noreturn]] void oracle_mismatch(const std::string& what) {
    throw CliError{kExitOracleMismatch, "oracle mismatch: " + what};
}

// --- commands ---------------------------------------------------------------

int cmd_check(const Options& opt, const std::string& sentence) {
    GraphHandle gh;
    QueryHandle qh;
    EngineHandle eh;
    load_graph(opt, gh);
    load_query(opt, qh);
    require_ok(dyncade_engine_new(gh.g, qh.q, engine_mode(opt), &eh.e), "engine");

    int truth = 0;
    if (!sentence.empty()) {
        require_ok(dyncade_engine_check_sentence(eh.e, sentence.c_str(), &truth), "check");
        if (opt.oracle) {
            const dyncade_graph* view = nullptr;
            require_ok(dyncade_engine_graph(eh.e, &view), "engine graph");
            int expect = 0;
            require_ok(dyncade_oracle_check_sentence(view, qh.q, sentence.c_str(), &expect),
                       "oracle");
            if (expect != truth) oracle_mismatch("sentence " + sentence);
        }
    } else {
        std::uint32_t arity = 0;
        require_ok(dyncade_query_arity(qh.q, &arity), "query arity");
        if (arity == 0) {
            require_ok(dyncade_engine_check(eh.e, &truth), "check");
        } else {
            int64_t n = 0;
            require_ok(dyncade_engine_count(eh.e, &n), "count");
            truth = n > 0;
        }
        if (opt.oracle && (oracle_count_of(eh.e, qh.q) > 0) != (truth != 0))
            oracle_mismatch("check");
    }
    std::ofstream file;
    open_output(opt, file) << (truth ? "true" : "false") << "\n";
    return 0;
}

int cmd_count(const Options& opt) {
    GraphHandle gh;
    QueryHandle qh;
    EngineHandle eh;
    load_graph(opt, gh);
    load_query(opt, qh);
    require_ok(dyncade_engine_new(gh.g, qh.q, engine_mode(opt), &eh.e), "engine");
    int64_t n = 0;
    require_ok(dyncade_engine_count(eh.e, &n), "count");
    if (opt.oracle && oracle_count_of(eh.e, qh.q) != n) oracle_mismatch("count");
    std::ofstream file;
    open_output(opt, file) << n << "\n";
    return 0;
}

int cmd_test(const Options& opt) {
    GraphHandle gh;
    QueryHandle qh;
    EngineHandle eh;
    load_graph(opt, gh);
    load_query(opt, qh);
    require_ok(dyncade_engine_new(gh.g, qh.q, engine_mode(opt), &eh.e), "engine");
    auto tuple = parse_tuple_csv(opt.tuple_csv);
    int answer = 0;
    require_ok(
        dyncade_engine_test(eh.e, tuple.data(), static_cast<std::uint32_t>(tuple.size()), &answer),
        "test");
    if (opt.oracle) {
        std::uint64_t n = 0;
        auto flat = oracle_flat(eh.e, qh.q, &n);
        std::uint32_t arity = static_cast<std::uint32_t>(tuple.size());
        bool found = false;
        for (std::uint64_t i = 0; i < n && !found; ++i)
            found = std::equal(tuple.begin(), tuple.end(), flat.begin() + i * arity);
        if (found != (answer != 0)) oracle_mismatch("test");
    }
    std::ofstream file;
    open_output(opt, file) << (answer ? "true" : "false") << "\n";
    return 0;
}

int cmd_enumerate(const Options& opt) {
    GraphHandle gh;
    QueryHandle qh;
    EngineHandle eh;
    load_graph(opt, gh);
    load_query(opt, qh);
    require_ok(dyncade_engine_new(gh.g, qh.q, engine_mode(opt), &eh.e), "engine");
    std::uint32_t arity = 0;
    require_ok(dyncade_query_arity(qh.q, &arity), "query arity");

    CursorHandle ch;
    require_ok(dyncade_cursor_open(eh.e, &ch.c), "cursor");
    std::vector<std::uint32_t> emitted;
    std::vector<std::uint32_t> buf(std::max<std::uint32_t>(arity, 1));
    std::uint64_t produced = 0;
    std::ofstream file;
    std::ostream& out = open_output(opt, file);
    while (!opt.limit_set || produced < opt.limit) {
        int done = 0;
        require_ok(dyncade_cursor_next(ch.c, buf.data(), &done), "cursor next");
        if (done) break;
        for (std::uint32_t i = 0; i < arity; ++i) {
            if (i) out << ' ';
            out << buf[i];
            emitted.push_back(buf[i]);
        }
        out << "\n";
        ++produced;
    }
    if (opt.oracle) {
        std::uint64_t n = 0;
        auto flat = oracle_flat(eh.e, qh.q, &n);
        if (opt.limit_set && n > opt.limit) n = opt.limit;
        if (n != produced) oracle_mismatch("enumerate length");
        for (std::uint64_t i = 0; i < n * arity; ++i)
            if (flat[i] != emitted[i]) oracle_mismatch("enumerate content");
    }
    return 0;
}

int cmd_replay(const Options& opt) {
    GraphHandle gh;
    QueryHandle qh;
    EngineHandle eh;
    load_graph(opt, gh);
    load_query(opt, qh);
    require_ok(dyncade_engine_new(gh.g, qh.q, engine_mode(opt), &eh.e), "engine");
    std::uint32_t arity = 0;
    require_ok(dyncade_query_arity(qh.q, &arity), "query arity");

    std::string stream = read_file(opt.updates_path);
    std::ofstream file;
    std::ostream& out = open_output(opt, file);

    std::istringstream lines(stream);
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r'))
            line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        line = line.substr(start);

        dyncade_status st = dyncade_engine_apply(eh.e, line.c_str());
        if (st != DYNCADE_OK) {
            std::ostringstream os;
            os << "update line " << lineno << " (" << line << "): " << dyncade_status_name(st)
               << ": " << dyncade_last_error();
            throw CliError{st == DYNCADE_ERR_DEGREE_EXCEEDED ? kExitDegreeExceeded : kExitUsage,
                           os.str()};
        }
        if (opt.after_each == "check") {
            int truth = 0;
            if (arity == 0) {
                require_ok(dyncade_engine_check(eh.e, &truth), "check");
            } else {
                int64_t n = 0;
                require_ok(dyncade_engine_count(eh.e, &n), "count");
                truth = n > 0;
            }
            out << (truth ? "true" : "false") << "\n";
            if (opt.oracle && (oracle_count_of(eh.e, qh.q) > 0) != (truth != 0))
                oracle_mismatch("replay check at line " + std::to_string(lineno));
        } else {
            int64_t n = 0;
            require_ok(dyncade_engine_count(eh.e, &n), "count");
            out << n << "\n";
            if (opt.oracle && oracle_count_of(eh.e, qh.q) != n)
                oracle_mismatch("replay count at line " + std::to_string(lineno));
        }
    }
    return 0;
}

// --- bench --------------------------------------------------------------

struct SplitMix {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    std::uint64_t below(std::uint64_t n) { return next() % n; }
};

using Clock = std::chrono::steady_clock;

std::int64_t ns_since(Clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
}

int cmd_bench(const Options& opt) {
    QueryHandle qh;
    load_query(opt, qh);
    std::uint32_t arity = 0;
    require_ok(dyncade_query_arity(qh.q, &arity), "query arity");
    std::uint32_t ncolors = 0;
    require_ok(dyncade_query_color_count(qh.q, &ncolors), "query colors");
    std::vector<std::string> colors;
    for (std::uint32_t i = 0; i < ncolors; ++i) {
        const char* name = nullptr;
        require_ok(dyncade_query_color_name(qh.q, i, &name), "query colors");
        colors.push_back(name);
    }

    std::uint32_t cap = opt.degree_set ? opt.degree : 3;
    std::ofstream file;
    std::ostream& out = open_output(opt, file);
    out << "n,preprocess_ns,median_update_ns,max_delay_ns,count\n";

    for (std::uint64_t n : parse_sizes_csv(opt.sizes_csv)) {
        SplitMix rng{opt.seed * 0x51ed2701ull + n};

        // Bounded-degree configuration-style generation with rejection:
        // random endpoints, resampled until the edge keeps the graph simple
        // and within the cap.
        GraphHandle gh;
        if (opt.degree_set || opt.mode == "bounded") {
            require_ok(dyncade_graph_new_bounded(cap, &gh.g), "graph");
        } else {
            require_ok(dyncade_graph_new_low_degree(opt.low_C, opt.low_eps, &gh.g), "graph");
        }
        for (std::uint64_t v = 0; v < n; ++v) {
            std::string cs;
            for (const auto& c : colors)
                if (rng.below(2) == 0) {
                    if (!cs.empty()) cs += ',';
                    cs += c;
                }
            require_ok(dyncade_graph_add_vertex(gh.g, static_cast<std::uint32_t>(v), cs.c_str()),
                       "generate");
        }
        std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
        std::uint64_t target_edges = n + n / 5;
        std::uint64_t attempts = 0;
        while (edges.size() < target_edges && attempts < 8 * target_edges) {
            ++attempts;
            std::uint32_t u = static_cast<std::uint32_t>(rng.below(n));
            std::uint32_t v = static_cast<std::uint32_t>(rng.below(n));
            if (u == v) continue;
            if (dyncade_graph_add_edge(gh.g, u, v) == DYNCADE_OK) edges.emplace_back(u, v);
        }

        auto t0 = Clock::now();
        EngineHandle eh;
        require_ok(dyncade_engine_new(gh.g, qh.q, engine_mode(opt), &eh.e), "engine");
        std::int64_t preprocess_ns = ns_since(t0);

        // Update stream: edge flips and relabels, policy-respecting.
        std::vector<std::int64_t> update_ns;
        update_ns.reserve(opt.bench_updates);
        std::uint64_t applied = 0;
        std::uint64_t tries = 0;
        while (applied < opt.bench_updates && tries < 32 * opt.bench_updates) {
            ++tries;
            int what = static_cast<int>(rng.below(3));
            if (what == 0 && !edges.empty()) {
                std::size_t at = rng.below(edges.size());
                auto [u, v] = edges[at];
                auto t1 = Clock::now();
                if (dyncade_engine_remove_edge(eh.e, u, v) == DYNCADE_OK) {
                    update_ns.push_back(ns_since(t1));
                    edges[at] = edges.back();
                    edges.pop_back();
                    ++applied;
                }
            } else if (what == 1) {
                std::uint32_t u = static_cast<std::uint32_t>(rng.below(n));
                std::uint32_t v = static_cast<std::uint32_t>(rng.below(n));
                if (u == v) continue;
                auto t1 = Clock::now();
                if (dyncade_engine_add_edge(eh.e, u, v) == DYNCADE_OK) {
                    update_ns.push_back(ns_since(t1));
                    edges.emplace_back(u, v);
                    ++applied;
                }
            } else {
                std::uint32_t v = static_cast<std::uint32_t>(rng.below(n));
                std::string cs;
                for (const auto& c : colors)
                    if (rng.below(2) == 0) {
                        if (!cs.empty()) cs += ',';
                        cs += c;
                    }
                auto t1 = Clock::now();
                if (dyncade_engine_relabel(eh.e, v, cs.c_str()) == DYNCADE_OK) {
                    update_ns.push_back(ns_since(t1));
                    ++applied;
                }
            }
        }
        std::sort(update_ns.begin(), update_ns.end());
        std::int64_t median_update = update_ns.empty() ? 0 : update_ns[update_ns.size() / 2];

        int64_t count = 0;
        require_ok(dyncade_engine_count(eh.e, &count), "count");

        CursorHandle ch;
        require_ok(dyncade_cursor_open(eh.e, &ch.c), "cursor");
        std::vector<std::uint32_t> buf(std::max<std::uint32_t>(arity, 1));
        std::int64_t max_delay = 0;
        auto last = Clock::now();
        for (std::uint64_t produced = 0; produced < opt.enum_limit; ++produced) {
            int done = 0;
            require_ok(dyncade_cursor_next(ch.c, buf.data(), &done), "cursor next");
            auto now = Clock::now();
            if (done) break;
            std::int64_t gap =
                std::chrono::duration_cast<std::chrono::nanoseconds>(now - last).count();
            max_delay = std::max(max_delay, gap);
            last = now;
        }

        out << n << ',' << preprocess_ns << ',' << median_update << ',' << max_delay << ','
            << count << "\n";
        out.flush();
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dyncade: dynamic first-order query evaluation over colored graphs"};
    app.require_subcommand(1);

    Options opt;
    std::string sentence;

    auto add_common = [&](CLI::App* cmd, bool needs_graph) {
        cmd->add_option("--mode", opt.mode, "engine mode")
            ->check(CLI::IsMember({"bounded", "low"}))
            ->required();
        auto* deg = cmd->add_option("--degree", opt.degree, "bounded degree cap");
        deg->each([&](const std::string&) { opt.degree_set = true; });
        cmd->add_option("--low-C", opt.low_C, "low-degree cap constant");
        cmd->add_option("--low-eps", opt.low_eps, "low-degree cap exponent");
        if (needs_graph) cmd->add_option("--graph", opt.graph_path, "graph file")->required();
        cmd->add_option("--query", opt.query_path, "query file")->required();
        cmd->add_option("--output", opt.output_path, "write results here instead of stdout");
        cmd->add_flag("--oracle", opt.oracle, "verify against the brute-force oracle");
    };

    auto* check = app.add_subcommand("check", "boolean answer");
    add_common(check, true);
    check->add_option("--sentence", sentence, "check one named sentence");

    auto* count = app.add_subcommand("count", "number of answers");
    add_common(count, true);

    auto* test = app.add_subcommand("test", "membership of one tuple");
    add_common(test, true);
    test->add_option("--tuple", opt.tuple_csv, "comma-separated vertex ids")->required();

    auto* enumerate = app.add_subcommand("enumerate", "stream all answers");
    add_common(enumerate, true);
    auto* lim = enumerate->add_option("--limit", opt.limit, "stop after this many answers");
    lim->each([&](const std::string&) { opt.limit_set = true; });

    auto* replay = app.add_subcommand("replay", "apply an update stream");
    add_common(replay, true);
    replay->add_option("--updates", opt.updates_path, "update stream file")->required();
    replay->add_option("--after-each", opt.after_each, "what to print after each update")
        ->check(CLI::IsMember({"check", "count"}));

    auto* bench = app.add_subcommand("bench", "scaling benchmark CSV");
    add_common(bench, false);
    bench->add_option("--seed", opt.seed, "RNG seed");
    bench->add_option("--sizes", opt.sizes_csv, "comma-separated graph sizes");
    bench->add_option("--bench-updates", opt.bench_updates, "updates measured per size");
    bench->add_option("--enum-limit", opt.enum_limit, "answers enumerated per size");

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return cmd_check(opt, sentence);
        if (count->parsed()) return cmd_count(opt);
        if (test->parsed()) return cmd_test(opt);
        if (enumerate->parsed()) return cmd_enumerate(opt);
        if (replay->parsed()) return cmd_replay(opt);
        if (bench->parsed()) return cmd_bench(opt);
    } catch (const CliError& e) {
        std::cerr << "dyncade: " << e.message << "\n";
        return e.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "dyncade: " << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}
