#include "text_io.hpp"

#include <charconv>

namespace dyncade {

namespace {

std::string_view strip(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

VertexId parse_id(std::string_view tok, int lineno) {
    std::uint64_t value = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || p != tok.data() + tok.size() || value >= kNoVertex)
        fail(ErrorCode::SyntaxError, "bad vertex id '" + std::string(tok) + "'", lineno);
    return static_cast<VertexId>(value);
}

ColorSet parse_colors(std::string_view tok, int lineno) {
    std::vector<std::string> names;
    std::size_t i = 0;
    while (i <= tok.size()) {
        std::size_t j = tok.find(',', i);
        if (j == std::string_view::npos) j = tok.size();
        std::string_view name = tok.substr(i, j - i);
        if (name.empty()) fail(ErrorCode::SyntaxError, "empty color name", lineno);
        names.emplace_back(name);
        if (j == tok.size()) break;
        i = j + 1;
    }
    return make_color_set(std::move(names));
}

}  // namespace

UpdateOp parse_update_line(std::string_view line, int lineno) {
    auto fields = split_fields(line);
    if (fields.empty()) fail(ErrorCode::SyntaxError, "empty update record", lineno);
    std::string_view tag = fields[0];
    auto need = [&](std::size_t lo, std::size_t hi) {
        if (fields.size() < lo + 1 || fields.size() > hi + 1)
            fail(ErrorCode::SyntaxError, "bad field count for '" + std::string(tag) + "'", lineno);
    };
    if (tag == "+v") {
        need(1, 2);
        ColorSet colors = fields.size() == 3 ? parse_colors(fields[2], lineno) : ColorSet{};
        return UpdateOp::add_vertex(parse_id(fields[1], lineno), std::move(colors));
    }
    if (tag == "-v") {
        need(1, 1);
        return UpdateOp::remove_vertex(parse_id(fields[1], lineno));
    }
    if (tag == "+e") {
        need(2, 2);
        return UpdateOp::add_edge(parse_id(fields[1], lineno), parse_id(fields[2], lineno));
    }
    if (tag == "-e") {
        need(2, 2);
        return UpdateOp::remove_edge(parse_id(fields[1], lineno), parse_id(fields[2], lineno));
    }
    if (tag == "!v") {
        need(1, 2);
        ColorSet colors = fields.size() == 3 ? parse_colors(fields[2], lineno) : ColorSet{};
        return UpdateOp::relabel(parse_id(fields[1], lineno), std::move(colors));
    }
    fail(ErrorCode::SyntaxError, "unknown update tag '" + std::string(tag) + "'", lineno);
}

std::vector<UpdateOp> parse_update_stream(std::string_view text) {
    std::vector<UpdateOp> ops;
    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        ++lineno;
        std::string_view line = text.substr(pos, nl - pos);
        std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = strip(line);
        if (!line.empty()) ops.push_back(parse_update_line(line, lineno));
        if (nl == text.size()) break;
        pos = nl + 1;
    }
    return ops;
}

DynamicGraph parse_graph_text(std::string_view text, DegreePolicy policy) {
    DynamicGraph g(policy);
    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        ++lineno;
        std::string_view line = text.substr(pos, nl - pos);
        std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = strip(line);
        if (!line.empty()) {
            auto fields = split_fields(line);
            std::string_view tag = fields[0];
            if (tag == "v") {
                if (fields.size() < 2 || fields.size() > 3)
                    fail(ErrorCode::SyntaxError, "bad vertex record", lineno);
                ColorSet colors = fields.size() == 3 ? parse_colors(fields[2], lineno) : ColorSet{};
                g.apply(UpdateOp::add_vertex(parse_id(fields[1], lineno), std::move(colors)));
            } else if (tag == "e") {
                if (fields.size() != 3) fail(ErrorCode::SyntaxError, "bad edge record", lineno);
                g.apply(UpdateOp::add_edge(parse_id(fields[1], lineno), parse_id(fields[2], lineno)));
            } else {
                fail(ErrorCode::SyntaxError, "unknown record tag '" + std::string(tag) + "'", lineno);
            }
        }
        if (nl == text.size()) break;
        pos = nl + 1;
    }
    return g;
}

}  // namespace dyncade
