#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "heritage_twin/contextgraph/graph.hpp"

namespace htwin::graph {

namespace detail {

struct Token {
    enum class Kind { Iri, Name, String, Number, Uuid, A } kind;
    std::string text;
    double number = 0.0;
};

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

// Splits one line into tokens; stops at a `#` that begins a token.
inline std::vector<Token> tokenize(std::string_view line, std::size_t lineno) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (is_space(line[i])) {
            ++i;
            continue;
        }
        const char c = line[i];
        if (c == '#') break;
        if (c == '<') {
            const auto end = line.find('>', i);
            if (end == std::string_view::npos) throw ParseError("unterminated <iri>", lineno);
            auto body = line.substr(i + 1, end - i - 1);
            if (body.empty()) throw ParseError("empty <iri>", lineno);
            for (char b : body)
                if (is_space(b)) throw ParseError("whitespace inside <iri>", lineno);
            out.push_back({Token::Kind::Iri, std::string(body)});
            i = end + 1;
            continue;
        }
        if (c == '"') {
            std::string s;
            ++i;
            bool closed = false;
            while (i < line.size()) {
                char d = line[i++];
                if (d == '"') {
                    closed = true;
                    break;
                }
                if (d == '\\') {
                    if (i >= line.size()) break;
                    char e = line[i++];
                    switch (e) {
                    case 'n': s.push_back('\n'); break;
                    case 't': s.push_back('\t'); break;
                    case '"': s.push_back('"'); break;
                    case '\\': s.push_back('\\'); break;
                    default: throw ParseError(std::string("unknown escape \\") + e, lineno);
                    }
                } else {
                    s.push_back(d);
                }
            }
            if (!closed) throw ParseError("unterminated string literal", lineno);
            out.push_back({Token::Kind::String, std::move(s)});
            continue;
        }
        std::size_t end = i;
        while (end < line.size() && !is_space(line[end])) ++end;
        std::string_view word = line.substr(i, end - i);
        i = end;
        if (word == ".") continue; // optional statement terminator
        if (word == "a") {
            out.push_back({Token::Kind::A, "a"});
            continue;
        }
        if (word.rfind("uuid:", 0) == 0) {
            auto u = Uuid::try_parse(word.substr(5));
            if (!u) throw ParseError("malformed uuid literal '" + std::string(word) + "'", lineno);
            out.push_back({Token::Kind::Uuid, u->str()});
            continue;
        }
        double num = 0.0;
        auto [p, ec] = std::from_chars(word.data(), word.data() + word.size(), num);
        if (ec == std::errc{} && p == word.data() + word.size()) {
            out.push_back({Token::Kind::Number, std::string(word), num});
            continue;
        }
        out.push_back({Token::Kind::Name, std::string(word)});
    }
    return out;
}

inline bool safe_local_name(std::string_view s) {
    if (s.empty() || s == "a") return false;
    for (char c : s)
        if (is_space(c) || c == '<' || c == '>' || c == '"' || c == '#' || c == ':') return false;
    double d;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), d);
    if (ec == std::errc{} && p == s.data() + s.size()) return false;
    return true;
}

} // namespace detail

// Parses a topology document. Any syntax error or graph invariant violation
// rejects the whole document.
inline Graph load_topology(std::string_view doc) {
    GraphBuilder builder;
    auto& ns = builder.namespaces();
    bool seen_triple = false;

    auto expand = [&](const detail::Token& t, std::size_t lineno) -> Iri {
        switch (t.kind) {
        case detail::Token::Kind::Iri: return Iri{t.text};
        case detail::Token::Kind::A: return Iri{vocab::kType};
        case detail::Token::Kind::Name: {
            const auto colon = t.text.find(':');
            if (colon == std::string::npos) return Iri{ns.at("bldg") + t.text};
            auto it = ns.find(std::string_view(t.text).substr(0, colon));
            if (it == ns.end()) throw ParseError("undeclared prefix in '" + t.text + "'", lineno);
            if (colon + 1 == t.text.size()) throw ParseError("empty local name '" + t.text + "'", lineno);
            return Iri{it->second + t.text.substr(colon + 1)};
        }
        default: throw ParseError("expected an IRI, got literal '" + t.text + "'", lineno);
        }
    };

    std::size_t lineno = 0;
    std::size_t start = 0;
    while (start <= doc.size()) {
        auto nl = doc.find('\n', start);
        if (nl == std::string_view::npos) nl = doc.size();
        ++lineno;
        const auto line = doc.substr(start, nl - start);
        start = nl + 1;

        std::size_t first = 0;
        while (first < line.size() && detail::is_space(line[first])) ++first;
        if (line.substr(first).rfind("@prefix", 0) == 0) {
            if (seen_triple) throw ParseError("@prefix after first triple", lineno);
            auto toks = detail::tokenize(line.substr(first + 7), lineno);
            if (toks.size() != 2 || toks[0].kind != detail::Token::Kind::Name || toks[0].text.back() != ':' ||
                toks[1].kind != detail::Token::Kind::Iri)
                throw ParseError("expected '@prefix name: <expansion>'", lineno);
            auto name = toks[0].text.substr(0, toks[0].text.size() - 1);
            if (name.empty() || name.find(':') != std::string::npos || name == "uuid")
                throw ParseError("invalid prefix name '" + name + "'", lineno);
            ns[name] = toks[1].text;
            continue;
        }
        auto toks = detail::tokenize(line, lineno);
        if (toks.empty()) continue;
        if (toks.size() != 3)
            throw ParseError("expected 'subject predicate object', got " + std::to_string(toks.size()) + " terms",
                             lineno);
        seen_triple = true;
        Triple t;
        t.subject = expand(toks[0], lineno);
        t.predicate = expand(toks[1], lineno);
        switch (toks[2].kind) {
        case detail::Token::Kind::String: t.object = StringLiteral{toks[2].text}; break;
        case detail::Token::Kind::Number: t.object = NumberLiteral{toks[2].number}; break;
        case detail::Token::Kind::Uuid: t.object = UuidLiteral{Uuid::parse(toks[2].text)}; break;
        default: t.object = expand(toks[2], lineno);
        }
        builder.insert(std::move(t));
    }
    return builder.build();
}

inline Graph load_topology_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open topology file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_topology(ss.str());
}

inline std::string serialize_topology(const Graph& g) {
    std::string out;
    for (const auto& [prefix, expansion] : g.namespaces()) out += "@prefix " + prefix + ": <" + expansion + ">\n";
    auto iri_text = [&](const Iri& iri) {
        if (iri.value == vocab::kType) return std::string("a");
        const auto c = g.compact(iri);
        if (c.front() == '<') return c;
        const auto colon = c.find(':');
        if (!detail::safe_local_name(std::string_view(c).substr(colon + 1))) return "<" + iri.value + ">";
        return c;
    };
    for (const auto& t : g.triples()) {
        out += iri_text(t.subject);
        out += ' ';
        out += iri_text(t.predicate);
        out += ' ';
        if (const auto* iri = as_iri(t.object))
            out += iri_text(*iri);
        else
            out += term_key(t.object);
        out += '\n';
    }
    return out;
}

} // namespace htwin::graph
