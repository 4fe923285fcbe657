#pragma once

#include <charconv>
#include <string>
#include <variant>

#include "heritage_twin/core/error.hpp"
#include "heritage_twin/core/uuid.hpp"

namespace htwin::graph {

// Fully expanded identifier of a graph entity.
struct Iri {
    std::string value;

    friend auto operator<=>(const Iri&, const Iri&) = default;
};

struct StringLiteral {
    std::string value;

    friend auto operator<=>(const StringLiteral&, const StringLiteral&) = default;
};

struct NumberLiteral {
    double value = 0.0;

    friend bool operator==(const NumberLiteral&, const NumberLiteral&) = default;
};

struct UuidLiteral {
    Uuid value;

    friend auto operator<=>(const UuidLiteral&, const UuidLiteral&) = default;
};

using Term = std::variant<Iri, StringLiteral, NumberLiteral, UuidLiteral>;

inline std::string shortest_number(double v) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline std::string escape_string(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    out.push_back('"');
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

// Canonical, prefix-free rendering; also the sort key for deterministic ordering.
inline std::string term_key(const Term& t) {
    struct Visitor {
        std::string operator()(const Iri& i) const { return "<" + i.value + ">"; }
        std::string operator()(const StringLiteral& s) const { return escape_string(s.value); }
        std::string operator()(const NumberLiteral& n) const { return shortest_number(n.value); }
        std::string operator()(const UuidLiteral& u) const { return "uuid:" + u.value.str(); }
    };
    return std::visit(Visitor{}, t);
}

inline const Iri* as_iri(const Term& t) { return std::get_if<Iri>(&t); }

struct Triple {
    Iri subject;
    Iri predicate;
    Term object;

    friend bool operator==(const Triple&, const Triple&) = default;
};

} // namespace htwin::graph
