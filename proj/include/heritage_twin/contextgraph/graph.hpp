#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <variant>
#include <vector>

#include "heritage_twin/contextgraph/term.hpp"
#include "heritage_twin/contextgraph/vocabulary.hpp"
#include "heritage_twin/core/error.hpp"
#include "heritage_twin/core/parameter.hpp"
#include "heritage_twin/core/uuid.hpp"

namespace htwin::graph {

struct Variable {
    std::string name;
};

using PatternTerm = std::variant<Term, Variable>;

struct Pattern {
    PatternTerm subject;
    PatternTerm predicate;
    PatternTerm object;
};

inline PatternTerm var(std::string name) { return Variable{std::move(name)}; }

using Binding = std::map<std::string, Term>;

struct SeriesMeta {
    Uuid series_id;
    ParameterKind parameter = ParameterKind::Temperature;
    Iri point;
    Iri room;
    Iri device;
    double height_above_floor = 0.0;

    friend bool operator==(const SeriesMeta&, const SeriesMeta&) = default;
};

namespace detail {

// Triple with its three canonical keys cached; ordering is lexicographic on keys.
struct KeyedTriple {
    Triple triple;
    std::string s, p, o;

    static KeyedTriple make(Triple t) {
        KeyedTriple k{std::move(t), {}, {}, {}};
        k.s = term_key(k.triple.subject);
        k.p = term_key(k.triple.predicate);
        k.o = term_key(k.triple.object);
        return k;
    }

    friend bool operator<(const KeyedTriple& a, const KeyedTriple& b) {
        if (a.s != b.s) return a.s < b.s;
        if (a.p != b.p) return a.p < b.p;
        return a.o < b.o;
    }
};

inline bool term_matches(const PatternTerm& pt, const Term& t, const std::string& key, Binding& b) {
    if (const auto* v = std::get_if<Variable>(&pt)) {
        auto it = b.find(v->name);
        if (it != b.end()) return term_key(it->second) == key;
        b.emplace(v->name, t);
        return true;
    }
    return term_key(std::get<Term>(pt)) == key;
}

} // namespace detail

class Graph;

// Mutable accumulation of triples with set semantics; `build()` validates
// and freezes the result into an immutable Graph.
class GraphBuilder {
public:
    explicit GraphBuilder(Namespaces ns = default_namespaces()) : ns_(std::move(ns)) {}

    bool insert(Triple t) {
        auto k = detail::KeyedTriple::make(std::move(t));
        return triples_.insert(std::move(k)).second;
    }

    std::size_t size() const { return triples_.size(); }

    Namespaces& namespaces() { return ns_; }

    Graph build() const;

private:
    Namespaces ns_;
    std::set<detail::KeyedTriple> triples_;
};

class Graph {
public:
    Graph() = default;

    std::size_t size() const { return triples_.size(); }
    const Namespaces& namespaces() const { return ns_; }

    std::vector<Triple> triples() const {
        std::vector<Triple> out;
        out.reserve(triples_.size());
        for (const auto& k : triples_) out.push_back(k.triple);
        return out;
    }

    bool contains(const Triple& t) const {
        const auto k = detail::KeyedTriple::make(t);
        return std::binary_search(triples_.begin(), triples_.end(), k);
    }

    // Every triple matching the pattern, as variable bindings, in
    // (subject, predicate, object) lexicographic order.
    std::vector<Binding> query(const Pattern& p) const {
        const std::vector<std::uint32_t>* candidates = nullptr;
        auto narrow = [&](const PatternTerm& pt, const Index& idx) {
            if (const auto* t = std::get_if<Term>(&pt)) {
                auto it = idx.find(term_key(*t));
                const std::vector<std::uint32_t>* list = it == idx.end() ? &empty_ : &it->second;
                if (!candidates || list->size() < candidates->size()) candidates = list;
            }
        };
        narrow(p.subject, by_subject_);
        narrow(p.predicate, by_predicate_);
        narrow(p.object, by_object_);

        std::vector<Binding> out;
        auto try_one = [&](const detail::KeyedTriple& k) {
            Binding b;
            if (detail::term_matches(p.subject, Term{k.triple.subject}, k.s, b) &&
                detail::term_matches(p.predicate, Term{k.triple.predicate}, k.p, b) &&
                detail::term_matches(p.object, k.triple.object, k.o, b))
                out.push_back(std::move(b));
        };
        if (candidates) {
            for (auto i : *candidates) try_one(triples_[i]);
        } else {
            for (const auto& k : triples_) try_one(k);
        }
        return out;
    }

    // Objects of (subject, predicate, ?) in key order.
    std::vector<Term> objects(const Iri& subject, const std::string& predicate) const {
        std::vector<Term> out;
        for (auto& b : query({Term{subject}, Term{Iri{predicate}}, var("o")})) out.push_back(b.at("o"));
        return out;
    }

    std::vector<Iri> subjects(const std::string& predicate, const Term& object) const {
        std::vector<Iri> out;
        for (auto& b : query({var("s"), Term{Iri{predicate}}, object})) out.push_back(std::get<Iri>(b.at("s")));
        return out;
    }

    bool has_type(const Iri& entity, const std::string& cls) const {
        return contains(Triple{entity, Iri{vocab::kType}, Iri{cls}});
    }

    std::vector<Iri> instances_of(const std::string& cls) const { return subjects(vocab::kType, Iri{cls}); }

    std::vector<Iri> rooms_on_floor(const Iri& floor) const {
        if (!has_type(floor, vocab::kFloor)) throw NotFoundError("unknown floor " + compact(floor));
        std::vector<Iri> rooms;
        for (auto& t : objects(floor, vocab::kHasPart))
            if (auto* r = as_iri(t); r && has_type(*r, vocab::kRoom)) rooms.push_back(*r);
        return rooms;
    }

    std::vector<Iri> floors() const { return instances_of(vocab::kFloor); }

    std::optional<Iri> floor_of(const Iri& room) const {
        auto it = room_floor_.find(room.value);
        if (it == room_floor_.end()) return std::nullopt;
        return Iri{it->second};
    }

    std::vector<SeriesMeta> resolve_series(const Iri& room, ParameterKind parameter) const {
        if (!has_type(room, vocab::kRoom)) throw NotFoundError("unknown room " + compact(room));
        std::vector<SeriesMeta> out;
        for (const auto& m : series_)
            if (m.room == room && m.parameter == parameter) out.push_back(m);
        return out;
    }

    std::vector<SeriesMeta> series_in_room(const Iri& room) const {
        if (!has_type(room, vocab::kRoom)) throw NotFoundError("unknown room " + compact(room));
        std::vector<SeriesMeta> out;
        for (const auto& m : series_)
            if (m.room == room) out.push_back(m);
        return out;
    }

    const SeriesMeta* find_series(const Uuid& id) const {
        auto it = series_index_.find(id);
        return it == series_index_.end() ? nullptr : &series_[it->second];
    }

    // Ordered by (room, parameter, point).
    const std::vector<SeriesMeta>& all_series() const { return series_; }

    // `prefix:local` when a declared namespace covers the IRI, `<full>` otherwise.
    std::string compact(const Iri& iri) const {
        std::string best_prefix;
        std::size_t best_len = 0;
        for (const auto& [prefix, expansion] : ns_) {
            if (expansion.size() > best_len && iri.value.size() > expansion.size() &&
                iri.value.compare(0, expansion.size(), expansion) == 0) {
                best_prefix = prefix;
                best_len = expansion.size();
            }
        }
        if (best_len == 0) return "<" + iri.value + ">";
        return best_prefix + ":" + iri.value.substr(best_len);
    }

    // Local part after the longest matching namespace, or the full IRI.
    std::string local_name(const Iri& iri) const {
        const auto c = compact(iri);
        if (c.front() == '<') return iri.value;
        return c.substr(c.find(':') + 1);
    }

    Iri expand(std::string_view token) const {
        const auto colon = token.find(':');
        if (colon == std::string_view::npos) return Iri{ns_.at("bldg") + std::string(token)};
        auto it = ns_.find(token.substr(0, colon));
        if (it == ns_.end()) throw ParseError("undeclared prefix in '" + std::string(token) + "'");
        return Iri{it->second + std::string(token.substr(colon + 1))};
    }

    friend bool operator==(const Graph& a, const Graph& b) {
        if (a.triples_.size() != b.triples_.size()) return false;
        for (std::size_t i = 0; i < a.triples_.size(); ++i)
            if (!(a.triples_[i].triple == b.triples_[i].triple)) return false;
        return true;
    }

private:
    friend class GraphBuilder;
    using Index = std::unordered_map<std::string, std::vector<std::uint32_t>>;

    void index_and_validate();

    Namespaces ns_;
    std::vector<detail::KeyedTriple> triples_;
    Index by_subject_, by_predicate_, by_object_;
    std::vector<SeriesMeta> series_;
    std::unordered_map<Uuid, std::size_t> series_index_;
    std::unordered_map<std::string, std::string> room_floor_;
    inline static const std::vector<std::uint32_t> empty_{};
};

inline Graph GraphBuilder::build() const {
    Graph g;
    g.ns_ = ns_;
    g.triples_.assign(triples_.begin(), triples_.end());
    g.index_and_validate();
    return g;
}

inline void Graph::index_and_validate() {
    for (std::uint32_t i = 0; i < triples_.size(); ++i) {
        by_subject_[triples_[i].s].push_back(i);
        by_predicate_[triples_[i].p].push_back(i);
        by_object_[triples_[i].o].push_back(i);
    }

    for (const auto& room : instances_of(vocab::kRoom)) {
        std::vector<Iri> floors;
        for (const auto& f : subjects(vocab::kHasPart, room))
            if (has_type(f, vocab::kFloor)) floors.push_back(f);
        if (floors.size() != 1)
            throw InvariantError("room " + compact(room) + " must lie on exactly one floor, found " +
                                 std::to_string(floors.size()));
        room_floor_[room.value] = floors.front().value;
    }

    // uuid -> points carrying it
    std::map<Uuid, std::vector<Iri>> points_by_uuid;
    for (const auto& b : query({var("pt"), Term{Iri{vocab::kHasUuid}}, var("id")})) {
        const auto* id = std::get_if<UuidLiteral>(&b.at("id"));
        if (!id) throw InvariantError("hasUUID object must be a uuid literal");
        points_by_uuid[id->value].push_back(std::get<Iri>(b.at("pt")));
    }

    for (const auto& [id, points] : points_by_uuid) {
        std::set<std::string> rooms;
        std::optional<Iri> device;
        double height = 0.0;
        for (const auto& pt : points) {
            for (const auto& r : objects(pt, vocab::kHasLocation))
                if (auto* iri = as_iri(r)) rooms.insert(iri->value);
            for (const auto& dev : subjects(vocab::kHasPoint, pt)) {
                device = dev;
                for (const auto& r : objects(dev, vocab::kHasLocation))
                    if (auto* iri = as_iri(r)) rooms.insert(iri->value);
                for (const auto& h : objects(dev, vocab::kHasHeight))
                    if (auto* n = std::get_if<NumberLiteral>(&h)) height = n->value;
            }
        }
        if (rooms.size() > 1) throw InvariantError("series multiply located: " + id.str());
        if (rooms.empty()) throw InvariantError("series not located in any room: " + id.str());
        if (points.size() > 1) throw InvariantError("series id not unique: " + id.str());
        const Iri room{*rooms.begin()};
        if (!room_floor_.count(room.value))
            throw InvariantError("series " + id.str() + " located in " + compact(room) + ", which is not a room on a floor");

        std::vector<ParameterKind> kinds;
        for (const auto& m : objects(points.front(), vocab::kMeasures)) {
            const auto* iri = as_iri(m);
            std::optional<ParameterKind> k;
            if (iri) k = try_parameter_from_name(local_name(*iri));
            if (!k) throw InvariantError("series " + id.str() + " measures an unknown parameter");
            kinds.push_back(*k);
        }
        if (kinds.size() != 1)
            throw InvariantError("series " + id.str() + " must measure exactly one parameter");
        if (height < 0.0) throw InvariantError("negative installation height for series " + id.str());

        series_.push_back(SeriesMeta{id, kinds.front(), points.front(), room, device.value_or(Iri{}), height});
    }

    std::sort(series_.begin(), series_.end(), [](const SeriesMeta& a, const SeriesMeta& b) {
        return std::tie(a.room.value, a.parameter, a.point.value) < std::tie(b.room.value, b.parameter, b.point.value);
    });
    for (std::size_t i = 0; i < series_.size(); ++i) series_index_[series_[i].series_id] = i;
}

} // namespace htwin::graph
