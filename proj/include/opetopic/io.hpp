#pragma once
#include <json.hpp>
#include <sstream>
#include <string>

#include "kontsevich.hpp"

namespace opetopic {

using json = nlohmann::ordered_json;

// ---- JSON -----------------------------------------------------------------------

inline json to_json(const Op& o) {
    if (o->level == 0) return json{{"level", 0}, {"op", "*"}};
    if (o->bare()) return json{{"level", o->level}, {"edge", to_json(o->colour)}};
    json ch = json::array();
    for (const Op& c : o->children) ch.push_back(to_json(c));
    return json{{"level", o->level}, {"op", to_json(o->deco)}, {"children", std::move(ch)}};
}

// a vertex is the array of its inputs, a leaf is null
inline json planar_json(const Op& t) {
    if (t->level != 2) throw input_error("nested arrays encode planar trees only");
    if (t->bare()) return nullptr;
    json a = json::array();
    for (const Op& c : t->children) a.push_back(planar_json(c));
    return a;
}

inline json to_json(const WhiteTree& w) {
    json j = to_json(w.tree);
    j["whites"] = json(std::vector<int>(w.whites.begin(), w.whites.end()));
    return j;
}

inline json to_json(const OmegaMorphism& f) {
    return json{{"source", planar_json(f.source)},
                {"target", planar_json(f.target)},
                {"word", f.word},
                {"edges", f.edges}};
}

inline json to_json(const StratumIndex& s) { return json{{"tree", planar_json(s.tree)}, {"index", s.index}}; }

inline json to_json(const FinCat& c) {
    json mors = json::array();
    for (const auto& m : c.mors) mors.push_back({{"name", m.name}, {"source", m.src}, {"target", m.tgt}});
    return json{{"objects", c.objects}, {"morphisms", std::move(mors)}, {"generating", c.generating()}};
}

inline json to_json(const Certificate& c) {
    return json{{"kind", kind_name(c.kind)}, {"positive", c.positive}, {"witness", c.witness}, {"betti", c.betti}};
}

inline json rational_json(const Q& q) {
    return json::array({numerator(q).str(), denominator(q).str()});
}

inline json to_json(const DirectionMatrix& x) {
    json pts = json::array();
    for (int i = 0; i < x.points; ++i) pts.push_back(i);
    json entries = json::object();
    for (int i = 0; i < x.points; ++i)
        for (int j = i + 1; j < x.points; ++j) {
            json v = json::array();
            for (const Q& c : x.get(i, j)) v.push_back(rational_json(c));
            entries[std::to_string(i) + "," + std::to_string(j)] = std::move(v);
        }
    return json{{"dim", x.dim}, {"points", std::move(pts)}, {"entries", std::move(entries)}};
}

inline json to_json(const HyperElement& h) { return json{{"shape", planar_json(h.shape)}, {"value", to_json(h.value)}}; }

// ---- DOT --------------------------------------------------------------------------

inline std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out + "\"";
}

// objects as nodes, generating morphisms as edges
inline std::string to_dot(const FinCat& c, const std::string& name = "C") {
    std::ostringstream os;
    os << "digraph " << dot_quote(name) << " {\n";
    for (int o = 0; o < c.size(); ++o) os << "  n" << o << " [label=" << dot_quote(c.objects[o]) << "];\n";
    for (int g : c.generating())
        os << "  n" << c.mors[g].src << " -> n" << c.mors[g].tgt << " [label=" << dot_quote(c.mors[g].name) << "];\n";
    os << "}\n";
    return os.str();
}

// the 1-skeleton of the nerve: every non-identity morphism
inline std::string nerve_skeleton_dot(const FinCat& c, const std::string& name = "N") {
    std::ostringstream os;
    os << "digraph " << dot_quote(name) << " {\n";
    for (int o = 0; o < c.size(); ++o) os << "  n" << o << " [label=" << dot_quote(c.objects[o]) << "];\n";
    for (int f = 0; f < (int)c.mors.size(); ++f)
        if (!c.is_identity(f)) os << "  n" << c.mors[f].src << " -> n" << c.mors[f].tgt << ";\n";
    os << "}\n";
    return os.str();
}

inline std::string planar_dot(const Op& t, const std::string& name = "T") {
    const PlanarInfo& p = planar_info(t);
    std::ostringstream os;
    os << "digraph " << dot_quote(name) << " {\n  rankdir=BT;\n";
    for (int v = 0; v < (int)p.s.v.size(); ++v) os << "  v" << v << " [shape=circle,label=\"\"];\n";
    os << "  root [shape=point];\n";
    for (int e = 0; e < p.edges(); ++e) {
        const auto& ed = p.s.e[e];
        std::string lo = ed.lower < 0 ? "root" : "v" + std::to_string(ed.lower);
        std::string hi = ed.upper < 0 ? "l" + std::to_string(e) : "v" + std::to_string(ed.upper);
        if (ed.upper < 0) os << "  " << hi << " [shape=point];\n";
        os << "  " << lo << " -> " << hi << " [dir=back,label=\"" << e << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace opetopic
