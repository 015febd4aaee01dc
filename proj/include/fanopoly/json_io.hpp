#pragma once

// JSON interchange for every value the command-line tool consumes or emits:
// polygons {"vertices": [[x,y], ...]}, Laurent polynomials with parametric
// coefficients, period series, parameter-space reports, pencil reports,
// mutation-graph JSONL, and reference coefficient tables.  Parsing failures
// raise ParseError; all output is deterministic (keys sorted, exact rational
// strings).

#include <iostream>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "fanopoly/core.hpp"
#include "fanopoly/laurent.hpp"
#include "fanopoly/mutation.hpp"
#include "fanopoly/pencil.hpp"
#include "fanopoly/period.hpp"
#include "fanopoly/polygon.hpp"
#include "fanopoly/singularity.hpp"

namespace fanopoly {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// scalars
// ---------------------------------------------------------------------------

inline json int_to_json(const Int& v) {
    static const Int lo = Int(std::numeric_limits<long long>::min());
    static const Int hi = Int(std::numeric_limits<long long>::max());
    if (v >= lo && v <= hi) return json(v.convert_to<long long>());
    return json(v.str());
}

inline Int int_from_json(const json& j) {
    try {
        if (j.is_number_integer()) return Int(j.get<long long>());
        if (j.is_number_unsigned()) return Int(j.get<unsigned long long>());
        if (j.is_string()) return Int(j.get<std::string>());
    } catch (const std::runtime_error& e) {
        throw ParseError(std::string("invalid integer: ") + e.what());
    }
    throw ParseError("expected an integer, got " + j.dump());
}

inline json rat_to_json(const Rat& v) { return json(rat_to_string(v)); }

inline Rat rat_from_json(const json& j) {
    if (j.is_number_integer()) return Rat(Int(j.get<long long>()));
    if (j.is_number_unsigned()) return Rat(Int(j.get<unsigned long long>()));
    if (j.is_string()) return rat_from_string(j.get<std::string>());
    throw ParseError("expected a rational, got " + j.dump());
}

// ---------------------------------------------------------------------------
// lattice points and polygons
// ---------------------------------------------------------------------------

inline json point_to_json(const LatticePoint& p) {
    return json::array({int_to_json(p.x), int_to_json(p.y)});
}

inline LatticePoint point_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2)
        throw ParseError("expected a point [x, y], got " + j.dump());
    return LatticePoint{int_from_json(j[0]), int_from_json(j[1])};
}

inline json polygon_to_json(const Polygon& p) {
    json verts = json::array();
    for (const auto& v : p.vertices()) verts.push_back(point_to_json(v));
    return json{{"vertices", verts}};
}

inline Polygon polygon_from_json(const json& j) {
    if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array())
        throw ParseError("expected {\"vertices\": [[x,y], ...]}, got " + j.dump());
    std::vector<LatticePoint> pts;
    for (const auto& v : j["vertices"]) pts.push_back(point_from_json(v));
    return Polygon::from_points(pts);
}

inline json rational_polygon_to_json(const RationalPolygon& p) {
    json verts = json::array();
    for (const auto& v : p.vertices())
        verts.push_back(json::array({rat_to_json(v.x), rat_to_json(v.y)}));
    return json{{"vertices", verts}};
}

inline RationalPolygon rational_polygon_from_json(const json& j) {
    if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array())
        throw ParseError("expected {\"vertices\": [[x,y], ...]}, got " + j.dump());
    std::vector<RatPoint> pts;
    for (const auto& v : j["vertices"]) {
        if (!v.is_array() || v.size() != 2)
            throw ParseError("expected a point [x, y], got " + v.dump());
        pts.push_back(RatPoint{rat_from_json(v[0]), rat_from_json(v[1])});
    }
    return RationalPolygon::from_points(pts);
}

// ---------------------------------------------------------------------------
// parametric coefficients: {"1": "20", "a*b": "2", "a^2": "1/3", ...}
// ---------------------------------------------------------------------------

inline json coeff_to_json(const ParamPolynomial& c, const std::vector<std::string>& names) {
    json out = json::object();
    for (const auto& [m, v] : c.terms()) {
        std::string key = ParamPolynomial::monomial_string(m, names);
        if (key.empty()) key = "1";
        out[key] = rat_to_string(v);
    }
    return out;
}

inline ParamPolynomial coeff_from_json(const json& j, const std::vector<std::string>& names) {
    if (!j.is_object()) throw ParseError("expected a coefficient object, got " + j.dump());
    auto var_index = [&](const std::string& name) -> std::size_t {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return i;
        throw ParseError("unknown parameter '" + name + "' in coefficient");
    };
    ParamPolynomial c;
    for (const auto& [key, val] : j.items()) {
        ParamPolynomial::Monomial m;
        if (key != "1") {
            std::size_t pos = 0;
            while (pos < key.size()) {
                std::size_t star = key.find('*', pos);
                std::string factor =
                    key.substr(pos, star == std::string::npos ? star : star - pos);
                pos = star == std::string::npos ? key.size() : star + 1;
                if (factor.empty()) throw ParseError("empty factor in monomial '" + key + "'");
                std::size_t caret = factor.find('^');
                std::string name = factor.substr(0, caret);
                unsigned exp = 1;
                if (caret != std::string::npos) {
                    try {
                        exp = unsigned(std::stoul(factor.substr(caret + 1)));
                    } catch (const std::exception&) {
                        throw ParseError("invalid exponent in monomial '" + key + "'");
                    }
                }
                std::size_t idx = var_index(name);
                if (m.size() <= idx) m.resize(idx + 1, 0);
                m[idx] += exp;
            }
        }
        c += ParamPolynomial::monomial(m, rat_from_json(val));
    }
    return c;
}

// ---------------------------------------------------------------------------
// Laurent polynomials:
// {"params": ["a","b"], "terms": [{"exp": [i,j], "coeff": {...}}, ...]}
// ---------------------------------------------------------------------------

inline json laurent_to_json(const ParamLaurent& g) {
    json terms = json::array();
    for (const auto& e : g.support()) {
        terms.push_back(
            json{{"exp", point_to_json(e)}, {"coeff", coeff_to_json(g.coeff(e), g.params())}});
    }
    return json{{"params", g.params()}, {"terms", terms}};
}

inline ParamLaurent laurent_from_json(const json& j) {
    if (!j.is_object() || !j.contains("terms"))
        throw ParseError("expected {\"params\": [...], \"terms\": [...]}, got " + j.dump());
    std::vector<std::string> params;
    if (j.contains("params")) {
        if (!j["params"].is_array()) throw ParseError("\"params\" must be an array of names");
        for (const auto& p : j["params"]) {
            if (!p.is_string()) throw ParseError("\"params\" must be an array of names");
            params.push_back(p.get<std::string>());
        }
    }
    ParamLaurent g(params);
    if (!j["terms"].is_array()) throw ParseError("\"terms\" must be an array");
    for (const auto& t : j["terms"]) {
        if (!t.is_object() || !t.contains("exp") || !t.contains("coeff"))
            throw ParseError("expected {\"exp\": [i,j], \"coeff\": {...}}, got " + t.dump());
        g.add_term(point_from_json(t["exp"]), coeff_from_json(t["coeff"], params));
    }
    return g;
}

// ---------------------------------------------------------------------------
// singularity content
// ---------------------------------------------------------------------------

inline json content_to_json(const SingularityContent& c) {
    json basket = json::array();
    for (const auto& s : c.basket) basket.push_back(s.to_string());
    return json{{"m", int_to_json(c.m)}, {"basket", basket}, {"display", c.to_string()}};
}

// ---------------------------------------------------------------------------
// MM spaces and period series
// ---------------------------------------------------------------------------

inline json mm_space_to_json(const MMSpace& s) {
    json pts = json::array();
    for (const auto& e : s.free_points) pts.push_back(point_to_json(e));
    ParamLaurent g = s.generic();
    return json{{"dimension", s.dimension()},
                {"depth", s.depth},
                {"rounds_completed", s.rounds_completed},
                {"stabilized", s.stabilized},
                {"params", s.params},
                {"free_points", pts},
                {"generic", laurent_to_json(g)},
                {"display", g.to_string()}};
}

inline json period_to_json(const PeriodSeries& s) {
    json coeffs = json::array();
    json display = json::array();
    for (unsigned d = 0; d <= s.order(); ++d) {
        coeffs.push_back(coeff_to_json(s.coeffs[d], s.params));
        display.push_back(s.coeff_string(d));
    }
    return json{{"params", s.params},
                {"order", s.order()},
                {"coefficients", coeffs},
                {"display", display}};
}

// ---------------------------------------------------------------------------
// reference coefficient tables:
// {"convention": "regularized"|"plain", "coeffs": {"3": "6"}, "substitution": {"a": "0"}}
// ---------------------------------------------------------------------------

inline ReferenceCoeffs reference_from_json(const json& j) {
    if (!j.is_object() || !j.contains("coeffs"))
        throw ParseError("expected a reference table with \"coeffs\", got " + j.dump());
    ReferenceCoeffs ref;
    if (j.contains("convention")) {
        std::string c = j["convention"].is_string() ? j["convention"].get<std::string>() : "";
        if (c == "regularized")
            ref.regularized = true;
        else if (c == "plain")
            ref.regularized = false;
        else
            throw ParseError("\"convention\" must be \"regularized\" or \"plain\"");
    }
    if (!j["coeffs"].is_object()) throw ParseError("\"coeffs\" must be an object");
    for (const auto& [key, val] : j["coeffs"].items()) {
        unsigned d = 0;
        try {
            d = unsigned(std::stoul(key));
        } catch (const std::exception&) {
            throw ParseError("invalid order '" + key + "' in reference coefficients");
        }
        ref.coeffs[d] = rat_from_json(val);
    }
    if (j.contains("substitution")) {
        if (!j["substitution"].is_object())
            throw ParseError("\"substitution\" must be an object");
        for (const auto& [key, val] : j["substitution"].items())
            ref.substitution[key] = rat_from_json(val);
    }
    return ref;
}

// ---------------------------------------------------------------------------
// pencil report
// ---------------------------------------------------------------------------

inline json pencil_to_json(const PencilData& pd, const ProjectionReport* proj,
                           const bool* homogeneous) {
    json rays = json::array();
    for (const auto& r : pd.rays) {
        rays.push_back(json{{"name", r.name},
                            {"ray", json::array({int_to_json(r.ray.x), int_to_json(r.ray.y),
                                                 int_to_json(r.ray.z)})},
                            {"rhs", int_to_json(r.rhs)}});
    }
    json tri = json::array();
    for (const auto& mono : pd.trinomial) {
        json v = json::array();
        for (const auto& e : mono) v.push_back(int_to_json(e));
        tri.push_back(v);
    }
    json out{{"base", polygon_to_json(pd.base)},
             {"mutation", json{{"h", point_to_json(pd.data.h)},
                               {"f", point_to_json(pd.data.f)},
                               {"edge_index", pd.data.edge_index}}},
             {"rays", rays},
             {"w", int_to_json(pd.w)},
             {"r", int_to_json(pd.r)},
             {"wprime", int_to_json(pd.wprime)},
             {"rprime", int_to_json(pd.rprime)},
             {"ratio", int_to_json(pd.ratio)},
             {"split_confirmed", pd.split_confirmed},
             {"trinomial", tri},
             {"trinomial_display", pd.trinomial_string()}};
    if (proj) {
        json verts = json::array();
        for (const auto& v : proj->vertices)
            verts.push_back(json::array(
                {rat_to_json(v.x), rat_to_json(v.y), rat_to_json(v.z)}));
        out["projections"] = json{{"bounded", proj->bounded},
                                  {"primal_ok", proj->primal_ok},
                                  {"mutated_ok", proj->mutated_ok},
                                  {"vertices", verts},
                                  {"detail", proj->detail}};
    }
    if (homogeneous) out["homogeneous"] = *homogeneous;
    return out;
}

// ---------------------------------------------------------------------------
// mutation-graph JSONL: one record per node, then one per arc
// ---------------------------------------------------------------------------

inline void write_graph_jsonl(std::ostream& os, const MutationGraph& g) {
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const Polygon& nf = g.nodes[i];
        json verts = json::array();
        for (const auto& v : nf.vertices()) verts.push_back(point_to_json(v));
        json rec{{"record", "node"},
                 {"index", i},
                 {"normal_form_vertices", verts},
                 {"content", singularity_content(nf).to_string()},
                 {"degree", rat_to_string(degree(nf))}};
        os << rec.dump() << "\n";
    }
    for (const auto& a : g.arcs) {
        json rec{{"record", "arc"},
                 {"source", a.source},
                 {"target", a.target},
                 {"h", point_to_json(a.data.h)},
                 {"f", point_to_json(a.data.f)},
                 {"edge_index", a.data.edge_index}};
        os << rec.dump() << "\n";
    }
}

// ---------------------------------------------------------------------------
// top-level text helpers
// ---------------------------------------------------------------------------

inline json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());  // carries byte position
    }
}

}  // namespace fanopoly
