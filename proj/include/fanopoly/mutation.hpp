#pragma once

// Combinatorial mutations of Fano polygons: mutation data enumeration,
// primal mutation (vertex formulas), dual mutation (piecewise-linear map),
// inverses, and bounded mutation-graph search with canonical dedup.

#include "core.hpp"
#include "polygon.hpp"
#include "singularity.hpp"

#include <deque>
#include <map>
#include <optional>
#include <sstream>

namespace fanopoly {

// ---------------------------------------------------------------------------
// mutation data: a primitive height h, a primitive direction f with <f,h>=0,
// and the edge at minimal h-value satisfying width >= -h_min

struct MutationData {
    LatticePoint h;          // primitive inner normal of the minimal edge
    LatticePoint f;          // primitive edge direction (counterclockwise)
    std::size_t edge_index;  // index of the minimal edge in vertex order
    Int w;                   // lattice width of that edge
    Int h_min;               // min of h over the polygon (negative)
    Int h_max;               // max of h over the polygon (positive)

    std::string to_string() const {
        std::ostringstream os;
        os << "{h=(" << h.x << "," << h.y << "), f=(" << f.x << "," << f.y
           << "), edge=" << edge_index << ", w=" << w << ", h_min=" << h_min
           << ", h_max=" << h_max << "}";
        return os.str();
    }

    friend bool operator==(const MutationData& a, const MutationData& b) {
        return a.h == b.h && a.f == b.f && a.edge_index == b.edge_index && a.w == b.w &&
               a.h_min == b.h_min && a.h_max == b.h_max;
    }
};

inline Int height_max(const Polygon& p, const LatticePoint& h) {
    Int hmax = dot(h, p.vertices()[0]);
    for (const auto& v : p.vertices()) hmax = std::max(hmax, dot(h, v));
    return hmax;
}

// Build the mutation datum for edge i of p; throws InvalidMutationData when
// the edge does not qualify (width < height).
inline MutationData mutation_data_for_edge(const Polygon& p, std::size_t i) {
    auto es = edges(p);
    if (i >= es.size()) throw InvalidMutationData("edge index out of range");
    const Edge& e = es[i];
    if (e.width < e.height)
        throw InvalidMutationData("edge " + std::to_string(i) + " has width " + e.width.str() +
                                  " < height " + e.height.str());
    return MutationData{e.inner_normal, e.direction, i, e.width, -e.height,
                        height_max(p, e.inner_normal)};
}

inline std::vector<MutationData> find_mutation_data(const Polygon& p) {
    std::vector<MutationData> out;
    auto es = edges(p);
    for (std::size_t i = 0; i < es.size(); ++i)
        if (es[i].width >= es[i].height) out.push_back(mutation_data_for_edge(p, i));
    return out;
}

namespace detail {

inline void validate_mutation_data(const Polygon& p, const MutationData& d) {
    auto es = edges(p);
    if (d.edge_index >= es.size()) throw InvalidMutationData("edge index out of range");
    const Edge& e = es[d.edge_index];
    if (d.h != e.inner_normal || d.f != e.direction)
        throw InvalidMutationData("h/f do not match edge " + std::to_string(d.edge_index));
    if (d.w != e.width || d.h_min != -e.height)
        throw InvalidMutationData("w/h_min do not match edge " + std::to_string(d.edge_index));
    if (d.h_max != height_max(p, d.h)) throw InvalidMutationData("h_max does not match polygon");
    if (d.w < -d.h_min)
        throw InvalidMutationData("width " + d.w.str() + " < height " + Int(-d.h_min).str());
}

// Vertices relabeled rho_1..rho_M counterclockwise so that h(rho_1) = h_max
// and, when two vertices attain h_max, rho_1 is the counterclockwise head of
// the maximal edge (so the labeling ends at the other maximal vertex).
inline std::vector<LatticePoint> label_from_max(const Polygon& p, const LatticePoint& h, Int hmax,
                                                std::size_t& max_count) {
    const auto& vs = p.vertices();
    const std::size_t M = vs.size();
    std::vector<std::size_t> maxers;
    for (std::size_t i = 0; i < M; ++i)
        if (dot(h, vs[i]) == hmax) maxers.push_back(i);
    max_count = maxers.size();
    if (max_count != 1 && max_count != 2)
        throw InvalidMutationData("h attains its maximum on more than one edge");
    std::size_t start;
    if (max_count == 1) {
        start = maxers[0];
    } else {
        // the two maximal vertices span an edge; start at its counterclockwise head
        std::size_t a = maxers[0], b = maxers[1];
        if ((a + 1) % M == b)
            start = b;
        else if ((b + 1) % M == a)
            start = a;
        else
            throw InvalidMutationData("maximal vertices are not adjacent");
    }
    std::vector<LatticePoint> lab(M);
    for (std::size_t j = 0; j < M; ++j) lab[j] = vs[(start + j) % M];
    return lab;
}

}  // namespace detail

namespace detail {

// The relabeled vertex cycle rho_1..rho_M plus the position i of the minimal
// edge [rho_i, rho_{i+1}] (1-based). case_two: two vertices attain h_max, so
// the construction treats the polygon as having m+1 = M labeled vertices.
struct MutationLabeling {
    std::vector<LatticePoint> labels;
    std::size_t i = 0;
    bool case_two = false;
};

inline MutationLabeling mutation_labeling(const Polygon& p, const MutationData& d) {
    validate_mutation_data(p, d);
    MutationLabeling lab;
    std::size_t max_count = 0;
    lab.labels = label_from_max(p, d.h, d.h_max, max_count);
    lab.case_two = (max_count == 2);
    const std::size_t M = lab.labels.size();
    const Edge e = edges(p)[d.edge_index];
    for (std::size_t j = 0; j + 1 < M; ++j) {
        if (lab.labels[j] == e.start && lab.labels[j + 1] == e.end) {
            lab.i = j + 1;
            break;
        }
    }
    if (lab.i == 0) throw InvalidMutationData("minimal edge not found in labeling");
    return lab;
}

}  // namespace detail

// Apply the mutation: vertices at or below the minimal edge slide by h(rho)*f,
// and in case I (unique maximal vertex) an extra vertex rho_1 + h_max*f
// appears. The point list is re-hulled to drop merged or collinear points.
inline Polygon mutate(const Polygon& p, const MutationData& d) {
    detail::MutationLabeling lab = detail::mutation_labeling(p, d);
    const std::size_t M = lab.labels.size();
    std::vector<LatticePoint> out;
    out.reserve(M + 1);
    for (std::size_t j = 1; j <= M; ++j) {
        const LatticePoint& rho = lab.labels[j - 1];
        if (j <= lab.i)
            out.push_back(rho);
        else
            out.push_back(rho + dot(d.h, rho) * d.f);
    }
    if (!lab.case_two) out.push_back(lab.labels[0] + d.h_max * d.f);
    return Polygon::from_points(out);
}

// ---------------------------------------------------------------------------
// dual mutation: the piecewise-linear map psi(u) = u - min(<f,u>, 0) * h,
// applied after splitting the polygon along the crease <f,u> = 0

inline RatPoint pl_dual_map(const RatPoint& u, const MutationData& d) {
    Rat fu = u.x * d.f.x + u.y * d.f.y;
    if (fu >= 0) return u;
    return {u.x - fu * Rat(d.h.x), u.y - fu * Rat(d.h.y)};
}

inline RationalPolygon mutate_dual(const RationalPolygon& q, const MutationData& d) {
    const auto& vs = q.vertices();
    const std::size_t M = vs.size();
    std::vector<RatPoint> pts;
    pts.reserve(2 * M);
    for (std::size_t i = 0; i < M; ++i) {
        const RatPoint& s = vs[i];
        const RatPoint& e = vs[(i + 1) % M];
        pts.push_back(s);
        Rat fs = s.x * d.f.x + s.y * d.f.y;
        Rat fe = e.x * d.f.x + e.y * d.f.y;
        if ((fs < 0 && fe > 0) || (fs > 0 && fe < 0)) {
            Rat t = fs / (fs - fe);  // edge point on the crease
            pts.push_back({s.x + t * (e.x - s.x), s.y + t * (e.y - s.y)});
        }
    }
    for (auto& u : pts) u = pl_dual_map(u, d);
    return RationalPolygon::from_points(pts);
}

// ---------------------------------------------------------------------------
// inverses and bounded graph search

// Find a mutation datum on `from` whose result lands in the class of
// `target_nf` (a normal-form polygon).
inline std::optional<MutationData> find_step(const Polygon& from, const Polygon& target_nf) {
    for (const auto& d : find_mutation_data(from))
        if (normal_form(mutate(from, d)) == target_nf) return d;
    return std::nullopt;
}

inline MutationData inverse_mutation(const Polygon& p_prime, const MutationData& /*d*/,
                                     const Polygon& p) {
    if (auto inv = find_step(p_prime, normal_form(p))) return *inv;
    throw NoInverseFound("no mutation on " + p_prime.to_string() + " returns to " + p.to_string());
}

struct GraphBounds {
    std::size_t max_nodes = 500;
    Int max_vertex_coord = 40;   // 0 disables the bound
    Int max_lattice_points = 0;  // 0 disables the bound
};

struct MutationArc {
    std::size_t source, target;
    MutationData data;  // valid for the source node's canonical polygon
};

struct MutationGraph {
    std::vector<Polygon> nodes;  // normal forms; nodes[0] is the seed's class
    std::vector<MutationArc> arcs;
    // parent[v] = (u, d): applying d to nodes[u] lands in the class nodes[v]
    std::vector<std::optional<std::pair<std::size_t, MutationData>>> parent;
    bool exhausted = false;
    GraphBounds bounds;

    std::optional<std::size_t> find(const Polygon& nf) const {
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i] == nf) return i;
        return std::nullopt;
    }

    // path of (polygon, datum) steps from the seed class to node v
    std::vector<std::pair<Polygon, MutationData>> path_to(std::size_t v) const {
        std::vector<std::pair<Polygon, MutationData>> rev;
        while (parent[v]) {
            auto [u, d] = *parent[v];
            rev.emplace_back(nodes[u], d);
            v = u;
        }
        return {rev.rbegin(), rev.rend()};
    }
};

inline bool within_bounds(const Polygon& p, const GraphBounds& b) {
    if (b.max_vertex_coord > 0)
        for (const auto& v : p.vertices())
            if (abs_int(v.x) > b.max_vertex_coord || abs_int(v.y) > b.max_vertex_coord)
                return false;
    if (b.max_lattice_points > 0)
        if (Int(lattice_points(p).size()) > b.max_lattice_points) return false;
    return true;
}

inline MutationGraph mutation_graph(const Polygon& seed, const GraphBounds& bounds = {}) {
    MutationGraph g;
    g.bounds = bounds;
    bool pruned = false;

    std::map<Polygon, std::size_t> index;
    auto add_node = [&](const Polygon& nf,
                        std::optional<std::pair<std::size_t, MutationData>> par)
        -> std::optional<std::size_t> {
        auto it = index.find(nf);
        if (it != index.end()) return it->second;
        if (!within_bounds(nf, bounds) || g.nodes.size() >= bounds.max_nodes) {
            pruned = true;
            return std::nullopt;
        }
        std::size_t id = g.nodes.size();
        g.nodes.push_back(nf);
        g.parent.push_back(std::move(par));
        index.emplace(nf, id);
        return id;
    };

    std::deque<std::size_t> queue;
    Polygon seed_nf = normal_form(seed);
    if (auto id = add_node(seed_nf, std::nullopt)) queue.push_back(*id);
    while (!queue.empty()) {
        std::size_t u = queue.front();
        queue.pop_front();
        for (const auto& d : find_mutation_data(g.nodes[u])) {
            Polygon nf = normal_form(mutate(g.nodes[u], d));
            bool existed = index.count(nf) > 0;
            auto vid = add_node(nf, std::make_pair(u, d));
            if (!vid) continue;
            g.arcs.push_back(MutationArc{u, *vid, d});
            if (!existed) queue.push_back(*vid);
        }
    }
    g.exhausted = !pruned;
    return g;
}

// ---------------------------------------------------------------------------
// bounded equivalence decision

struct EquivalenceResult {
    enum class Kind { Yes, No, Unknown } kind;
    // Yes: steps (canonical polygon, datum applied to it) from p1's class to
    // p2's class; empty when the normal forms already coincide
    std::vector<std::pair<Polygon, MutationData>> path;
    std::string witness;  // No: which invariant (or exhaustion) separates them
};

inline EquivalenceResult are_mutation_equivalent(const Polygon& p1, const Polygon& p2,
                                                 const GraphBounds& bounds = {}) {
    SingularityContent c1 = singularity_content(p1), c2 = singularity_content(p2);
    if (c1 != c2)
        return {EquivalenceResult::Kind::No, {},
                "singularity content " + c1.to_string() + " != " + c2.to_string()};
    Rat d1 = degree(p1), d2 = degree(p2);
    if (d1 != d2)
        return {EquivalenceResult::Kind::No, {},
                "degree " + rat_to_string(d1) + " != " + rat_to_string(d2)};

    Polygon nf1 = normal_form(p1), nf2 = normal_form(p2);
    if (nf1 == nf2) return {EquivalenceResult::Kind::Yes, {}, ""};

    MutationGraph g1 = mutation_graph(nf1, bounds);
    if (auto v = g1.find(nf2)) return {EquivalenceResult::Kind::Yes, g1.path_to(*v), ""};
    if (g1.exhausted)
        return {EquivalenceResult::Kind::No, {},
                "mutation class of the first polygon is finite within bounds and does not "
                "contain the second"};

    MutationGraph g2 = mutation_graph(nf2, bounds);
    if (g2.find(nf1)) {
        // meet at nf1: invert g2's path nf2 -> nf1 into a path nf1 -> nf2.
        // Each step (q_{j-1}, d_j) of the backward path reached class q_j.
        auto back = g2.path_to(*g2.find(nf1));
        std::vector<Polygon> chain;  // nf2 = q_0, q_1, ..., q_k = nf1
        chain.push_back(nf2);
        for (const auto& step : back) chain.push_back(normal_form(mutate(step.first, step.second)));
        std::vector<std::pair<Polygon, MutationData>> fwd;
        for (std::size_t j = chain.size(); j-- > 1;) {
            auto inv = find_step(chain[j], chain[j - 1]);
            if (!inv) throw NoInverseFound("path inversion failed");
            fwd.emplace_back(chain[j], *inv);
        }
        return {EquivalenceResult::Kind::Yes, fwd, ""};
    }
    if (g2.exhausted)
        return {EquivalenceResult::Kind::No, {},
                "mutation class of the second polygon is finite within bounds and does not "
                "contain the first"};
    return {EquivalenceResult::Kind::Unknown, {}, ""};
}

}  // namespace fanopoly
