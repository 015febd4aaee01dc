#pragma once

// Lattice and rational polygons: convex hulls, Fano validation, edges,
// lattice-point enumeration, duals, degree, and the unimodular normal form.

#include "core.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

namespace fanopoly {

// ---------------------------------------------------------------------------
// convex hull (monotone chain), shared by lattice and rational coordinates.
// Returns the strictly convex hull vertices in counterclockwise order starting
// at the lexicographically smallest vertex. Collinear interior points and
// duplicates are dropped. Degenerate inputs yield fewer than 3 points.

template <class T>
std::vector<Vec2<T>> hull_ccw(std::vector<Vec2<T>> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t n = pts.size();
    if (n <= 2) return pts;

    std::vector<Vec2<T>> h(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {  // lower chain
        while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {  // upper chain
        while (k >= t && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);  // last point repeats the first
    if (h.size() < 3) return {h.begin(), h.end()};
    return h;
}

// ---------------------------------------------------------------------------
// edges

struct Edge {
    LatticePoint start, end;    // counterclockwise orientation
    LatticePoint direction;     // primitive, end - start == width * direction
    LatticePoint inner_normal;  // primitive h with <h, edge> == -height
    Int width;                  // lattice length of the edge
    Int height;                 // lattice distance of the supporting line from the origin
};

class Polygon;
Polygon normal_form(const Polygon& p);

// ---------------------------------------------------------------------------
// Fano polygon: counterclockwise vertex cycle (canonically rotated to start at
// the lexicographically smallest vertex), origin strictly interior, all
// vertices primitive.

class Polygon {
public:
    static Polygon from_points(const std::vector<LatticePoint>& pts) {
        std::vector<LatticePoint> vs = hull_ccw(pts);
        if (vs.size() < 3) throw DegenerateHull();
        for (const auto& v : vs) {
            if (!is_primitive(v))
                throw NotFano("vertex (" + v.x.str() + ", " + v.y.str() + ") is not primitive");
        }
        // origin strictly interior: strictly left of every directed edge
        const std::size_t m = vs.size();
        for (std::size_t i = 0; i < m; ++i) {
            const LatticePoint& s = vs[i];
            const LatticePoint& e = vs[(i + 1) % m];
            if (cross(e - s, -s) <= 0) throw NotFano("origin is not strictly interior");
        }
        return Polygon(std::move(vs));
    }

    const std::vector<LatticePoint>& vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }

    bool contains(const LatticePoint& p) const {
        const std::size_t m = vertices_.size();
        for (std::size_t i = 0; i < m; ++i) {
            if (cross(vertices_[(i + 1) % m] - vertices_[i], p - vertices_[i]) < 0) return false;
        }
        return true;
    }

    friend bool operator==(const Polygon& a, const Polygon& b) { return a.vertices_ == b.vertices_; }
    friend bool operator!=(const Polygon& a, const Polygon& b) { return !(a == b); }
    friend bool operator<(const Polygon& a, const Polygon& b) { return a.vertices_ < b.vertices_; }

    std::string to_string() const {
        std::ostringstream os;
        os << "conv{";
        for (std::size_t i = 0; i < vertices_.size(); ++i) {
            if (i) os << ", ";
            os << "(" << vertices_[i].x << ", " << vertices_[i].y << ")";
        }
        os << "}";
        return os.str();
    }

private:
    explicit Polygon(std::vector<LatticePoint> vs) : vertices_(std::move(vs)) {}
    std::vector<LatticePoint> vertices_;
};

inline Polygon convex_hull(const std::vector<LatticePoint>& pts) { return Polygon::from_points(pts); }

inline Polygon apply(const UnimodularMap& u, const Polygon& p) {
    std::vector<LatticePoint> vs;
    vs.reserve(p.size());
    for (const auto& v : p.vertices()) vs.push_back(u.apply(v));
    return Polygon::from_points(vs);
}

inline std::vector<Edge> edges(const Polygon& p) {
    std::vector<Edge> es;
    const auto& vs = p.vertices();
    const std::size_t m = vs.size();
    es.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const LatticePoint& s = vs[i];
        const LatticePoint& e = vs[(i + 1) % m];
        LatticePoint d = e - s;
        Int w = gcd_int(d.x, d.y);
        LatticePoint dir{d.x / w, d.y / w};
        LatticePoint n{-d.y, d.x};  // inward for CCW order
        Int ng = gcd_int(n.x, n.y);
        n = {n.x / ng, n.y / ng};
        Int height = -dot(n, s);
        es.push_back(Edge{s, e, dir, n, w, height});
    }
    return es;
}

// all lattice points of p, in lexicographic (x, y) order
inline std::vector<LatticePoint> lattice_points(const Polygon& p) {
    Int xmin = p.vertices()[0].x, xmax = xmin, ymin = p.vertices()[0].y, ymax = ymin;
    for (const auto& v : p.vertices()) {
        xmin = std::min(xmin, v.x);
        xmax = std::max(xmax, v.x);
        ymin = std::min(ymin, v.y);
        ymax = std::max(ymax, v.y);
    }
    std::vector<LatticePoint> pts;
    for (Int x = xmin; x <= xmax; ++x)
        for (Int y = ymin; y <= ymax; ++y)
            if (p.contains({x, y})) pts.push_back({x, y});
    return pts;
}

// ---------------------------------------------------------------------------
// rational polygons (duals live here)

class RationalPolygon {
public:
    static RationalPolygon from_points(const std::vector<RatPoint>& pts) {
        std::vector<RatPoint> vs = hull_ccw(pts);
        if (vs.size() < 3) throw DegenerateHull("rational hull is degenerate");
        return RationalPolygon(std::move(vs));
    }

    const std::vector<RatPoint>& vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }

    // twice the Euclidean area (the shoelace total; nonnegative for CCW order)
    Rat twice_area() const {
        Rat s = 0;
        const std::size_t m = vertices_.size();
        for (std::size_t i = 0; i < m; ++i) s += cross(vertices_[i], vertices_[(i + 1) % m]);
        return s;
    }

    friend bool operator==(const RationalPolygon& a, const RationalPolygon& b) {
        return a.vertices_ == b.vertices_;
    }
    friend bool operator!=(const RationalPolygon& a, const RationalPolygon& b) { return !(a == b); }

    std::string to_string() const {
        std::ostringstream os;
        os << "conv{";
        for (std::size_t i = 0; i < vertices_.size(); ++i) {
            if (i) os << ", ";
            os << "(" << rat_to_string(vertices_[i].x) << ", " << rat_to_string(vertices_[i].y) << ")";
        }
        os << "}";
        return os.str();
    }

private:
    explicit RationalPolygon(std::vector<RatPoint> vs) : vertices_(std::move(vs)) {}
    std::vector<RatPoint> vertices_;
};

inline RationalPolygon apply(const UnimodularMap& u, const RationalPolygon& p) {
    std::vector<RatPoint> vs;
    vs.reserve(p.size());
    for (const auto& v : p.vertices()) vs.push_back(u.apply(v));
    return RationalPolygon::from_points(vs);
}

// dual polygon Q = { u : <rho, u> >= -1 for every vertex rho of p }.
// The vertex of Q dual to the edge [s, e] solves <s,u> = <e,u> = -1.
inline RatPoint dual_vertex(const LatticePoint& s, const LatticePoint& e) {
    Int dt = cross(s, e);  // positive for CCW edges of a Fano polygon
    return {Rat(s.y - e.y) / dt, Rat(e.x - s.x) / dt};
}

inline RationalPolygon dual(const Polygon& p) {
    const auto& vs = p.vertices();
    const std::size_t m = vs.size();
    std::vector<RatPoint> dv;
    dv.reserve(m);
    for (std::size_t i = 0; i < m; ++i) dv.push_back(dual_vertex(vs[i], vs[(i + 1) % m]));
    return RationalPolygon::from_points(dv);
}

// degree of the toric surface X_p: twice the area of the dual polygon
inline Rat degree(const Polygon& p) { return dual(p).twice_area(); }

// ---------------------------------------------------------------------------
// normal form under GL_2(Z) x (cyclic relabeling)
//
// For every rotation of the CCW vertex cycle and of the reversed cycle, put
// the 2 x m vertex matrix into left Hermite normal form (the canonical
// representative of its GL_2(Z)-orbit) and take the lexicographically least
// flattened matrix. Unimodular images and relabelings produce identical
// candidate sets, so the winner is a class invariant.

namespace detail {

struct VertexMatrix {
    std::vector<Int> r0, r1;  // rows
};

inline VertexMatrix hermite_rows(const std::vector<LatticePoint>& cycle, std::size_t start, bool reversed) {
    const std::size_t m = cycle.size();
    VertexMatrix vm;
    vm.r0.resize(m);
    vm.r1.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        const LatticePoint& v =
            reversed ? cycle[(start + m - k) % m] : cycle[(start + k) % m];
        vm.r0[k] = v.x;
        vm.r1[k] = v.y;
    }
    // clear the lower entry of column 0 with a unimodular row operation
    if (vm.r1[0] != 0) {
        Egcd e = egcd(vm.r0[0], vm.r1[0]);
        Int u = vm.r0[0] / e.g, l = vm.r1[0] / e.g;
        for (std::size_t k = 0; k < m; ++k) {
            Int a = vm.r0[k], b = vm.r1[k];
            vm.r0[k] = e.s * a + e.t * b;
            vm.r1[k] = -l * a + u * b;
        }
    }
    if (vm.r0[0] < 0)
        for (std::size_t k = 0; k < m; ++k) vm.r0[k] = -vm.r0[k];
    // second pivot: first column with a nonzero lower entry (exists: rank 2)
    std::size_t j = 1;
    while (j < m && vm.r1[j] == 0) ++j;
    if (vm.r1[j] < 0)
        for (std::size_t k = 0; k < m; ++k) vm.r1[k] = -vm.r1[k];
    Int q = floor_div(vm.r0[j], vm.r1[j]);  // reduce the entry above the pivot into [0, pivot)
    if (q != 0)
        for (std::size_t k = 0; k < m; ++k) vm.r0[k] -= q * vm.r1[k];
    return vm;
}

inline std::vector<Int> flatten_columns(const VertexMatrix& vm) {
    std::vector<Int> flat;
    flat.reserve(2 * vm.r0.size());
    for (std::size_t k = 0; k < vm.r0.size(); ++k) {
        flat.push_back(vm.r0[k]);
        flat.push_back(vm.r1[k]);
    }
    return flat;
}

}  // namespace detail

inline Polygon normal_form(const Polygon& p) {
    const auto& vs = p.vertices();
    const std::size_t m = vs.size();
    std::optional<std::vector<Int>> best;
    for (int rev = 0; rev < 2; ++rev) {
        for (std::size_t s = 0; s < m; ++s) {
            auto flat = detail::flatten_columns(detail::hermite_rows(vs, s, rev != 0));
            if (!best || flat < *best) best = std::move(flat);
        }
    }
    std::vector<LatticePoint> out;
    out.reserve(m);
    for (std::size_t k = 0; k < m; ++k) out.push_back({(*best)[2 * k], (*best)[2 * k + 1]});
    return Polygon::from_points(out);
}

}  // namespace fanopoly
