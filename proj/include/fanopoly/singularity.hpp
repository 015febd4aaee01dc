#pragma once

// Cyclic-quotient singularity calculus: cone types 1/n(1,q), the
// p/w/r/a/m/w0 decomposition, T/R classification, R-content, singularity
// content of a polygon, and the genus of the associated curve.

#include "core.hpp"
#include "polygon.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

namespace fanopoly {

// ---------------------------------------------------------------------------
// the cyclic quotient singularity 1/n(1,q)

struct CyclicQuotient {
    Int n;  // index, positive
    Int q;  // weight, 0 <= q < n, coprime to n (n=1 encodes a smooth point as q=0)

    CyclicQuotient(Int n_, Int q_) : n(std::move(n_)), q(mod_euclid(q_, n)) {
        if (n <= 0) throw DegenerateCone("singularity index must be positive");
        if (n > 1 && gcd_int(q, n) != 1)
            throw DegenerateCone("weight " + q.str() + " is not coprime to index " + n.str());
    }

    // 1/n(1,q) and 1/n(1,q') name the same singularity iff q' = q or q' = q^{-1} mod n;
    // the canonical representative takes the smaller weight.
    CyclicQuotient canonical() const {
        if (n == 1) return *this;
        Int qi = mod_inverse(q, n);
        return CyclicQuotient(n, std::min(q, qi));
    }

    bool is_smooth() const { return n == 1; }

    std::string to_string() const { return "1/" + n.str() + "(1," + q.str() + ")"; }

    friend bool operator==(const CyclicQuotient& a, const CyclicQuotient& b) {
        return a.n == b.n && a.q == b.q;
    }
    friend bool operator!=(const CyclicQuotient& a, const CyclicQuotient& b) { return !(a == b); }
    friend bool operator<(const CyclicQuotient& a, const CyclicQuotient& b) {
        return a.n != b.n ? a.n < b.n : a.q < b.q;
    }
};

// ---------------------------------------------------------------------------
// cone_type: identify the 2D cone spanned by primitive u, v with the model
// cone of 1/n(1,q), i.e. cone{(0,1),(n,-q)}. Either orientation of (u,v) is
// accepted; the result is the canonical representative.

inline CyclicQuotient cone_type(LatticePoint u, LatticePoint v) {
    if (u == LatticePoint{0, 0} || v == LatticePoint{0, 0})
        throw DegenerateCone("cone generator is zero");
    if (!is_primitive(u) || !is_primitive(v))
        throw DegenerateCone("cone generators must be primitive");
    Int n = cross(u, v);
    if (n == 0) throw DegenerateCone("cone generators are parallel");
    if (n < 0) {
        std::swap(u, v);
        n = -n;
    }
    if (n == 1) return CyclicQuotient(1, 0);
    // Send u to (0,1) by a unimodular map; v then lands on (n, k) and the
    // model identification reads q = -k mod n. The row (s,t) is determined up
    // to multiples of (-u.y, u.x), which shift k by multiples of n only.
    Egcd e = egcd(u.x, u.y);  // s*u.x + t*u.y = 1
    Int k = e.s * v.x + e.t * v.y;
    return CyclicQuotient(n, mod_euclid(-k, n)).canonical();
}

// ---------------------------------------------------------------------------
// decomposition p = q+1, w = hcf(n,p), n = w*r, p = w*a, w = m*r + w0

struct ContentDecomposition {
    Int n, q;  // the singularity being decomposed
    Int p, w, r, a, m, w0;
};

inline ContentDecomposition decompose(const CyclicQuotient& s) {
    ContentDecomposition d;
    d.n = s.n;
    d.q = s.q;
    d.p = s.q + 1;
    d.w = gcd_int(s.n, d.p);
    d.r = s.n / d.w;
    d.a = d.p / d.w;
    d.m = floor_div(d.w, d.r);
    d.w0 = d.w - d.m * d.r;
    return d;
}

enum class SingularityClass { PrimitiveT, T, R, Neither };

inline const char* to_string(SingularityClass c) {
    switch (c) {
        case SingularityClass::PrimitiveT: return "primitive-T";
        case SingularityClass::T: return "T";
        case SingularityClass::R: return "R";
        default: return "neither";
    }
}

inline SingularityClass classify(const CyclicQuotient& s) {
    ContentDecomposition d = decompose(s);
    if (d.w0 == 0) return d.m == 1 ? SingularityClass::PrimitiveT : SingularityClass::T;
    if (d.m == 0) return SingularityClass::R;
    return SingularityClass::Neither;
}

// residual singularity 1/(w0*r)(1, w0*a - 1); empty for class T and for the
// trivial (smooth) residue
inline std::optional<CyclicQuotient> r_content(const CyclicQuotient& s) {
    ContentDecomposition d = decompose(s);
    if (d.w0 == 0) return std::nullopt;
    Int rn = d.w0 * d.r;
    if (rn == 1) return std::nullopt;
    return CyclicQuotient(rn, d.w0 * d.a - 1);
}

// ---------------------------------------------------------------------------
// singularity content of a polygon: m summed over all edge cones of the
// spanning fan (smooth cones contribute 1, so m is the Euler number of the
// smooth locus), plus the multiset of residual singularities.

struct SingularityContent {
    Int m;
    std::vector<CyclicQuotient> basket;  // canonical representatives, sorted

    std::string to_string() const {
        std::ostringstream os;
        os << "(" << m << ", {";
        std::size_t i = 0;
        bool first = true;
        while (i < basket.size()) {
            std::size_t j = i;
            while (j < basket.size() && basket[j] == basket[i]) ++j;
            if (!first) os << ", ";
            first = false;
            if (j - i > 1) os << (j - i) << " x ";
            os << basket[i].to_string();
            i = j;
        }
        os << "})";
        return os.str();
    }

    friend bool operator==(const SingularityContent& a, const SingularityContent& b) {
        return a.m == b.m && a.basket == b.basket;
    }
    friend bool operator!=(const SingularityContent& a, const SingularityContent& b) {
        return !(a == b);
    }
    friend bool operator<(const SingularityContent& a, const SingularityContent& b) {
        return a.m != b.m ? a.m < b.m : a.basket < b.basket;
    }
};

inline SingularityContent singularity_content(const Polygon& p) {
    SingularityContent c{0, {}};
    const auto& vs = p.vertices();
    const std::size_t k = vs.size();
    for (std::size_t i = 0; i < k; ++i) {
        CyclicQuotient s = cone_type(vs[i], vs[(i + 1) % k]);
        c.m += decompose(s).m;
        if (auto res = r_content(s)) c.basket.push_back(res->canonical());
    }
    std::sort(c.basket.begin(), c.basket.end());
    return c;
}

// genus of a general member of the anticanonical pencil: 1 + sum of
// w0*(r-1)/2 over the basket
inline Int genus_from_content(const SingularityContent& c) {
    Int twice = 0;
    for (const auto& s : c.basket) {
        ContentDecomposition d = decompose(s);
        twice += d.w0 * (d.r - 1);
    }
    if (mod_euclid(twice, 2) != 0)
        throw NonIntegerGenus("basket genus sum " + twice.str() + "/2 is not an integer");
    return 1 + twice / 2;
}

}  // namespace fanopoly
