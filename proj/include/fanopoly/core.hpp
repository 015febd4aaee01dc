#pragma once

// Exact arithmetic foundation shared by the whole library: arbitrary-precision
// integers/rationals, 2D lattice/rational vectors, extended gcd, unimodular
// maps, and the error taxonomy.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fanopoly {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------------
// errors

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateHull : Error {
    explicit DegenerateHull(const std::string& msg = "hull is degenerate (fewer than 3 non-collinear points)")
        : Error(msg) {}
};
struct NotFano : Error {
    explicit NotFano(const std::string& msg) : Error(msg) {}
};
struct InvalidMutationData : Error {
    explicit InvalidMutationData(const std::string& msg) : Error(msg) {}
};
struct DegenerateCone : Error {
    explicit DegenerateCone(const std::string& msg = "cone generators are linearly dependent") : Error(msg) {}
};
struct NoInverseFound : Error {
    explicit NoInverseFound(const std::string& msg = "no inverse mutation datum recovers the source polygon")
        : Error(msg) {}
};
struct NonIntegerGenus : Error {
    explicit NonIntegerGenus(const std::string& msg = "basket genus sum is not an integer") : Error(msg) {}
};
struct EmptySpace : Error {
    explicit EmptySpace(const std::string& msg = "maximally-mutable constraint system is inconsistent")
        : Error(msg) {}
};
struct NonIntegralRay : Error {
    explicit NonIntegralRay(const std::string& msg = "pencil ray has non-integral last coordinate") : Error(msg) {}
};
struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

// ---------------------------------------------------------------------------
// integer helpers

inline Int abs_int(const Int& a) { return a < 0 ? Int(-a) : a; }

inline Int gcd_int(Int a, Int b) {
    a = abs_int(a);
    b = abs_int(b);
    while (b != 0) {
        Int t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// floor division; b must be nonzero
inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b;  // truncates toward zero
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline Int mod_euclid(const Int& a, const Int& b) {  // result in [0, |b|)
    Int r = a % b;
    if (r < 0) r += abs_int(b);
    return r;
}

// extended gcd: returns g >= 0 and (s, t) with s*a + t*b == g
struct Egcd {
    Int g, s, t;
};
inline Egcd egcd(Int a, Int b) {
    Int s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (b != 0) {
        Int q = a / b;
        Int r = a - q * b;
        a = b;
        b = r;
        Int s2 = s0 - q * s1, t2 = t0 - q * t1;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    if (a < 0) return {-a, -s0, -t0};
    return {a, s0, t0};
}

// inverse of a modulo n (n >= 1, hcf(a,n) == 1); returns value in [0, n)
inline Int mod_inverse(const Int& a, const Int& n) {
    if (n == 1) return 0;
    Egcd e = egcd(mod_euclid(a, n), n);
    return mod_euclid(e.s, n);
}

inline Int factorial(unsigned n) {
    Int r = 1;
    for (unsigned k = 2; k <= n; ++k) r *= k;
    return r;
}

inline Int binomial(const Int& n, Int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    Int r = 1;
    for (Int i = 0; i < k; ++i) {
        r *= n - i;
        r /= i + 1;
    }
    return r;
}

// Exact quotient num/den as a rational; den must be nonzero.  The underlying
// rational type rejects negative denominators in its two-argument
// constructor, so the sign is normalized here.
inline Rat make_rat(Int num, Int den) {
    if (den == 0) throw Error("zero denominator in rational construction");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    return Rat(num, den);
}

// ---------------------------------------------------------------------------
// rational string io ("num/den" with reduced output, plain integers allowed)

inline std::string rat_to_string(const Rat& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) s += "/" + denominator(r).str();
    return s;
}

inline Rat rat_from_string(const std::string& s) {
    auto bad = [&]() { throw ParseError("invalid rational literal: '" + s + "'"); };
    if (s.empty()) bad();
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) bad();
        return make_rat(num, den);
    } catch (const std::runtime_error&) {
        bad();
    }
    return Rat();  // unreachable
}

// ---------------------------------------------------------------------------
// 2D vectors over an exact coordinate ring

template <class T>
struct Vec2 {
    T x{}, y{};

    Vec2() = default;
    Vec2(T xx, T yy) : x(std::move(xx)), y(std::move(yy)) {}

    friend Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
    friend Vec2 operator*(const T& s, const Vec2& a) { return {s * a.x, s * a.y}; }

    friend bool operator==(const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }
    friend bool operator!=(const Vec2& a, const Vec2& b) { return !(a == b); }
    friend bool operator<(const Vec2& a, const Vec2& b) {  // lexicographic
        if (a.x != b.x) return a.x < b.x;
        return a.y < b.y;
    }
};

using LatticePoint = Vec2<Int>;  // point of N, or of the dual lattice M when used as a functional
using RatPoint = Vec2<Rat>;

// pairing <u, v> (used both for M x N pairing and plain dot products)
template <class T>
inline T dot(const Vec2<T>& u, const Vec2<T>& v) {
    return u.x * v.x + u.y * v.y;
}

// determinant det(u v) of the 2x2 matrix with columns u, v
template <class T>
inline T cross(const Vec2<T>& u, const Vec2<T>& v) {
    return u.x * v.y - u.y * v.x;
}

inline bool is_primitive(const LatticePoint& v) { return gcd_int(v.x, v.y) == 1; }

// divide out the content; v must be nonzero
inline LatticePoint primitivize(const LatticePoint& v) {
    Int g = gcd_int(v.x, v.y);
    return {v.x / g, v.y / g};
}

inline RatPoint to_rational(const LatticePoint& v) { return {Rat(v.x), Rat(v.y)}; }

// mixed pairing: integer functional against rational point
inline Rat dot(const LatticePoint& h, const RatPoint& u) { return Rat(h.x) * u.x + Rat(h.y) * u.y; }

// ---------------------------------------------------------------------------
// unimodular maps (GL_2(Z)), row-major entries {{a, b}, {c, d}}

struct UnimodularMap {
    Int a{1}, b{0}, c{0}, d{1};

    UnimodularMap() = default;
    UnimodularMap(Int aa, Int bb, Int cc, Int dd)
        : a(std::move(aa)), b(std::move(bb)), c(std::move(cc)), d(std::move(dd)) {
        if (abs_int(det()) != 1) throw Error("matrix is not unimodular");
    }

    Int det() const { return a * d - b * c; }

    LatticePoint apply(const LatticePoint& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    RatPoint apply(const RatPoint& v) const { return {Rat(a) * v.x + Rat(b) * v.y, Rat(c) * v.x + Rat(d) * v.y}; }

    UnimodularMap inverse() const {
        Int dt = det();  // +1 or -1
        return UnimodularMap(d / dt, -b / dt, -c / dt, a / dt);
    }
    UnimodularMap transpose() const { return UnimodularMap(a, c, b, d); }
    // action on the dual lattice: functionals transform by the inverse transpose
    UnimodularMap dual_map() const { return inverse().transpose(); }

    friend UnimodularMap operator*(const UnimodularMap& m, const UnimodularMap& n) {
        return UnimodularMap(m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c,
                             m.c * n.b + m.d * n.d);
    }
    friend bool operator==(const UnimodularMap& m, const UnimodularMap& n) {
        return m.a == n.a && m.b == n.b && m.c == n.c && m.d == n.d;
    }
};

// a unimodular map sending the primitive vector f to (1, 0); det == +1
inline UnimodularMap basis_map_to_e1(const LatticePoint& f) {
    Egcd e = egcd(f.x, f.y);
    if (e.g != 1) throw Error("basis_map_to_e1 requires a primitive vector");
    return UnimodularMap(e.s, e.t, -f.y, f.x);
}

}  // namespace fanopoly
