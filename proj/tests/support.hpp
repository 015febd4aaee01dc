// Shared helpers for the test suites: deterministic random Fano polygons,
// random unimodular maps, and a brute-force oracle for cone classification.
#pragma once

#include <optional>
#include <random>
#include <vector>

#include "fanopoly/fanopoly.hpp"

namespace testsupport {

using namespace fanopoly;

using Rng = std::mt19937_64;

// Uniform integer in [lo, hi].
inline long long rand_int(Rng& rng, long long lo, long long hi) {
    return std::uniform_int_distribution<long long>(lo, hi)(rng);
}

// A random element of GL_2(Z) built from shears and the quarter turn, so the
// entries stay small enough for exact tests to run fast.
inline UnimodularMap random_unimodular(Rng& rng) {
    UnimodularMap m{1, 0, 0, 1};
    int steps = int(rand_int(rng, 2, 5));
    for (int s = 0; s < steps; ++s) {
        if (rand_int(rng, 0, 1)) {
            Int k = rand_int(rng, -3, 3);
            // right-multiply by [[1, k], [0, 1]]
            m = UnimodularMap{m.a, m.a * k + m.b, m.c, m.c * k + m.d};
        } else {
            // right-multiply by [[0, -1], [1, 0]]
            m = UnimodularMap{m.b, -m.a, m.d, -m.c};
        }
    }
    return m;
}

// Rejection-sample a Fano polygon whose vertices lie in [-box, box]^2.
inline Polygon random_fano(Rng& rng, long long box) {
    for (;;) {
        std::vector<LatticePoint> pts;
        int n = int(rand_int(rng, 3, 6));
        for (int i = 0; i < n; ++i)
            pts.push_back({Int(rand_int(rng, -box, box)), Int(rand_int(rng, -box, box))});
        try {
            return Polygon::from_points(pts);
        } catch (const Error&) {
            // degenerate hull, non-primitive vertex, or origin not interior
        }
    }
}

// As above but guaranteed to admit at least one mutation.
inline std::pair<Polygon, std::vector<MutationData>> random_mutable_fano(Rng& rng,
                                                                         long long box) {
    for (;;) {
        Polygon p = random_fano(rng, box);
        std::vector<MutationData> data = find_mutation_data(p);
        if (!data.empty()) return {p, std::move(data)};
    }
}

// Brute-force classification oracle for the cone over a lattice edge, fully
// independent of the library's arithmetic.  A cone with primitive ray pair
// (u, v), oriented so cross(u, v) = n > 0, is lattice-equivalent to the
// standard cone of 1/n(1, q) for exactly one q in [0, n).  The standard cone
// is characterized inside the lattice by (v + q*u)/n being a lattice point:
// the quotient of the lattice by the ray span is cyclic of order n, generated
// by that point.  The oracle simply scans every candidate q in [0, n) and
// keeps the (provably unique) one where both coordinates of v + q*u are
// divisible by n.  Ordered pairs with cross(u, v) < 0 are swapped first, the
// same normalization the classification applies to clockwise input.
inline std::optional<CyclicQuotient> oracle_cone_type(LatticePoint u, LatticePoint v) {
    if (gcd_int(u.x, u.y) != 1 || gcd_int(v.x, v.y) != 1) return std::nullopt;
    Int n = cross(u, v);
    if (n == 0) return std::nullopt;
    if (n < 0) {
        std::swap(u, v);
        n = -n;
    }
    std::optional<Int> found;
    for (Int q = 0; q < n; ++q) {
        Int x = v.x + q * u.x, y = v.y + q * u.y;
        if (x % n == 0 && y % n == 0) {
            if (found) return std::nullopt;  // not unique: contradiction
            found = q;
        }
    }
    if (!found) return std::nullopt;
    // Swapping the rays replaces q by its inverse mod n; report the smaller
    // of the two, finding the inverse by scan to stay formula-free.
    Int q = *found, qi = q;
    for (Int m = 1; m < n; ++m)
        if (mod_euclid(q * m, n) == 1) {
            qi = m;
            break;
        }
    if (n == 1) return CyclicQuotient(1, 0);
    return CyclicQuotient(n, std::min(q, qi));
}

}  // namespace testsupport
