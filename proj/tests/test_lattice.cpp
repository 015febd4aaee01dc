// Exact integer/rational helpers, polygon construction, duals, degrees, and
// the unimodular normal form.
#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace fanopoly;
using testsupport::Rng;

namespace {
Polygon p2() { return Polygon::from_points({{1, 0}, {0, 1}, {-1, -1}}); }
Polygon square() { return Polygon::from_points({{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}); }
Polygon p12() { return Polygon::from_points({{-3, 1}, {3, 1}, {0, -1}}); }
}  // namespace

TEST_CASE("integer helpers are exact", "[lattice]") {
    CHECK(gcd_int(12, -18) == 6);
    CHECK(gcd_int(0, 7) == 7);
    CHECK(abs_int(Int(-5)) == 5);
    CHECK(floor_div(Int(-7), Int(2)) == -4);
    CHECK(mod_euclid(Int(-7), Int(3)) == 2);
    Egcd e = egcd(240, 46);
    CHECK(e.g == 2);
    CHECK(e.s * 240 + e.t * 46 == e.g);
    CHECK(mod_inverse(3, 7) == 5);
    CHECK(factorial(6) == 720);
    CHECK(binomial(10, 3) == 120);
    CHECK(binomial(Int(-1), Int(2)) == 0);
}

TEST_CASE("rational construction normalizes signs", "[lattice]") {
    CHECK(rat_to_string(make_rat(1, -2)) == "-1/2");
    CHECK(rat_to_string(make_rat(-3, -6)) == "1/2");
    CHECK_THROWS_AS(make_rat(1, 0), Error);
    CHECK(rat_to_string(rat_from_string("1/-2")) == "-1/2");
    CHECK(rat_to_string(rat_from_string("-8/3")) == "-8/3");
    CHECK(rat_to_string(rat_from_string("42")) == "42");
    CHECK_THROWS_AS(rat_from_string("1/0"), Error);
    CHECK_THROWS_AS(rat_from_string("x"), ParseError);
}

TEST_CASE("vector algebra and primitivity", "[lattice]") {
    LatticePoint u{2, 3}, v{-1, 4};
    CHECK(dot(u, v) == 10);
    CHECK(cross(u, v) == 11);
    CHECK(is_primitive({3, 5}));
    CHECK_FALSE(is_primitive({2, 4}));
    CHECK(primitivize({6, -4}) == LatticePoint{3, -2});
}

TEST_CASE("unimodular maps act and invert exactly", "[lattice]") {
    Rng rng(20250819);
    for (int t = 0; t < 200; ++t) {
        UnimodularMap m = testsupport::random_unimodular(rng);
        CHECK(abs_int(m.det()) == 1);
        UnimodularMap inv = m.inverse();
        LatticePoint v{testsupport::rand_int(rng, -9, 9), testsupport::rand_int(rng, -9, 9)};
        CHECK(inv.apply(m.apply(v)) == v);
    }
}

TEST_CASE("polygon construction enforces the Fano conditions", "[lattice]") {
    CHECK_THROWS_AS(Polygon::from_points({{1, 0}, {0, 1}}), DegenerateHull);
    CHECK_THROWS_AS(Polygon::from_points({{1, 0}, {2, 0}, {3, 0}}), DegenerateHull);
    // origin on the boundary
    CHECK_THROWS_AS(Polygon::from_points({{1, 0}, {-1, 0}, {0, 1}}), NotFano);
    // ...but strictly interior in the full pentagon, which is a valid polygon
    CHECK(Polygon::from_points({{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}}).vertices().size() ==
          5);
    // origin outside
    CHECK_THROWS_AS(Polygon::from_points({{1, 1}, {2, 1}, {1, 2}}), NotFano);
    // non-primitive vertex
    CHECK_THROWS_AS(Polygon::from_points({{2, 0}, {0, 1}, {-1, -1}}), NotFano);
    // interior points are absorbed by the hull
    Polygon p = Polygon::from_points({{1, 0}, {0, 1}, {-1, -1}, {0, 0}});
    CHECK(p == p2());
}

TEST_CASE("vertex cycle is counterclockwise from the lex-least vertex", "[lattice]") {
    Polygon p = p2();
    CHECK(p.to_string() == "conv{(-1, -1), (1, 0), (0, 1)}");
    const auto& vs = p.vertices();
    for (std::size_t i = 0; i < vs.size(); ++i)
        CHECK(cross(vs[(i + 1) % vs.size()] - vs[i], vs[(i + 2) % vs.size()] - vs[i]) > 0);
    CHECK(p.contains({0, 0}));
    CHECK(p.contains({1, 0}));
    CHECK_FALSE(p.contains({1, 1}));
}

TEST_CASE("edges carry primitive direction, inner normal, width, height", "[lattice]") {
    for (const Polygon& p : {p2(), square(), p12()}) {
        auto es = edges(p);
        REQUIRE(es.size() == p.size());
        for (const auto& e : es) {
            CHECK(is_primitive(e.direction));
            CHECK(is_primitive(e.inner_normal));
            CHECK(e.height > 0);
            CHECK(e.width >= 0);
            CHECK(dot(e.inner_normal, e.direction) == 0);
            CHECK(dot(e.inner_normal, e.start) == -e.height);
            CHECK(dot(e.inner_normal, e.end) == -e.height);
            CHECK(e.end - e.start == e.width * e.direction);
        }
    }
}

TEST_CASE("lattice point counts", "[lattice]") {
    CHECK(lattice_points(p2()).size() == 4);
    CHECK(lattice_points(square()).size() == 9);
    CHECK(lattice_points(p12()).size() == 11);
}

TEST_CASE("dual polygon and degree on worked polygons", "[lattice]") {
    CHECK(dual(p2()).to_string() == "conv{(-1, -1), (2, -1), (-1, 2)}");
    CHECK(rat_to_string(degree(p2())) == "9");
    CHECK(rat_to_string(degree(square())) == "4");
    CHECK(rat_to_string(degree(p12())) == "8/3");
    // dual of the dual's vertex data: every primal vertex pairs to a dual edge
    RationalPolygon d = dual(square());
    CHECK(d.size() == 4);
    CHECK(d.twice_area() == Rat(4));
}

TEST_CASE("degree is invariant under unimodular maps", "[lattice]") {
    Rng rng(7);
    for (int t = 0; t < 100; ++t) {
        Polygon p = testsupport::random_fano(rng, 5);
        UnimodularMap m = testsupport::random_unimodular(rng);
        CHECK(degree(apply(m, p)) == degree(p));
        CHECK(lattice_points(apply(m, p)).size() == lattice_points(p).size());
    }
}

TEST_CASE("normal form is idempotent and unimodular-invariant", "[lattice]") {
    CHECK(normal_form(p2()).to_string() == "conv{(-1, -1), (1, 0), (0, 1)}");
    Rng rng(99);
    for (int t = 0; t < 150; ++t) {
        Polygon p = testsupport::random_fano(rng, 6);
        Polygon nf = normal_form(p);
        CHECK(normal_form(nf) == nf);
        UnimodularMap m = testsupport::random_unimodular(rng);
        CHECK(normal_form(apply(m, p)) == nf);
    }
}

TEST_CASE("distinct worked polygons have distinct normal forms", "[lattice]") {
    CHECK(normal_form(p2()) != normal_form(square()));
    CHECK(normal_form(p2()) != normal_form(p12()));
    Polygon p13 = Polygon::from_points({{-1, -1}, {2, -1}, {1, 1}, {-1, 2}});
    CHECK(normal_form(p12()) != normal_form(p13));
}
