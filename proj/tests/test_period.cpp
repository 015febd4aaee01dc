// Classical period series, the affine-linear period matching test, period
// signatures, and comparison against external coefficient tables.
#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace fanopoly;

namespace {
Polygon p2() { return Polygon::from_points({{1, 0}, {0, 1}, {-1, -1}}); }
Polygon p12() { return Polygon::from_points({{-3, 1}, {3, 1}, {0, -1}}); }
Polygon p13() { return Polygon::from_points({{-1, -1}, {2, -1}, {1, 1}, {-1, 2}}); }

ParamPolynomial pvar(std::size_t i, const Rat& c) { return ParamPolynomial::variable(i, c); }
ParamPolynomial pmono(const ParamPolynomial::Monomial& m, const Rat& c) {
    return ParamPolynomial::monomial(m, c);
}
ParamPolynomial pconst(const Rat& c) { return ParamPolynomial::constant(c); }
}  // namespace

TEST_CASE("period of the smooth triangle polynomial", "[period]") {
    MMSpace s = mm_space(p2(), 2);
    PeriodSeries ps = classical_period(s.generic(), 6);
    REQUIRE(ps.order() == 6);
    CHECK(ps.coeff_string(0) == "1");
    CHECK(ps.coeff_string(1) == "0");
    CHECK(ps.coeff_string(2) == "0");
    CHECK(ps.coeff_string(3) == "6");
    CHECK(ps.coeff_string(4) == "0");
    CHECK(ps.coeff_string(5) == "0");
    CHECK(ps.coeff_string(6) == "90");
}

TEST_CASE("period of the wide-triangle family is the expected polynomial identity",
          "[period]") {
    // params: a = a[-1,0] (variable 0), b = a[1,0] (variable 1)
    MMSpace s = mm_space(p12(), 2);
    REQUIRE(s.params == std::vector<std::string>{"a[-1,0]", "a[1,0]"});
    PeriodSeries ps = classical_period(s.generic(), 4);
    CHECK(ps.coeffs[0] == pconst(1));
    CHECK(ps.coeffs[1] == ParamPolynomial());
    CHECK(ps.coeffs[2] == pmono({1, 1}, 2) + pconst(40));
    CHECK(ps.coeffs[3] == pvar(0, 90) + pvar(1, 90));
    CHECK(ps.coeffs[4] == pmono({2, 2}, 6) + pmono({2}, 72) + pmono({1, 1}, 480) +
                              pmono({0, 2}, 72) + pconst(5544));
    CHECK(ps.coeff_string(2) == "2*a[-1,0]*a[1,0] + 40");
    CHECK(ps.coeff_string(3) == "90*a[1,0] + 90*a[-1,0]");
    CHECK(ps.coeff_string(4) ==
          "6*a[-1,0]^2*a[1,0]^2 + 72*a[1,0]^2 + 480*a[-1,0]*a[1,0] + 72*a[-1,0]^2 + 5544");
}

TEST_CASE("period of the quadrilateral family is the expected polynomial identity",
          "[period]") {
    // params: a' = a[0,1] (variable 0), b' = a[1,0] (variable 1)
    MMSpace s = mm_space(p13(), 2);
    REQUIRE(s.params == std::vector<std::string>{"a[0,1]", "a[1,0]"});
    PeriodSeries ps = classical_period(s.generic(), 4);
    CHECK(ps.coeffs[0] == pconst(1));
    CHECK(ps.coeffs[1] == ParamPolynomial());
    CHECK(ps.coeffs[2] == pvar(0, 6) + pvar(1, 6) + pconst(20));
    CHECK(ps.coeffs[3] == pmono({1, 1}, 6) + pvar(0, 54) + pvar(1, 54) + pconst(168));
    CHECK(ps.coeffs[4] == pmono({2}, 90) + pmono({1, 1}, 216) + pmono({0, 2}, 90) +
                              pvar(0, 900) + pvar(1, 900) + pconst(2220));
}

TEST_CASE("no affine-linear identification between the two worked families", "[period]") {
    PeriodSeries a = classical_period(mm_space(p12(), 2).generic(), 4);
    PeriodSeries b = classical_period(mm_space(p13(), 2).generic(), 4);

    CompareResult fwd = compare_affine(a, b, 4);
    CHECK_FALSE(fwd.match.has_value());
    CHECK(fwd.certified_none);
    CHECK(fwd.failing_order == 2);
    CHECK(fwd.detail == "contradictory equation at order 2: 2 = 0");

    CompareResult rev = compare_affine(b, a, 4);
    CHECK(rev.certified_none);
    CHECK(rev.failing_order == 3);

    CompareResult self = compare_affine(a, a, 4);
    REQUIRE(self.match.has_value());
    CHECK_FALSE(self.certified_none);
    CHECK(self.match->verified_order == 4);
}

TEST_CASE("affine matcher recovers a translated reparametrization", "[period]") {
    MMSpace s = mm_space(p12(), 2);
    ParamLaurent g = s.generic();
    // reparametrize: a -> a - 3, b -> b + 5
    std::vector<ParamPolynomial> shift{ParamPolynomial::variable(0) + pconst(-3),
                                       ParamPolynomial::variable(1) + pconst(5)};
    ParamLaurent gs(g.params());
    for (const auto& [e, c] : g.terms()) gs.set_term(e, c.substitute(shift));

    PeriodSeries orig = classical_period(g, 4);
    PeriodSeries shifted = classical_period(gs, 4);
    CompareResult r = compare_affine(shifted, orig, 4);
    REQUIRE(r.match.has_value());
    const AffineMatch& m = *r.match;
    REQUIRE(m.matrix.size() == 2);
    CHECK(m.offset != std::vector<Rat>{0, 0});  // a genuine translation was needed
    // the returned map must actually identify the two series
    std::vector<ParamPolynomial> phi(2);
    for (std::size_t j = 0; j < 2; ++j) {
        phi[j] = pconst(m.offset[j]);
        for (std::size_t i = 0; i < 2; ++i) phi[j] += pvar(i, m.matrix[j][i]);
    }
    for (unsigned d = 0; d <= 4; ++d)
        CHECK(shifted.coeffs[d] == orig.coeffs[d].substitute(phi));
}

TEST_CASE("affine matcher handles mismatched or constant parameter spaces", "[period]") {
    PeriodSeries smooth = classical_period(mm_space(p2(), 2).generic(), 4);
    PeriodSeries wide = classical_period(mm_space(p12(), 2).generic(), 4);

    CompareResult k_mismatch = compare_affine(smooth, wide, 4);
    CHECK(k_mismatch.certified_none);
    CHECK(k_mismatch.detail.find("parameter counts differ") != std::string::npos);

    CompareResult k0 = compare_affine(smooth, smooth, 4);
    REQUIRE(k0.match.has_value());
    CHECK(k0.match->matrix.empty());

    // truncated series must be rejected, not silently compared
    PeriodSeries shallow = classical_period(mm_space(p12(), 2).generic(), 2);
    CHECK_THROWS_AS(compare_affine(shallow, wide, 4), Error);
}

TEST_CASE("period signature collects content, degree, dimension, and series", "[period]") {
    PeriodSignature sig = period_signature(p12(), 1, 4);
    CHECK(sig.nf == normal_form(p12()));
    CHECK(sig.content.to_string() == "(6, {2 x 1/3(1,1)})");
    CHECK(sig.deg == Rat(8, 3));
    CHECK(sig.mm_dim == 2);
    CHECK(sig.stabilized);
    CHECK(sig.series.coeff_string(0) == "1");

    PeriodSignature smooth = period_signature(p2(), 1, 3);
    CHECK(smooth.mm_dim == 0);
    CHECK(smooth.content.to_string() == "(3, {})");
    CHECK(smooth.series.coeff_string(3) == "6");
}

TEST_CASE("reference coefficient comparison, plain and regularized", "[period]") {
    PeriodSeries ps = classical_period(mm_space(p12(), 2).generic(), 4);

    ReferenceCoeffs plain;
    plain.substitution = {{"a[-1,0]", Rat(0)}, {"a[1,0]", Rat(0)}};
    plain.coeffs = {{0, Rat(1)}, {2, Rat(40)}, {3, Rat(0)}, {4, Rat(5544)}};
    ReferenceReport rep = compare_to_reference(ps, plain);
    CHECK(rep.all_match);
    for (const auto& e : rep.entries) {
        CHECK(e.in_range);
        CHECK(e.match);
    }

    ReferenceCoeffs reg;
    reg.regularized = true;  // table stores d! * c_d
    reg.substitution = {{"a[-1,0]", Rat(1)}, {"a[1,0]", Rat(2)}};
    // c_2(1,2) = 2*1*2+40 = 44 -> r_2 = 2!*44 = 88; c_3(1,2) = 270 -> r_3 = 1620
    reg.coeffs = {{2, Rat(88)}, {3, Rat(1620)}};
    CHECK(compare_to_reference(ps, reg).all_match);

    ReferenceCoeffs bad;
    bad.substitution = {{"a[-1,0]", Rat(0)}, {"a[1,0]", Rat(0)}};
    bad.coeffs = {{2, Rat(41)}, {9, Rat(7)}};  // wrong value + out-of-range order
    ReferenceReport br = compare_to_reference(ps, bad);
    CHECK_FALSE(br.all_match);
    REQUIRE(br.entries.size() == 2);
    CHECK_FALSE(br.entries[0].match);
    CHECK(br.entries[0].actual == Rat(40));
    CHECK_FALSE(br.entries[1].in_range);  // ignored by all_match
}

TEST_CASE("period is invariant under torus coordinate changes", "[period][properties]") {
    testsupport::Rng rng(20260819u);
    for (int trial = 0; trial < 60; ++trial) {
        Polygon p = testsupport::random_fano(rng, 4);
        MMSpace s = mm_space(p, 1);
        ParamLaurent g = s.generic();
        UnimodularMap U = testsupport::random_unimodular(rng);
        ParamLaurent gU(g.params());
        for (const auto& [e, c] : g.terms()) gU.set_term(U.apply(e), c);
        PeriodSeries a = classical_period(g, 5);
        PeriodSeries b = classical_period(gU, 5);
        for (unsigned d = 0; d <= 5; ++d) REQUIRE(a.coeffs[d] == b.coeffs[d]);
    }
}
