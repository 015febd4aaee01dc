// JSON interchange: scalars with arbitrary-precision fallbacks, polygons,
// Laurent polynomials, reports, the mutation-graph JSONL format, and the
// parse-error paths.
#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "support.hpp"

using namespace fanopoly;

namespace {
Polygon p2() { return Polygon::from_points({{1, 0}, {0, 1}, {-1, -1}}); }
Polygon p12() { return Polygon::from_points({{-3, 1}, {3, 1}, {0, -1}}); }
}  // namespace

TEST_CASE("integer and rational json round trips", "[io]") {
    CHECK(int_to_json(Int(42)).is_number_integer());
    CHECK(int_from_json(int_to_json(Int(-17))) == Int(-17));

    Int big("123456789012345678901234567890");
    json jb = int_to_json(big);
    CHECK(jb.is_string());  // beyond 64-bit range: serialized as a string
    CHECK(int_from_json(jb) == big);
    CHECK(int_from_json(json("-99")) == Int(-99));
    CHECK_THROWS_AS(int_from_json(json("notanumber")), ParseError);
    CHECK_THROWS_AS(int_from_json(json::array()), ParseError);

    CHECK(rat_to_json(Rat(8, 3)).get<std::string>() == "8/3");
    CHECK(rat_from_json(json("8/3")) == Rat(8, 3));
    CHECK(rat_from_json(json(5)) == Rat(5));
    CHECK(rat_from_json(json("-7/2")) == Rat(-7, 2));
    CHECK_THROWS_AS(rat_from_json(json::object()), ParseError);
}

TEST_CASE("point and polygon json round trips", "[io]") {
    LatticePoint p{-3, 7};
    CHECK(point_from_json(point_to_json(p)) == p);
    CHECK_THROWS_AS(point_from_json(json::array({1})), ParseError);
    CHECK_THROWS_AS(point_from_json(json("x")), ParseError);

    Polygon poly = p12();
    CHECK(polygon_from_json(polygon_to_json(poly)) == poly);
    CHECK_THROWS_AS(polygon_from_json(json::object()), ParseError);
    CHECK_THROWS_AS(polygon_from_json(json{{"vertices", 3}}), ParseError);
    // valid json, invalid geometry: errors come from the polygon validator
    json degenerate{{"vertices", json::array({json::array({1, 0}), json::array({2, 0}),
                                              json::array({3, 0})})}};
    CHECK_THROWS_AS(polygon_from_json(degenerate), DegenerateHull);
    json not_fano{{"vertices", json::array({json::array({0, 0}), json::array({1, 0}),
                                            json::array({0, 1})})}};
    CHECK_THROWS_AS(polygon_from_json(not_fano), NotFano);

    RationalPolygon q = dual(p2());
    CHECK(rational_polygon_from_json(rational_polygon_to_json(q)) == q);
}

TEST_CASE("laurent polynomial json round trip", "[io]") {
    MMSpace s = mm_space(p12(), 2);
    ParamLaurent g = s.generic();
    json j = laurent_to_json(g);
    CHECK(j["params"] == json::array({"a[-1,0]", "a[1,0]"}));
    ParamLaurent back = laurent_from_json(j);
    CHECK(back == g);
    CHECK(back.params() == g.params());

    // a coefficient with a constant key and a power key
    ParamLaurent h(std::vector<std::string>{"a", "b"});
    h.set_term({1, 0}, ParamPolynomial::monomial({2, 1}, Rat(1, 3)) +
                           ParamPolynomial::constant(Rat(-4)));
    json jh = laurent_to_json(h);
    CHECK(jh["terms"][0]["coeff"]["a^2*b"] == "1/3");
    CHECK(jh["terms"][0]["coeff"]["1"] == "-4");
    CHECK(laurent_from_json(jh) == h);

    CHECK_THROWS_AS(laurent_from_json(json::object()), ParseError);
    CHECK_THROWS_AS(laurent_from_json(json{{"terms", json::array({json::object()})}}),
                    ParseError);
    json unknown_param{{"params", json::array({"a"})},
                       {"terms", json::array({json{{"exp", json::array({1, 0})},
                                                   {"coeff", json{{"z", "1"}}}}})}};
    CHECK_THROWS_AS(laurent_from_json(unknown_param), ParseError);
}

TEST_CASE("content, mm-space, and period json shapes", "[io]") {
    json c = content_to_json(singularity_content(p2()));
    CHECK(c["m"] == 3);
    CHECK(c["basket"].empty());
    CHECK(c["display"] == "(3, {})");

    json cw = content_to_json(singularity_content(p12()));
    CHECK(cw["m"] == 6);
    CHECK(cw["basket"] == json::array({"1/3(1,1)", "1/3(1,1)"}));

    json s = mm_space_to_json(mm_space(p12(), 2));
    CHECK(s["dimension"] == 2);
    CHECK(s["stabilized"] == true);
    CHECK(s["free_points"] == json::array({json::array({-1, 0}), json::array({1, 0})}));
    CHECK(s["display"].get<std::string>().find("a[-1,0]*x^-1") != std::string::npos);

    json per = period_to_json(classical_period(mm_space(p2(), 2).generic(), 4));
    CHECK(per["order"] == 4);
    CHECK(per["display"] == json::array({"1", "0", "0", "6", "0"}));
    CHECK(per["coefficients"][3]["1"] == "6");
}

TEST_CASE("reference coefficient tables parse and validate", "[io]") {
    json good{{"convention", "regularized"},
              {"coeffs", json{{"2", "88"}, {"3", 1620}}},
              {"substitution", json{{"a[-1,0]", "1"}, {"a[1,0]", "2"}}}};
    ReferenceCoeffs ref = reference_from_json(good);
    CHECK(ref.regularized);
    CHECK(ref.coeffs.at(2) == Rat(88));
    CHECK(ref.coeffs.at(3) == Rat(1620));
    CHECK(ref.substitution.at("a[1,0]") == Rat(2));
    PeriodSeries ps = classical_period(mm_space(p12(), 2).generic(), 4);
    CHECK(compare_to_reference(ps, ref).all_match);

    CHECK(reference_from_json(json{{"coeffs", json::object()}}).regularized == false);
    CHECK_THROWS_AS(reference_from_json(json{{"convention", "wild"},
                                             {"coeffs", json::object()}}),
                    ParseError);
    CHECK_THROWS_AS(reference_from_json(json{{"coeffs", json{{"two", "1"}}}}), ParseError);
    CHECK_THROWS_AS(reference_from_json(json::array()), ParseError);
}

TEST_CASE("pencil report json", "[io]") {
    MutationData d = find_mutation_data(p2())[0];
    PencilData pd = build_pencil(p2(), d);
    ProjectionReport proj = verify_projections(pd);
    bool homog = verify_homogeneity(pd);

    json j = pencil_to_json(pd, &proj, &homog);
    CHECK(j["rays"].size() == 4);
    CHECK(j["rays"][0]["name"] == "x");
    CHECK(j["split_confirmed"] == true);
    CHECK(j["trinomial"].size() == 3);
    CHECK(j["projections"]["bounded"] == true);
    CHECK(j["projections"]["primal_ok"] == true);
    CHECK(j["homogeneous"] == true);

    json bare = pencil_to_json(pd, nullptr, nullptr);
    CHECK_FALSE(bare.contains("projections"));
    CHECK_FALSE(bare.contains("homogeneous"));
}

TEST_CASE("mutation graph JSONL", "[io]") {
    MutationGraph g = mutation_graph(p12(), GraphBounds{});
    REQUIRE(g.exhausted);
    REQUIRE(g.nodes.size() == 4);

    std::ostringstream os;
    write_graph_jsonl(os, g);
    std::istringstream is(os.str());
    std::string line;
    std::size_t node_lines = 0, arc_lines = 0;
    while (std::getline(is, line)) {
        json j = parse_json_text(line);
        if (j["record"] == "node") {
            CHECK(j["index"] == node_lines);
            CHECK(j.contains("normal_form_vertices"));
            CHECK(j["content"] == "(6, {2 x 1/3(1,1)})");
            CHECK(j["degree"] == "8/3");
            ++node_lines;
        } else {
            REQUIRE(j["record"] == "arc");
            CHECK(j["source"].get<std::size_t>() < g.nodes.size());
            CHECK(j["target"].get<std::size_t>() < g.nodes.size());
            CHECK(j.contains("h"));
            CHECK(j.contains("f"));
            ++arc_lines;
        }
    }
    CHECK(node_lines == 4);
    CHECK(arc_lines == g.arcs.size());
    CHECK(arc_lines >= 3);  // spanning arcs at minimum
}

TEST_CASE("json text parsing failures carry positions", "[io]") {
    CHECK(parse_json_text("{\"a\": 1}")["a"] == 1);
    CHECK_THROWS_AS(parse_json_text("{oops"), ParseError);
    try {
        parse_json_text("[1, 2");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("unexpected") != std::string::npos);
    }
}
