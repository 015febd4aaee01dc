#pragma once

// In-process command-line front end.  `cli::run` takes argv-style arguments
// plus explicit streams so the whole interface is testable without spawning
// processes; the installed binary is a thin wrapper around it.
//
// Exit codes: 0 success, 1 parse/validation error, 2 computation error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fanopoly/census.hpp"
#include "fanopoly/core.hpp"
#include "fanopoly/json_io.hpp"
#include "fanopoly/laurent.hpp"
#include "fanopoly/mutation.hpp"
#include "fanopoly/pencil.hpp"
#include "fanopoly/period.hpp"
#include "fanopoly/polygon.hpp"
#include "fanopoly/singularity.hpp"

namespace fanopoly::cli {

namespace detail {

inline std::string read_text(const std::string& path, std::istream& in) {
    std::ostringstream ss;
    if (path.empty() || path == "-") {
        ss << in.rdbuf();
    } else {
        std::ifstream f(path);
        if (!f) throw ParseError("cannot open input file '" + path + "'");
        ss << f.rdbuf();
    }
    return ss.str();
}

// A file may hold a polygon {"vertices": ...} or a Laurent polynomial
// {"terms": ...}; both yield a parametric Laurent polynomial and a period.
struct PeriodInput {
    ParamLaurent g;
    bool from_polygon = false;
};

inline PeriodInput period_input(const json& j, unsigned depth) {
    if (j.is_object() && j.contains("vertices")) {
        Polygon p = polygon_from_json(j);
        MMSpace space = mm_space(normal_form(p), depth);
        return {space.generic(), true};
    }
    if (j.is_object() && j.contains("terms")) return {laurent_from_json(j), false};
    throw ParseError("expected a polygon {\"vertices\": ...} or a Laurent polynomial "
                     "{\"terms\": ...}");
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
               std::ostream& err) {
    CLI::App app{"exact arithmetic for Fano polygon mutation, singularity content,\n"
                 "maximally-mutable Laurent polynomials, classical periods, and bounded\n"
                 "mutation-equivalence classification"};
    app.name("fanopoly");
    app.require_subcommand(1);

    std::string input = "-", input2, store_path, filter = "none", reference;
    unsigned depth = 2, order = 4;
    long long edge = -1;
    std::size_t max_nodes = 500;
    long long max_coord = 40, max_points = 0, box = 3;
    bool deterministic = false;

    auto add_input = [&](CLI::App* cmd) {
        cmd->add_option("file,-i,--input", input,
                        "input JSON file ('-' or omitted reads standard input)");
    };

    CLI::App* c_nf = app.add_subcommand("normal-form", "canonical form of a polygon");
    add_input(c_nf);
    CLI::App* c_dual = app.add_subcommand("dual", "rational dual polygon");
    add_input(c_dual);
    CLI::App* c_content =
        app.add_subcommand("content", "singularity content and genus of a polygon");
    add_input(c_content);
    CLI::App* c_degree = app.add_subcommand("degree", "degree (dual twice-area)");
    add_input(c_degree);
    CLI::App* c_mutations =
        app.add_subcommand("mutations", "all mutation data of a polygon");
    add_input(c_mutations);
    CLI::App* c_mutate = app.add_subcommand("mutate", "apply the mutation at an edge");
    add_input(c_mutate);
    c_mutate->add_option("-e,--edge", edge, "edge index (as listed by 'mutations')")
        ->required();
    CLI::App* c_graph =
        app.add_subcommand("graph", "bounded mutation graph as JSON lines");
    add_input(c_graph);
    c_graph->add_option("--max-nodes", max_nodes, "node budget (must be positive)");
    c_graph->add_option("--max-coord", max_coord, "vertex coordinate bound, 0 = off");
    c_graph->add_option("--max-points", max_points, "lattice point bound, 0 = off");
    CLI::App* c_mm = app.add_subcommand(
        "mm", "maximally-mutable Laurent polynomials of a polygon");
    add_input(c_mm);
    c_mm->add_option("-d,--depth", depth, "mutation closure depth (default 2)");
    CLI::App* c_period = app.add_subcommand("period", "classical period coefficients");
    add_input(c_period);
    c_period->add_option("-D,--order", order, "truncation order (default 4)");
    c_period->add_option("-d,--depth", depth, "closure depth when input is a polygon");
    c_period->add_option("--reference", reference,
                         "compare against a reference coefficient table");
    CLI::App* c_compare =
        app.add_subcommand("compare", "affine-linear period comparison of two inputs");
    c_compare->add_option("file1", input, "first polygon or Laurent JSON")->required();
    c_compare->add_option("file2", input2, "second polygon or Laurent JSON")->required();
    c_compare->add_option("-D,--order", order, "comparison order (default 4)");
    c_compare->add_option("-d,--depth", depth, "closure depth for polygon inputs");
    CLI::App* c_pencil =
        app.add_subcommand("pencil", "one-step degeneration scaffold at an edge");
    add_input(c_pencil);
    c_pencil->add_option("-e,--edge", edge, "edge index (as listed by 'mutations')")
        ->required();
    CLI::App* c_classify = app.add_subcommand(
        "classify", "bounded census of mutation-equivalence classes");
    c_classify->add_option("-B,--box", box, "vertex coordinate box (default 3)");
    c_classify->add_option("--filter-content", filter,
                           "'none', 'empty', or a cyclic quotient '1/n(1,q)'");
    c_classify->add_option("--max-nodes", max_nodes,
                           "per-member mutation graph node budget");
    c_classify->add_option("--max-coord", max_coord,
                           "mutation graph coordinate bound, 0 = off");
    c_classify->add_option("-d,--depth", depth, "closure depth for signatures");
    c_classify->add_option("-D,--order", order, "period signature order");
    c_classify->add_option("--store", store_path, "append class records to a JSONL store");
    c_classify->add_flag("--deterministic", deterministic,
                         "omit timestamps for byte-identical output");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    bool computing = false;  // false: reading/validating input; true: computing
    try {
        if (app.got_subcommand(c_classify)) {
            if (box < 1) throw Error("--box must be at least 1");
            if (max_nodes == 0) throw Error("--max-nodes must be positive");
            CensusOptions opt;
            opt.box = Int(box);
            opt.filter = ContentFilter::parse(filter);
            opt.bounds = GraphBounds{max_nodes, Int(max_coord), Int(max_points)};
            opt.mm_depth = depth;
            opt.period_order = order;
            opt.deterministic = deterministic;
            opt.store_path = store_path;
            computing = true;
            out << census_report_to_json(run_census(opt)).dump(2) << "\n";
            return 0;
        }
        if (app.got_subcommand(c_compare)) {
            json j1 = parse_json_text(detail::read_text(input, in));
            json j2 = parse_json_text(detail::read_text(input2, in));
            detail::PeriodInput in1 = detail::period_input(j1, depth);
            detail::PeriodInput in2 = detail::period_input(j2, depth);
            computing = true;
            PeriodSeries s1 = classical_period(in1.g, order);
            PeriodSeries s2 = classical_period(in2.g, order);
            CompareResult res = compare_affine(s1, s2, order);
            json jm;
            if (res.match) {
                json mat = json::array();
                for (const auto& row : res.match->matrix) {
                    json r = json::array();
                    for (const auto& v : row) r.push_back(rat_to_json(v));
                    mat.push_back(r);
                }
                json off = json::array();
                for (const auto& v : res.match->offset) off.push_back(rat_to_json(v));
                jm = json{{"matrix", mat},
                          {"offset", off},
                          {"verified_order", res.match->verified_order}};
            }
            out << json{{"match", res.match ? jm : json(nullptr)},
                        {"certified_none", res.certified_none},
                        {"failing_order", res.failing_order},
                        {"detail", res.detail}}
                       .dump(2)
                << "\n";
            return 0;
        }

        // single-input commands
        json j = parse_json_text(detail::read_text(input, in));

        if (app.got_subcommand(c_period)) {
            detail::PeriodInput pin = detail::period_input(j, depth);
            ReferenceCoeffs ref;
            bool have_ref = !reference.empty();
            if (have_ref)
                ref = reference_from_json(
                    parse_json_text(detail::read_text(reference, in)));
            computing = true;
            PeriodSeries s = classical_period(pin.g, order);
            json o = period_to_json(s);
            if (have_ref) {
                ReferenceReport rr = compare_to_reference(s, ref);
                json entries = json::array();
                for (const auto& e : rr.entries)
                    entries.push_back(json{{"order", e.order},
                                           {"expected", rat_to_json(e.expected)},
                                           {"actual", rat_to_json(e.actual)},
                                           {"in_range", e.in_range},
                                           {"match", e.match}});
                o["reference"] = json{{"entries", entries}, {"all_match", rr.all_match}};
            }
            out << o.dump(2) << "\n";
            return 0;
        }

        // remaining commands take a polygon
        Polygon p = polygon_from_json(j);

        if (app.got_subcommand(c_nf)) {
            computing = true;
            json o = polygon_to_json(normal_form(p));
            o["display"] = normal_form(p).to_string();
            out << o.dump(2) << "\n";
        } else if (app.got_subcommand(c_dual)) {
            computing = true;
            RationalPolygon d = dual(p);
            json o = rational_polygon_to_json(d);
            o["display"] = d.to_string();
            out << o.dump(2) << "\n";
        } else if (app.got_subcommand(c_content)) {
            computing = true;
            SingularityContent c = singularity_content(p);
            json o = content_to_json(c);
            o["genus"] = int_to_json(genus_from_content(c));
            out << o.dump(2) << "\n";
        } else if (app.got_subcommand(c_degree)) {
            computing = true;
            out << json{{"degree", rat_to_string(degree(p))}}.dump(2) << "\n";
        } else if (app.got_subcommand(c_mutations)) {
            computing = true;
            json list = json::array();
            for (const auto& d : find_mutation_data(p))
                list.push_back(json{{"h", point_to_json(d.h)},
                                    {"f", point_to_json(d.f)},
                                    {"edge_index", d.edge_index},
                                    {"width", int_to_json(d.w)},
                                    {"h_min", int_to_json(d.h_min)},
                                    {"h_max", int_to_json(d.h_max)},
                                    {"display", d.to_string()}});
            out << json{{"mutations", list}}.dump(2) << "\n";
        } else if (app.got_subcommand(c_mutate)) {
            std::size_t nedges = edges(p).size();
            if (edge < 0 || std::size_t(edge) >= nedges)
                throw InvalidMutationData("edge index " + std::to_string(edge) +
                                          " out of range (polygon has " +
                                          std::to_string(nedges) + " edges)");
            MutationData d = mutation_data_for_edge(p, std::size_t(edge));
            computing = true;
            Polygon q = mutate(p, d);
            json o = polygon_to_json(q);
            o["display"] = q.to_string();
            o["mutation"] = d.to_string();
            out << o.dump(2) << "\n";
        } else if (app.got_subcommand(c_graph)) {
            if (max_nodes == 0) throw Error("--max-nodes must be positive");
            computing = true;
            MutationGraph g =
                mutation_graph(p, GraphBounds{max_nodes, Int(max_coord), Int(max_points)});
            write_graph_jsonl(out, g);
            out << json{{"record", "summary"},
                        {"nodes", g.nodes.size()},
                        {"arcs", g.arcs.size()},
                        {"exhausted", g.exhausted}}
                       .dump()
                << "\n";
        } else if (app.got_subcommand(c_mm)) {
            if (depth == 0) throw Error("--depth must be positive");
            computing = true;
            out << mm_space_to_json(mm_space(p, depth)).dump(2) << "\n";
        } else if (app.got_subcommand(c_pencil)) {
            std::size_t nedges = edges(p).size();
            if (edge < 0 || std::size_t(edge) >= nedges)
                throw InvalidMutationData("edge index " + std::to_string(edge) +
                                          " out of range (polygon has " +
                                          std::to_string(nedges) + " edges)");
            MutationData d = mutation_data_for_edge(p, std::size_t(edge));
            computing = true;
            PencilData pd = build_pencil(p, d);
            ProjectionReport pr = verify_projections(pd);
            bool homog = verify_homogeneity(pd);
            out << pencil_to_json(pd, &pr, &homog).dump(2) << "\n";
        }
        return 0;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return computing ? 2 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

inline int run_main(int argc, char** argv, std::istream& in, std::ostream& out,
                    std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, in, out, err);
}

}  // namespace fanopoly::cli
