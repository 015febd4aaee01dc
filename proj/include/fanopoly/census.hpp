#pragma once

// Bounded classification: enumerate every Fano polygon whose vertices lie in
// a coordinate box, group the survivors of a singularity-content filter into
// clusters joined by explicit mutation paths, and separate the remaining
// cluster pairs by invariants (content, degree, parameter-space dimension,
// certified period non-matching).  Verdicts are three-valued: joined /
// separated / unresolved.  Results persist as append-only JSONL records.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fanopoly/core.hpp"
#include "fanopoly/json_io.hpp"
#include "fanopoly/laurent.hpp"
#include "fanopoly/mutation.hpp"
#include "fanopoly/period.hpp"
#include "fanopoly/polygon.hpp"
#include "fanopoly/singularity.hpp"

namespace fanopoly {

// ---------------------------------------------------------------------------
// enumeration: all Fano polygons with vertices in [-box, box]^2, up to
// unimodular equivalence, as sorted normal forms
// ---------------------------------------------------------------------------

inline std::vector<Polygon> enumerate_fano_polygons(const Int& box) {
    if (box < 1) throw Error("box size must be at least 1");
    const long long B = box.convert_to<long long>();

    // primitive points of the box in counterclockwise angular order
    std::vector<LatticePoint> pts;
    for (long long x = -B; x <= B; ++x)
        for (long long y = -B; y <= B; ++y) {
            if (x == 0 && y == 0) continue;
            LatticePoint p{Int(x), Int(y)};
            if (is_primitive(p)) pts.push_back(p);
        }
    auto half = [](const LatticePoint& p) { return (p.y > 0 || (p.y == 0 && p.x > 0)) ? 0 : 1; };
    std::sort(pts.begin(), pts.end(), [&](const LatticePoint& a, const LatticePoint& b) {
        if (half(a) != half(b)) return half(a) < half(b);
        return cross(a, b) > 0;
    });

    // A Fano polygon's vertices wind once around the origin with every
    // angular gap strictly below pi, so its vertex set corresponds to exactly
    // one increasing index chain in the angular order.  Depth-first search
    // over chains with strict convex turns enumerates each polygon once.
    const std::size_t n = pts.size();
    std::set<std::string> seen;
    std::vector<Polygon> out;
    std::vector<std::size_t> chain;

    std::function<void()> extend = [&]() {
        const std::size_t t = chain.size();
        const LatticePoint& last = pts[chain[t - 1]];
        for (std::size_t next = chain[t - 1] + 1; next < n; ++next) {
            const LatticePoint& q = pts[next];
            if (cross(last, q) <= 0) continue;  // angular gap must stay below pi
            if (t >= 2) {
                const LatticePoint& prev = pts[chain[t - 2]];
                if (cross(last - prev, q - last) <= 0) continue;  // strict convex turn
            }
            chain.push_back(next);
            if (chain.size() >= 3) {
                const LatticePoint& first = pts[chain[0]];
                const LatticePoint& second = pts[chain[1]];
                const LatticePoint& prev = pts[chain[chain.size() - 2]];
                if (cross(q, first) > 0 && cross(q - prev, first - q) > 0 &&
                    cross(first - q, second - first) > 0) {
                    std::vector<LatticePoint> vs;
                    vs.reserve(chain.size());
                    for (std::size_t idx : chain) vs.push_back(pts[idx]);
                    Polygon nf = normal_form(Polygon::from_points(vs));
                    if (seen.insert(nf.to_string()).second) out.push_back(nf);
                }
            }
            extend();
            chain.pop_back();
        }
    };
    for (std::size_t s = 0; s + 2 < n; ++s) {
        chain.assign(1, s);
        extend();
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// content filter
// ---------------------------------------------------------------------------

struct ContentFilter {
    enum class Kind { None, EmptyBasket, UniformBasket };
    Kind kind = Kind::None;
    std::optional<CyclicQuotient> type;  // for UniformBasket: k >= 1 copies of this

    bool matches(const SingularityContent& c) const {
        switch (kind) {
            case Kind::None: return true;
            case Kind::EmptyBasket: return c.basket.empty();
            case Kind::UniformBasket: {
                if (c.basket.empty()) return false;
                for (const auto& s : c.basket)
                    if (!(s == *type)) return false;
                return true;
            }
        }
        return false;
    }

    std::string to_string() const {
        switch (kind) {
            case Kind::None: return "none";
            case Kind::EmptyBasket: return "empty";
            case Kind::UniformBasket: return type->to_string();
        }
        return "none";
    }

    // accepted spellings: "none" | "empty" | "1/n(1,q)" (basket of k >= 1
    // copies of the given singularity)
    static ContentFilter parse(const std::string& s) {
        ContentFilter f;
        if (s.empty() || s == "none") return f;
        if (s == "empty") {
            f.kind = Kind::EmptyBasket;
            return f;
        }
        // parse "1/n(1,q)"
        auto bad = [&]() {
            throw ParseError("invalid content filter '" + s +
                             "' (expected \"none\", \"empty\", or \"1/n(1,q)\")");
        };
        if (s.rfind("1/", 0) != 0) bad();
        std::size_t open = s.find('(');
        std::size_t comma = s.find(',', open == std::string::npos ? 0 : open);
        std::size_t close = s.find(')', comma == std::string::npos ? 0 : comma);
        if (open == std::string::npos || comma == std::string::npos ||
            close == std::string::npos)
            bad();
        try {
            Int n(s.substr(2, open - 2));
            std::string one = s.substr(open + 1, comma - open - 1);
            if (one != "1") bad();
            Int q(s.substr(comma + 1, close - comma - 1));
            f.kind = Kind::UniformBasket;
            f.type = CyclicQuotient(n, q);
        } catch (const DegenerateCone&) {
            bad();
        } catch (const std::runtime_error&) {
            bad();
        }
        return f;
    }
};

// ---------------------------------------------------------------------------
// persistent class records (JSONL store, append-only, keyed by normal form)
// ---------------------------------------------------------------------------

struct ClassRecord {
    Polygon normal_form;  // cluster representative
    SingularityContent content;
    Rat deg;
    unsigned mm_dimension = 0;
    unsigned mm_depth = 0;
    bool mm_stabilized = false;
    std::vector<std::string> period_prefix;  // c_0 .. c_D display strings
    Polygon seed;                            // census member that discovered the cluster
    Int box = 0;
    GraphBounds bounds;
    std::string timestamp;  // empty in deterministic mode
};

inline json class_record_to_json(const ClassRecord& r) {
    json verts = json::array();
    for (const auto& v : r.normal_form.vertices()) verts.push_back(point_to_json(v));
    json seed_verts = json::array();
    for (const auto& v : r.seed.vertices()) seed_verts.push_back(point_to_json(v));
    json rec{{"normal_form_vertices", verts},
             {"content", r.content.to_string()},
             {"degree", rat_to_string(r.deg)},
             {"mm_dimension", r.mm_dimension},
             {"mm_depth", r.mm_depth},
             {"mm_stabilized", r.mm_stabilized},
             {"period_prefix", r.period_prefix},
             {"seed_vertices", seed_verts},
             {"box", int_to_json(r.box)},
             {"bounds", json{{"max_nodes", r.bounds.max_nodes},
                             {"max_vertex_coord", int_to_json(r.bounds.max_vertex_coord)},
                             {"max_lattice_points", int_to_json(r.bounds.max_lattice_points)}}}};
    if (!r.timestamp.empty()) rec["timestamp"] = r.timestamp;
    return rec;
}

// Load the set of normal-form keys already present in a JSONL store.
inline std::set<std::string> load_store_keys(const std::string& path) {
    std::set<std::string> keys;
    std::ifstream in(path);
    if (!in) return keys;  // absent store is an empty store
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = parse_json_text(line);
        if (!j.contains("normal_form_vertices")) continue;
        std::vector<LatticePoint> vs;
        for (const auto& v : j["normal_form_vertices"]) vs.push_back(point_from_json(v));
        keys.insert(Polygon::from_points(vs).to_string());
    }
    return keys;
}

// Append records whose keys are not yet present; returns how many were added.
inline std::size_t append_store(const std::string& path, const std::vector<ClassRecord>& recs) {
    std::set<std::string> keys = load_store_keys(path);
    std::ofstream out(path, std::ios::app);
    if (!out) throw Error("cannot open store '" + path + "' for appending");
    std::size_t added = 0;
    for (const auto& r : recs) {
        if (!keys.insert(r.normal_form.to_string()).second) continue;
        out << class_record_to_json(r).dump() << "\n";
        ++added;
    }
    return added;
}

// ---------------------------------------------------------------------------
// census driver
// ---------------------------------------------------------------------------

// Basket shapes whose maximally-mutable family dimension is pinned by the
// classification theory: an empty basket forces a unique polynomial
// (dimension 0) and a basket of k copies of 1/3(1,1) forces a k-dimensional
// family.  Every bounded-depth closure contains the full family, so when the
// computed dimension reaches this value the computed space IS the full family
// and its period data may be used as a rigorous class invariant.
inline std::optional<unsigned> predicted_mm_dimension(const SingularityContent& c) {
    if (c.basket.empty()) return 0u;
    for (const auto& s : c.basket)
        if (!(s.n == 3 && s.q == 1)) return std::nullopt;
    return unsigned(c.basket.size());
}

struct CensusOptions {
    Int box = 3;
    ContentFilter filter;
    GraphBounds bounds{200, 24, 0};  // per-member joining graphs
    unsigned escalation_factor = 5;  // bound multiplier for unresolved pairs
    unsigned mm_depth = 2;
    unsigned period_order = 4;
    bool deterministic = false;
    std::string store_path;  // empty: no persistence
};

struct CensusCluster {
    Polygon representative;        // least normal form in the cluster
    std::vector<Polygon> members;  // census members joined to it
    Polygon seed;                  // first member discovered
    SingularityContent content;
    Rat deg;
    unsigned mm_dimension = 0;
    bool mm_stabilized = false;
    std::vector<std::string> period_prefix;
    std::string signature_bearer;     // member whose parameter space is reported
    unsigned signature_depth = 0;     // closure depth that produced it
    bool signature_converged = false; // dimension matches the basket prediction
};

struct PairResolution {
    std::size_t c1 = 0, c2 = 0;  // cluster indices, c1 < c2
    bool separated = false;      // false means unresolved
    std::string reason;
};

struct CensusReport {
    Int box = 0;
    std::string filter;
    std::size_t polygons_enumerated = 0;
    std::size_t polygons_filtered = 0;
    std::vector<CensusCluster> clusters;
    std::vector<PairResolution> pairs;  // one entry per unordered cluster pair
    bool all_pairs_resolved = true;
    std::size_t store_added = 0;
    std::vector<std::string> notes;
};

inline CensusReport run_census(const CensusOptions& opt) {
    CensusReport rep;
    rep.box = opt.box;
    rep.filter = opt.filter.to_string();

    // ---- enumerate and filter ----
    std::vector<Polygon> all = enumerate_fano_polygons(opt.box);
    rep.polygons_enumerated = all.size();
    std::vector<Polygon> members;
    std::vector<SingularityContent> member_content;
    for (const auto& p : all) {
        SingularityContent c = singularity_content(p);
        if (opt.filter.matches(c)) {
            members.push_back(p);
            member_content.push_back(c);
        }
    }
    rep.polygons_filtered = members.size();
    if (members.empty()) return rep;

    std::map<std::string, std::size_t> index_of;
    for (std::size_t i = 0; i < members.size(); ++i)
        index_of[members[i].to_string()] = i;

    // ---- union-find ----
    std::vector<std::size_t> uf(members.size());
    std::iota(uf.begin(), uf.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t v) {
        while (uf[v] != v) v = uf[v] = uf[uf[v]];
        return v;
    };
    auto unite = [&](std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);  // keep the least index as root
        uf[b] = a;
    };

    // ---- join members via bounded mutation graphs ----
    // Members already joined to an earlier-processed member reuse its graph's
    // reach; this keeps the pass near-linear in practice.  Unjoined pairs get
    // a second, escalated chance below.
    std::vector<bool> processed(members.size(), false);
    std::map<std::size_t, std::set<std::string>> complete_class;  // builder -> all forms
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (find(i) != i && processed[find(i)]) continue;
        MutationGraph g = mutation_graph(members[i], opt.bounds);
        std::set<std::string>* complete = nullptr;
        if (g.exhausted)  // the graph IS the entire (finite) mutation class
            complete = &complete_class.emplace(i, std::set<std::string>{}).first->second;
        for (const auto& node : g.nodes) {
            std::string nf = node.to_string();
            if (complete) complete->insert(nf);
            auto it = index_of.find(nf);
            if (it != index_of.end()) unite(i, it->second);
        }
        processed[find(i)] = true;
    }

    // ---- cluster assembly + invariants (recomputed after any merge) ----
    // Period data separates two clusters only if it is exact, i.e. the
    // computed parameter space equals the full maximally-mutable family.
    // Exactness is certified by matching the basket-predicted dimension;
    // members with few lattice points converge at the shallowest closure
    // depth, so each cluster tries its smallest members first and deepens
    // the closure (up to +2) until the dimension lands.
    struct ClusterSig {
        PeriodSignature sig;
        std::string bearer;
        unsigned depth = 0;
        bool converged = false;
    };
    std::map<std::string, PeriodSignature> signature_cache;  // "<nf>@<depth>"
    auto signature_at = [&](const Polygon& p, unsigned depth) -> const PeriodSignature& {
        std::string key = p.to_string() + "@" + std::to_string(depth);
        auto it = signature_cache.find(key);
        if (it == signature_cache.end()) {
            PeriodSignature sig = period_signature(p, depth, opt.period_order);
            it = signature_cache.emplace(std::move(key), std::move(sig)).first;
        }
        return it->second;
    };
    std::map<std::string, ClusterSig> cluster_sig_cache;  // representative nf
    auto cluster_signature = [&](const CensusCluster& c) -> const ClusterSig& {
        std::string key = c.representative.to_string();
        auto hit = cluster_sig_cache.find(key);
        if (hit != cluster_sig_cache.end()) return hit->second;

        std::optional<unsigned> predicted = predicted_mm_dimension(c.content);
        std::vector<Polygon> bearers = c.members;
        std::sort(bearers.begin(), bearers.end(), [](const Polygon& x, const Polygon& y) {
            std::size_t nx = lattice_points(x).size();
            std::size_t ny = lattice_points(y).size();
            if (nx != ny) return nx < ny;
            return x.to_string() < y.to_string();
        });
        if (bearers.size() > 3) bearers.erase(bearers.begin() + 3, bearers.end());

        ClusterSig best{signature_at(c.representative, opt.mm_depth),
                        c.representative.to_string(), opt.mm_depth, false};
        if (predicted) {
            best.converged = best.sig.mm_dim == *predicted;
            for (unsigned depth = opt.mm_depth;
                 !best.converged && depth <= opt.mm_depth + 2; ++depth)
                for (const auto& bearer : bearers) {
                    const PeriodSignature& sig = signature_at(bearer, depth);
                    if (sig.mm_dim < best.sig.mm_dim) {
                        best.sig = sig;
                        best.bearer = bearer.to_string();
                        best.depth = depth;
                    }
                    if (sig.mm_dim == *predicted) {
                        best.converged = true;
                        break;
                    }
                }
        }
        return cluster_sig_cache.emplace(std::move(key), std::move(best)).first->second;
    };

    auto build_clusters = [&]() {
        std::vector<CensusCluster> cs;
        std::map<std::size_t, std::size_t> root_to_cluster;
        for (std::size_t i = 0; i < members.size(); ++i) {
            std::size_t r = find(i);
            auto it = root_to_cluster.find(r);
            if (it == root_to_cluster.end()) {
                cs.push_back(CensusCluster{members[r], {}, members[r], member_content[r],
                                           degree(members[r]), 0, false, {}});
                it = root_to_cluster.emplace(r, cs.size() - 1).first;
            }
            cs[it->second].members.push_back(members[i]);
        }
        for (auto& c : cs) {
            const ClusterSig& cs_sig = cluster_signature(c);
            c.mm_dimension = unsigned(cs_sig.sig.mm_dim);
            c.mm_stabilized = cs_sig.sig.stabilized;
            c.signature_bearer = cs_sig.bearer;
            c.signature_depth = cs_sig.depth;
            c.signature_converged = cs_sig.converged;
            c.period_prefix.clear();
            for (unsigned d = 0; d <= cs_sig.sig.series.order(); ++d)
                c.period_prefix.push_back(cs_sig.sig.series.coeff_string(d));
        }
        return cs;
    };

    // A cluster one of whose members produced an exhausted graph has a known
    // complete mutation class; any polygon outside that node set is provably
    // inequivalent to the whole cluster.
    auto complete_class_of = [&](const CensusCluster& c) -> const std::set<std::string>* {
        std::size_t root = find(index_of[c.members.front().to_string()]);
        for (const auto& [builder, reach] : complete_class)
            if (find(builder) == root) return &reach;
        return nullptr;
    };

    // ---- pairwise resolution with one escalation round per pair ----
    std::map<std::pair<std::string, std::string>, PairResolution> pair_cache;
    GraphBounds escalated{opt.bounds.max_nodes * opt.escalation_factor,
                          opt.bounds.max_vertex_coord * 2, opt.bounds.max_lattice_points};

    std::vector<CensusCluster> clusters = build_clusters();
    bool merged = true;
    while (merged) {
        merged = false;
        for (std::size_t a = 0; a < clusters.size() && !merged; ++a) {
            for (std::size_t b = a + 1; b < clusters.size() && !merged; ++b) {
                const CensusCluster& A = clusters[a];
                const CensusCluster& B = clusters[b];
                auto key = std::make_pair(A.representative.to_string(),
                                          B.representative.to_string());
                if (pair_cache.count(key)) continue;
                PairResolution res;
                const std::set<std::string>* full_a = complete_class_of(A);
                const std::set<std::string>* full_b = complete_class_of(B);
                if (!(A.content == B.content)) {
                    res.separated = true;
                    res.reason = "singularity content differs: " + A.content.to_string() +
                                 " vs " + B.content.to_string();
                } else if (A.deg != B.deg) {
                    res.separated = true;
                    res.reason = "degree differs: " + rat_to_string(A.deg) + " vs " +
                                 rat_to_string(B.deg);
                } else if (full_a && !full_a->count(B.representative.to_string())) {
                    res.separated = true;
                    res.reason = "mutation class of " + A.representative.to_string() +
                                 " is finite (" + std::to_string(full_a->size()) +
                                 " polygons, fully explored) and excludes the other "
                                 "representative";
                } else if (full_b && !full_b->count(A.representative.to_string())) {
                    res.separated = true;
                    res.reason = "mutation class of " + B.representative.to_string() +
                                 " is finite (" + std::to_string(full_b->size()) +
                                 " polygons, fully explored) and excludes the other "
                                 "representative";
                } else {
                    const ClusterSig& sig_a = cluster_signature(A);
                    const ClusterSig& sig_b = cluster_signature(B);
                    bool exact = sig_a.converged && sig_b.converged;
                    CompareResult cmp;
                    if (exact)
                        cmp = compare_affine(sig_a.sig.series, sig_b.sig.series,
                                             opt.period_order);
                    if (exact && cmp.certified_none) {
                        res.separated = true;
                        res.reason = "period families admit no affine-linear match "
                                     "through order " +
                                     std::to_string(opt.period_order) + " (fails at t^" +
                                     std::to_string(cmp.failing_order) + ")";
                    } else {
                        EquivalenceResult eq = are_mutation_equivalent(
                            A.representative, B.representative, escalated);
                        if (eq.kind == EquivalenceResult::Kind::Yes) {
                            unite(index_of[A.members.front().to_string()],
                                  index_of[B.members.front().to_string()]);
                            clusters = build_clusters();
                            merged = true;
                            continue;
                        }
                        if (eq.kind == EquivalenceResult::Kind::No) {
                            res.separated = true;
                            res.reason = eq.witness;
                        } else if (exact) {
                            res.separated = false;
                            res.reason = "unresolved: periods admit a match and bounded "
                                         "graphs found no path";
                        } else {
                            res.separated = false;
                            res.reason = "unresolved: parameter space not certified "
                                         "exact at closure depth " +
                                         std::to_string(opt.mm_depth + 2) +
                                         " and bounded graphs found no path";
                        }
                    }
                }
                pair_cache[key] = res;
            }
        }
    }

    // ---- final pair table ----
    for (std::size_t a = 0; a < clusters.size(); ++a)
        for (std::size_t b = a + 1; b < clusters.size(); ++b) {
            auto key = std::make_pair(clusters[a].representative.to_string(),
                                      clusters[b].representative.to_string());
            auto it = pair_cache.find(key);
            PairResolution res =
                it != pair_cache.end()
                    ? it->second
                    : PairResolution{0, 0, false, "unresolved: not examined"};
            res.c1 = a;
            res.c2 = b;
            if (!res.separated) rep.all_pairs_resolved = false;
            rep.pairs.push_back(res);
        }
    rep.clusters = clusters;

    std::size_t unconverged = 0;
    for (const auto& c : clusters)
        if (!c.signature_converged) ++unconverged;
    if (unconverged == 0)
        rep.notes.push_back(
            "all cluster parameter spaces certified exact: computed dimension matches "
            "the basket-predicted family dimension");
    else
        rep.notes.push_back(
            std::to_string(unconverged) +
            " cluster parameter space(s) not certified exact at closure depth <= " +
            std::to_string(opt.mm_depth + 2) +
            "; period separation was disabled for pairs involving them");

    // ---- persistence ----
    if (!opt.store_path.empty()) {
        std::vector<ClassRecord> recs;
        for (const auto& c : clusters) {
            ClassRecord r{c.representative,  c.content,        c.deg,
                          c.mm_dimension,    c.signature_depth, c.mm_stabilized,
                          c.period_prefix,   c.seed,           opt.box,
                          opt.bounds,        std::string()};
            if (!opt.deterministic) {
                std::time_t now = std::chrono::system_clock::to_time_t(
                    std::chrono::system_clock::now());
                char buf[32];
                std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
                r.timestamp = buf;
            }
            recs.push_back(std::move(r));
        }
        rep.store_added = append_store(opt.store_path, recs);
    }
    return rep;
}

inline json census_report_to_json(const CensusReport& rep) {
    json clusters = json::array();
    for (const auto& c : rep.clusters) {
        json mems = json::array();
        for (const auto& m : c.members) mems.push_back(polygon_to_json(m)["vertices"]);
        clusters.push_back(json{{"representative", polygon_to_json(c.representative)},
                                {"members", mems},
                                {"content", c.content.to_string()},
                                {"degree", rat_to_string(c.deg)},
                                {"mm_dimension", c.mm_dimension},
                                {"mm_stabilized", c.mm_stabilized},
                                {"signature_bearer", c.signature_bearer},
                                {"signature_depth", c.signature_depth},
                                {"signature_converged", c.signature_converged},
                                {"period_prefix", c.period_prefix}});
    }
    json pairs = json::array();
    for (const auto& p : rep.pairs)
        pairs.push_back(json{{"clusters", json::array({p.c1, p.c2})},
                             {"separated", p.separated},
                             {"reason", p.reason}});
    return json{{"box", int_to_json(rep.box)},
                {"filter", rep.filter},
                {"polygons_enumerated", rep.polygons_enumerated},
                {"polygons_filtered", rep.polygons_filtered},
                {"cluster_count", rep.clusters.size()},
                {"clusters", clusters},
                {"pairs", pairs},
                {"all_pairs_resolved", rep.all_pairs_resolved},
                {"store_added", rep.store_added},
                {"notes", rep.notes}};
}

}  // namespace fanopoly
