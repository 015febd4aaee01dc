#pragma once

// Parametric Laurent polynomials in two torus variables, cluster
// transformations and their mutability constraints, T-binomial edge
// coefficients, and the affine space of maximally-mutable polynomials.

#include "core.hpp"
#include "mutation.hpp"
#include "parampoly.hpp"
#include "polygon.hpp"

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace fanopoly {

// ---------------------------------------------------------------------------
// ParamLaurent: sparse Laurent polynomial whose coefficients are polynomials
// in a named parameter list

class ParamLaurent {
public:
    ParamLaurent() = default;
    explicit ParamLaurent(std::vector<std::string> params) : params_(std::move(params)) {}

    const std::vector<std::string>& params() const { return params_; }
    const std::map<LatticePoint, ParamPolynomial>& terms() const { return terms_; }

    void set_term(const LatticePoint& e, ParamPolynomial c) {
        if (c.is_zero())
            terms_.erase(e);
        else
            terms_[e] = std::move(c);
    }
    void add_term(const LatticePoint& e, const ParamPolynomial& c) {
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            if (!c.is_zero()) terms_.emplace(e, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    ParamPolynomial coeff(const LatticePoint& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? ParamPolynomial() : it->second;
    }

    std::vector<LatticePoint> support() const {
        std::vector<LatticePoint> s;
        s.reserve(terms_.size());
        for (const auto& [e, c] : terms_) s.push_back(e);
        return s;
    }

    bool is_zero() const { return terms_.empty(); }

    friend ParamLaurent operator+(const ParamLaurent& a, const ParamLaurent& b) {
        ParamLaurent r = a;
        for (const auto& [e, c] : b.terms_) r.add_term(e, c);
        return r;
    }

    friend ParamLaurent operator*(const ParamLaurent& a, const ParamLaurent& b) {
        ParamLaurent r(a.params_.empty() ? b.params_ : a.params_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) r.add_term(ea + eb, ca * cb);
        return r;
    }

    ParamLaurent scaled(const ParamPolynomial& s) const {
        ParamLaurent r(params_);
        for (const auto& [e, c] : terms_) r.set_term(e, c * s);
        return r;
    }

    // substitute numeric values for all parameters
    ParamLaurent eval_params(const std::vector<Rat>& values) const {
        ParamLaurent r;
        for (const auto& [e, c] : terms_) {
            Rat v = c.eval(values);
            if (v != 0) r.set_term(e, ParamPolynomial::constant(v));
        }
        return r;
    }

    friend bool operator==(const ParamLaurent& a, const ParamLaurent& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const ParamLaurent& a, const ParamLaurent& b) { return !(a == b); }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            std::string mono = monomial_string(e);
            std::string cs = c.to_string(params_);
            bool wrap = c.terms().size() > 1;
            if (mono.empty()) {
                os << (wrap ? "(" + cs + ")" : cs);
            } else if (cs == "1") {
                os << mono;
            } else {
                os << (wrap ? "(" + cs + ")" : cs) << "*" << mono;
            }
        }
        return os.str();
    }

    static std::string monomial_string(const LatticePoint& e) {
        std::string s;
        auto part = [&](const char* v, const Int& k) {
            if (k == 0) return;
            if (!s.empty()) s += "*";
            s += v;
            if (k != 1) s += "^" + k.str();
        };
        part("x", e.x);
        part("y", e.y);
        return s;
    }

private:
    std::vector<std::string> params_;
    std::map<LatticePoint, ParamPolynomial> terms_;
};

inline Polygon newton_polygon(const ParamLaurent& g) { return Polygon::from_points(g.support()); }

// ---------------------------------------------------------------------------
// T-binomial edge coefficients: for an edge of height r and width w = m*r+w0,
// the w+1 coefficients of (1+T)^{m*r} when w0 = 0, of (1+T)^{m*r}(1+T^{w0})
// otherwise.

inline std::vector<Rat> t_binomial_edge_coeffs(const Edge& e) {
    Int r = e.height, w = e.width;
    Int m = floor_div(w, r), w0 = w - m * r;
    Int mr = m * r;
    std::vector<Rat> c(static_cast<std::size_t>(w) + 1, Rat(0));
    for (Int t = 0; t <= mr; ++t) {
        Rat b = Rat(binomial(mr, t));
        c[static_cast<std::size_t>(t)] += b;
        if (w0 != 0) c[static_cast<std::size_t>(Int(t + w0))] += b;
    }
    return c;
}

// ---------------------------------------------------------------------------
// cluster transformation: x^gamma -> x^gamma (1 + x^f)^{<gamma,h>}.
// After a unimodular change of basis sending f to (1,0), the exponent rows at
// h-value k > 0 multiply by (1+x)^k and rows at k < 0 must divide by
// (1+x)^{-k}; the division remainders (one per pass) are exactly the
// obstructions to mutability and become linear constraints on coefficients.

struct ClusterResult {
    ParamLaurent result;                      // transform with remainders forced to zero
    std::vector<ParamPolynomial> remainders;  // nonzero entries obstruct mutability
};

namespace detail {

inline ClusterResult cluster_transform(const ParamLaurent& g, const MutationData& d) {
    UnimodularMap U = basis_map_to_e1(d.f);
    LatticePoint hp = U.dual_map().apply(d.h);
    if (hp.x != 0 || (hp.y != 1 && hp.y != -1))
        throw Error("internal: transformed height is not a coordinate form");
    const Int c = hp.y;  // h-value of the row at second coordinate j is c*j

    // collect rows of the transformed exponents
    std::map<Int, std::map<Int, ParamPolynomial>> rows;
    for (const auto& [e, coeffp] : g.terms()) {
        LatticePoint t = U.apply(e);
        rows[t.y][t.x] = coeffp;
    }

    ClusterResult out;
    out.result = ParamLaurent(g.params());
    UnimodularMap Uinv = U.inverse();
    for (auto& [j, row] : rows) {
        Int k = c * j;
        if (k < 0) {
            // divide by (1+x), -k times; remainder of each pass is a constraint
            const Int passes = -k;
            for (Int pass = 0; pass < passes && !row.empty(); ++pass) {
                Int lo = row.begin()->first, hi = row.rbegin()->first;
                std::size_t m = static_cast<std::size_t>(Int(hi - lo));
                std::vector<ParamPolynomial> a(m + 1);
                for (const auto& [i, p] : row) a[static_cast<std::size_t>(Int(i - lo))] = p;
                // P = (x+1) Q + R: b_{m-1} = a_m, b_{t-1} = a_t - b_t, R = a_0 - b_0
                std::vector<ParamPolynomial> b(m);  // quotient
                if (m == 0) {
                    if (!a[0].is_zero()) out.remainders.push_back(a[0]);
                    row.clear();
                    continue;
                }
                b[m - 1] = a[m];
                for (std::size_t t = m - 1; t >= 1; --t) b[t - 1] = a[t] - b[t];
                ParamPolynomial R = a[0] - b[0];
                if (!R.is_zero()) out.remainders.push_back(R);
                row.clear();
                for (std::size_t t = 0; t < m; ++t)
                    if (!b[t].is_zero()) row[lo + Int(t)] = b[t];
            }
        } else if (k > 0) {
            std::map<Int, ParamPolynomial> nrow;
            for (const auto& [i, p] : row)
                for (Int s = 0; s <= k; ++s) {
                    auto it = nrow.find(i + s);
                    ParamPolynomial add = p * Rat(binomial(k, s));
                    if (it == nrow.end())
                        nrow.emplace(i + s, std::move(add));
                    else
                        it->second += add;
                }
            for (auto it = nrow.begin(); it != nrow.end();)
                it = it->second.is_zero() ? nrow.erase(it) : std::next(it);
            row = std::move(nrow);
        }
        for (const auto& [i, p] : row) out.result.add_term(Uinv.apply(LatticePoint{i, j}), p);
    }
    return out;
}

}  // namespace detail

inline ClusterResult apply_cluster_full(const ParamLaurent& g, const MutationData& d) {
    try {
        detail::validate_mutation_data(newton_polygon(g), d);
    } catch (const DegenerateHull&) {
        throw InvalidMutationData("support of the polynomial does not admit mutation data");
    } catch (const NotFano&) {
        throw InvalidMutationData("support of the polynomial is not a Fano polygon");
    }
    return detail::cluster_transform(g, d);
}

// g composed with the cluster map, when the result clears its denominator
inline std::optional<ParamLaurent> apply_cluster(const ParamLaurent& g, const MutationData& d) {
    ClusterResult r = apply_cluster_full(g, d);
    if (!r.remainders.empty()) return std::nullopt;
    return r.result;
}

// the linear constraints on parameters equivalent to divisibility
inline std::vector<ParamPolynomial> mutability_constraints(const ParamLaurent& g,
                                                           const MutationData& d) {
    return apply_cluster_full(g, d).remainders;
}

// ---------------------------------------------------------------------------
// the affine space of maximally-mutable Laurent polynomials with T-binomial
// edge coefficients and zero constant term

struct MMSpace {
    Polygon base;
    std::vector<std::string> params;        // one name per free lattice point
    std::vector<LatticePoint> free_points;  // where the free parameters sit
    std::map<LatticePoint, Rat> offset;     // particular member (free params = 0)
    std::vector<std::map<LatticePoint, Rat>> basis;  // directions, one per parameter
    unsigned depth = 0;                              // requested closure depth
    unsigned rounds_completed = 0;
    bool stabilized = false;  // a full round added no constraints (or closure exhausted)

    std::size_t dimension() const { return basis.size(); }

    // the generic member: offset + sum a_i * basis_i, coefficients affine in a
    ParamLaurent generic() const {
        ParamLaurent g(params);
        for (const auto& [e, v] : offset) g.add_term(e, ParamPolynomial::constant(v));
        for (std::size_t i = 0; i < basis.size(); ++i)
            for (const auto& [e, v] : basis[i]) g.add_term(e, ParamPolynomial::variable(i, v));
        return g;
    }

    // the member at specific parameter values
    ParamLaurent member(const std::vector<Rat>& values) const {
        if (values.size() != basis.size()) throw Error("wrong number of parameter values");
        ParamLaurent g;
        for (const auto& [e, v] : offset) g.add_term(e, ParamPolynomial::constant(v));
        for (std::size_t i = 0; i < basis.size(); ++i)
            for (const auto& [e, v] : basis[i])
                g.add_term(e, ParamPolynomial::constant(v * values[i]));
        return g;
    }
};

inline std::string param_name_for_point(const LatticePoint& e) {
    return "a[" + e.x.str() + "," + e.y.str() + "]";
}

inline MMSpace mm_space(const Polygon& p, unsigned depth) {
    if (depth == 0) throw Error("mm_space depth must be positive");
    std::vector<LatticePoint> pts = lattice_points(p);
    const std::size_t n = pts.size();
    std::map<LatticePoint, std::size_t> var_of;
    for (std::size_t i = 0; i < n; ++i) var_of.emplace(pts[i], i);
    std::vector<std::string> var_names(n);
    for (std::size_t i = 0; i < n; ++i) var_names[i] = param_name_for_point(pts[i]);

    RrefAccumulator acc(n);
    auto pin = [&](const LatticePoint& e, const Rat& value) {
        acc.add(ParamPolynomial::variable(var_of.at(e)) - ParamPolynomial::constant(value));
    };

    // normalization a_0 = 0 and T-binomial coefficients along every edge
    pin({0, 0}, 0);
    for (const Edge& e : edges(p)) {
        std::vector<Rat> coeffs = t_binomial_edge_coeffs(e);
        for (Int t = 0; t <= e.width; ++t)
            pin(e.start + t * e.direction, coeffs[static_cast<std::size_t>(t)]);
    }
    if (acc.inconsistent()) throw EmptySpace("edge pinning is inconsistent");

    // symbolic generic member, coefficients reduced against current constraints
    ParamLaurent g0(var_names);
    for (std::size_t i = 0; i < n; ++i) g0.set_term(pts[i], acc.reduce(ParamPolynomial::variable(i)));

    struct State {
        Polygon polygon;
        ParamLaurent form;
    };
    auto reduce_form = [&](const ParamLaurent& f) {
        ParamLaurent r(f.params());
        for (const auto& [e, c] : f.terms()) r.set_term(e, acc.reduce(c));
        return r;
    };
    auto state_key = [](const State& s) { return s.polygon.to_string() + "|" + s.form.to_string(); };

    std::vector<State> frontier{State{p, g0}};
    std::set<std::string> seen{state_key(frontier.front())};
    unsigned rounds = 0;
    bool stabilized = false;
    for (unsigned level = 1; level <= depth; ++level) {
        std::size_t rank_before = acc.rank();
        std::vector<State> next;
        for (const State& s : frontier) {
            for (const MutationData& d : find_mutation_data(s.polygon)) {
                ClusterResult cr = detail::cluster_transform(s.form, d);
                for (const auto& rem : cr.remainders) {
                    acc.add(rem.affine_row(n));
                    if (acc.inconsistent())
                        throw EmptySpace("mutability constraints are inconsistent");
                }
                State ns{mutate(s.polygon, d), reduce_form(cr.result)};
                if (seen.insert(state_key(ns)).second) next.push_back(std::move(ns));
            }
        }
        ++rounds;
        if (acc.rank() == rank_before) {
            stabilized = true;
            // older frontier states were keyed before these constraints; a
            // rank-stable round is the declared stopping criterion regardless
            break;
        }
        if (next.empty()) {
            stabilized = true;
            break;
        }
        frontier = std::move(next);
    }

    MMSpace space{p, {}, {}, {}, {}, depth, rounds, stabilized};
    std::vector<std::size_t> free_cols = acc.free_columns();
    std::vector<Rat> part = acc.particular();
    for (std::size_t i = 0; i < n; ++i)
        if (part[i] != 0) space.offset[pts[i]] = part[i];
    for (std::size_t fc : free_cols) {
        space.free_points.push_back(pts[fc]);
        space.params.push_back(var_names[fc]);
        std::map<LatticePoint, Rat> dir;
        std::vector<Rat> bv = acc.basis_vector(fc);
        for (std::size_t i = 0; i < n; ++i)
            if (bv[i] != 0) dir[pts[i]] = bv[i];
        space.basis.push_back(std::move(dir));
    }
    return space;
}

}  // namespace fanopoly
