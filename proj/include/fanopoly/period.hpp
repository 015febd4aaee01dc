#pragma once

// Classical period series of Laurent polynomials, the affine-linear
// period-matching test, period signatures for class separation, and
// comparison against external coefficient tables.

#include "core.hpp"
#include "laurent.hpp"
#include "parampoly.hpp"
#include "polygon.hpp"
#include "singularity.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>

namespace fanopoly {

// ---------------------------------------------------------------------------
// classical period: c_d = constant term of g^d

struct PeriodSeries {
    std::vector<std::string> params;
    std::vector<ParamPolynomial> coeffs;  // c_0 .. c_D

    unsigned order() const { return coeffs.empty() ? 0 : unsigned(coeffs.size() - 1); }

    std::string coeff_string(unsigned d) const { return coeffs.at(d).to_string(params); }
};

inline PeriodSeries classical_period(const ParamLaurent& g, unsigned D) {
    PeriodSeries s;
    s.params = g.params();
    s.coeffs.assign(D + 1, ParamPolynomial());
    s.coeffs[0] = ParamPolynomial::constant(1);
    if (D == 0 || g.is_zero()) return s;

    // keep an exponent u at stage d only if -u lies in (D-d)*NewtonPolygon(g);
    // fall back to a bounding box when the support is too degenerate to hull
    std::vector<std::pair<LatticePoint, Int>> halfplanes;
    bool have_np = false;
    try {
        Polygon np = newton_polygon(g);
        for (const Edge& e : edges(np)) halfplanes.emplace_back(e.inner_normal, e.height);
        have_np = true;
    } catch (const Error&) {
    }
    Int maxc = 0;
    for (const auto& [e, c] : g.terms()) maxc = std::max({maxc, abs_int(e.x), abs_int(e.y)});
    auto keep = [&](const LatticePoint& u, unsigned remaining) {
        Int rem(remaining);
        if (have_np) {
            for (const auto& [nE, rE] : halfplanes)
                if (dot(nE, -u) < -rem * rE) return false;
            return true;
        }
        return abs_int(u.x) <= maxc * rem && abs_int(u.y) <= maxc * rem;
    };

    std::map<LatticePoint, ParamPolynomial> partial{{{0, 0}, ParamPolynomial::constant(1)}};
    for (unsigned d = 1; d <= D; ++d) {
        std::map<LatticePoint, ParamPolynomial> next;
        for (const auto& [e1, c1] : partial) {
            for (const auto& [e2, c2] : g.terms()) {
                LatticePoint e = e1 + e2;
                if (!keep(e, D - d)) continue;
                ParamPolynomial prod = c1 * c2;
                if (prod.is_zero()) continue;
                auto it = next.find(e);
                if (it == next.end())
                    next.emplace(e, std::move(prod));
                else
                    it->second += prod;
            }
        }
        for (auto it = next.begin(); it != next.end();)
            it = it->second.is_zero() ? next.erase(it) : std::next(it);
        partial = std::move(next);
        auto it = partial.find({0, 0});
        if (it != partial.end()) s.coeffs[d] = it->second;
    }
    return s;
}

// ---------------------------------------------------------------------------
// affine period matching: find phi(a) = M a + v with c1_d(a) = c2_d(phi(a))
// for all d <= D, or certify that no rational affine map exists

struct AffineMatch {
    std::vector<std::vector<Rat>> matrix;  // k x k, row j gives target param j
    std::vector<Rat> offset;               // length k
    unsigned verified_order = 0;
};

struct CompareResult {
    std::optional<AffineMatch> match;
    bool certified_none = false;  // proved: no affine map over the rationals
    unsigned failing_order = 0;   // order exhibiting the obstruction (when certified)
    std::string detail;
};

struct CompareOptions {
    std::size_t branch_cap = 4000;      // solver node budget
    bool try_permutations = true;       // fast path before the general solver
    Int divisor_limit = Int(1) << 40;   // skip root branching past this magnitude
};

namespace detail {

inline bool verify_affine(const PeriodSeries& s1, const PeriodSeries& s2,
                          const std::vector<std::vector<Rat>>& M, const std::vector<Rat>& v,
                          unsigned D) {
    const std::size_t k = s1.params.size();
    std::vector<ParamPolynomial> subs(k);
    for (std::size_t j = 0; j < k; ++j) {
        ParamPolynomial e = ParamPolynomial::constant(v[j]);
        for (std::size_t i = 0; i < k; ++i)
            if (M[j][i] != 0) e += ParamPolynomial::variable(i, M[j][i]);
        subs[j] = std::move(e);
    }
    for (unsigned d = 0; d <= D; ++d)
        if (s1.coeffs[d] != s2.coeffs[d].substitute(subs)) return false;
    return true;
}

enum class SolveStatus { Solved, NoSolution, Unknown };

struct SolveResult {
    SolveStatus status;
    std::vector<Rat> values;
};

inline std::vector<Int> divisors_of(Int n, const Int& limit) {
    n = abs_int(n);
    std::vector<Int> ds;
    if (n == 0 || n > limit) return ds;
    for (Int i = 1; i * i <= n; ++i) {
        if (n % i == 0) {
            ds.push_back(i);
            if (i * i != n) ds.push_back(n / i);
        }
    }
    return ds;
}

// exact rational roots of a univariate polynomial given as exponent->coeff
inline std::vector<Rat> rational_roots(const std::map<unsigned, Rat>& poly, const Int& limit,
                                       bool& exhaustive) {
    exhaustive = true;
    std::vector<Rat> roots;
    if (poly.empty()) return roots;
    // integer-scale coefficients
    Int scale = 1;
    for (const auto& [e, c] : poly) {
        Int den = denominator(c);
        scale = scale / gcd_int(scale, den) * den;
    }
    std::map<unsigned, Int> ip;
    for (const auto& [e, c] : poly) {
        Rat scaled = c * Rat(scale);
        ip[e] = numerator(scaled);
    }
    unsigned low = ip.begin()->first;  // u^low divides; 0 is a root when low > 0
    if (low > 0) roots.push_back(Rat(0));
    Int constant = ip.begin()->second;
    Int leading = ip.rbegin()->second;
    std::vector<Int> ps = divisors_of(constant, limit), qs = divisors_of(leading, limit);
    if (ps.empty() || qs.empty()) {
        exhaustive = false;  // magnitudes beyond the factoring budget
        return roots;
    }
    auto value_at = [&](const Rat& r) {
        Rat t = 0;
        for (const auto& [e, c] : poly) {
            Rat m = c;
            for (unsigned i = 0; i < e; ++i) m *= r;
            t += m;
        }
        return t;
    };
    std::vector<Rat> seen;
    for (const Int& p : ps)
        for (const Int& q : qs)
            for (int sign = -1; sign <= 1; sign += 2) {
                Rat cand = make_rat(Int(sign * p), q);
                if (std::find(seen.begin(), seen.end(), cand) != seen.end()) continue;
                seen.push_back(cand);
                if (value_at(cand) == 0) roots.push_back(cand);
            }
    return roots;
}

inline SolveResult solve_poly_system(std::size_t K, std::vector<ParamPolynomial> eqs,
                                     std::size_t& nodes, const CompareOptions& opt) {
    if (++nodes > opt.branch_cap) return {SolveStatus::Unknown, {}};

    // current substitution for each unknown (identity to start)
    std::vector<ParamPolynomial> subs(K);
    for (std::size_t i = 0; i < K; ++i) subs[i] = ParamPolynomial::variable(i);
    bool subs_active = false;

    auto apply_subs = [&](std::vector<ParamPolynomial>& es) {
        if (!subs_active) return;
        for (auto& e : es) e = e.substitute(subs);
    };

    // propagate linear information to a fixed point
    for (;;) {
        apply_subs(eqs);
        std::vector<ParamPolynomial> kept;
        for (auto& e : eqs) {
            if (e.is_zero()) continue;
            if (e.is_constant()) return {SolveStatus::NoSolution, {}};
            kept.push_back(std::move(e));
        }
        eqs = std::move(kept);
        RrefAccumulator lin(K);
        for (const auto& e : eqs)
            if (e.total_degree() <= 1) lin.add(e.affine_row(K));
        if (lin.inconsistent()) return {SolveStatus::NoSolution, {}};
        if (lin.rank() == 0) break;
        // fold the solved pivots into the substitution and re-reduce everything
        std::vector<ParamPolynomial> step(K);
        for (std::size_t i = 0; i < K; ++i) step[i] = ParamPolynomial::variable(i);
        for (const auto& [col, row] : lin.pivot_rows()) {
            ParamPolynomial e = ParamPolynomial::constant(-row[K]);
            for (std::size_t j = 0; j < K; ++j)
                if (j != col && row[j] != 0) e += ParamPolynomial::variable(j, -row[j]);
            step[col] = std::move(e);
        }
        for (std::size_t i = 0; i < K; ++i) subs[i] = subs[i].substitute(step);
        subs_active = true;
        std::vector<ParamPolynomial> nonlin;
        for (auto& e : eqs)
            if (e.total_degree() > 1) nonlin.push_back(e.substitute(step));
        eqs = std::move(nonlin);
        subs_active = false;  // eqs are already reduced; subs kept for final values
    }

    if (eqs.empty()) {
        std::vector<Rat> zeros(K, Rat(0));
        std::vector<Rat> values(K);
        for (std::size_t i = 0; i < K; ++i) values[i] = subs[i].eval(zeros);
        return {SolveStatus::Solved, std::move(values)};
    }

    // branch on a univariate equation via exhaustive rational-root search
    for (const auto& e : eqs) {
        std::map<unsigned, Rat> uni;
        std::size_t var = K;
        bool univariate = true;
        for (const auto& [m, c] : e.terms()) {
            std::size_t idx = K;
            unsigned deg = 0;
            for (std::size_t i = 0; i < m.size() && univariate; ++i) {
                if (m[i] == 0) continue;
                if (idx != K && idx != i) univariate = false;
                idx = i;
                deg = m[i];
            }
            if (!univariate) break;
            if (idx != K) {
                if (var != K && var != idx) {
                    univariate = false;
                    break;
                }
                var = idx;
            }
            uni[deg] += c;
        }
        if (!univariate || var == K) continue;
        bool exhaustive = true;
        std::vector<Rat> roots = rational_roots(uni, opt.divisor_limit, exhaustive);
        bool saw_unknown = !exhaustive;
        for (const Rat& r : roots) {
            std::vector<ParamPolynomial> branch = eqs;
            branch.push_back(ParamPolynomial::variable(var) - ParamPolynomial::constant(r));
            SolveResult sub = solve_poly_system(K, std::move(branch), nodes, opt);
            if (sub.status == SolveStatus::Solved) {
                // compose with the outer substitution
                std::vector<ParamPolynomial> fix(K);
                for (std::size_t i = 0; i < K; ++i)
                    fix[i] = ParamPolynomial::constant(sub.values[i]);
                std::vector<Rat> zeros;
                std::vector<Rat> values(K);
                for (std::size_t i = 0; i < K; ++i) values[i] = subs[i].substitute(fix).eval(zeros);
                return {SolveStatus::Solved, std::move(values)};
            }
            if (sub.status == SolveStatus::Unknown) saw_unknown = true;
        }
        return {saw_unknown ? SolveStatus::Unknown : SolveStatus::NoSolution, {}};
    }
    return {SolveStatus::Unknown, {}};  // only multi-unknown nonlinear equations left
}

}  // namespace detail

inline CompareResult compare_affine(const PeriodSeries& s1, const PeriodSeries& s2, unsigned D,
                                    const CompareOptions& opt = {}) {
    if (s1.order() < D || s2.order() < D)
        throw Error("period series truncated below the comparison order");
    const std::size_t k = s1.params.size();
    CompareResult res;

    if (s2.params.size() != k) {
        res.certified_none = true;
        res.failing_order = 0;
        res.detail = "parameter counts differ (" + std::to_string(k) + " vs " +
                     std::to_string(s2.params.size()) + "); no affine isomorphism exists";
        return res;
    }

    if (k == 0) {
        for (unsigned d = 0; d <= D; ++d) {
            if (s1.coeffs[d] != s2.coeffs[d]) {
                res.certified_none = true;
                res.failing_order = d;
                res.detail = "constant series differ at order " + std::to_string(d);
                return res;
            }
        }
        res.match = AffineMatch{{}, {}, D};
        return res;
    }

    // fast path: identity and parameter permutations
    {
        std::vector<std::size_t> perm(k);
        for (std::size_t i = 0; i < k; ++i) perm[i] = i;
        std::size_t tried = 0;
        do {
            std::vector<std::vector<Rat>> M(k, std::vector<Rat>(k, Rat(0)));
            for (std::size_t j = 0; j < k; ++j) M[j][perm[j]] = 1;
            std::vector<Rat> v(k, Rat(0));
            if (detail::verify_affine(s1, s2, M, v, D)) {
                res.match = AffineMatch{std::move(M), std::move(v), D};
                return res;
            }
            if (!opt.try_permutations || ++tried > 720) break;
        } while (std::next_permutation(perm.begin(), perm.end()));
    }

    // general solver: unknowns M (k x k) then v (k)
    const std::size_t K = k * k + k;
    std::vector<ParamPolynomial> phi(k);  // over combined vars: a_0..a_{k-1}, u_0..u_{K-1}
    for (std::size_t j = 0; j < k; ++j) {
        ParamPolynomial e = ParamPolynomial::variable(k + k * k + j);  // v_j
        for (std::size_t i = 0; i < k; ++i) {
            // M[j][i] * a_i
            e += ParamPolynomial::variable(k + j * k + i) * ParamPolynomial::variable(i);
        }
        phi[j] = std::move(e);
    }
    std::vector<ParamPolynomial> a_embed(k);
    for (std::size_t i = 0; i < k; ++i) a_embed[i] = ParamPolynomial::variable(i);

    std::vector<ParamPolynomial> eqs;
    std::optional<unsigned> const_false_order;
    std::string const_false_eq;
    for (unsigned d = 0; d <= D; ++d) {
        ParamPolynomial diff = s1.coeffs[d].substitute(a_embed) - s2.coeffs[d].substitute(phi);
        // group by the a-monomial part; each group is an equation in the unknowns
        std::map<ParamPolynomial::Monomial, ParamPolynomial> groups;
        for (const auto& [m, c] : diff.terms()) {
            ParamPolynomial::Monomial am(m.begin(), m.begin() + std::min(m.size(), k));
            while (!am.empty() && am.back() == 0) am.pop_back();
            ParamPolynomial::Monomial um;
            if (m.size() > k) {
                um.assign(m.begin() + k, m.end());
            }
            ParamPolynomial piece;
            {
                // piece = c * u-monomial
                ParamPolynomial mono = ParamPolynomial::constant(c);
                for (std::size_t i = 0; i < um.size(); ++i)
                    for (unsigned e = 0; e < um[i]; ++e) mono = mono * ParamPolynomial::variable(i);
                piece = std::move(mono);
            }
            groups[am] += piece;
        }
        for (const auto& [am, eq] : groups) {
            if (eq.is_zero()) continue;
            if (eq.is_constant() && !const_false_order) {
                const_false_order = d;
                const_false_eq = eq.to_string({}) + " = 0";
            }
            eqs.push_back(eq);
        }
    }
    if (const_false_order) {
        res.certified_none = true;
        res.failing_order = *const_false_order;
        res.detail = "contradictory equation at order " + std::to_string(*const_false_order) +
                     ": " + const_false_eq;
        return res;
    }

    std::size_t nodes = 0;
    detail::SolveResult sr = detail::solve_poly_system(K, std::move(eqs), nodes, opt);
    if (sr.status == detail::SolveStatus::Solved) {
        std::vector<std::vector<Rat>> M(k, std::vector<Rat>(k));
        std::vector<Rat> v(k);
        for (std::size_t j = 0; j < k; ++j) {
            for (std::size_t i = 0; i < k; ++i) M[j][i] = sr.values[j * k + i];
            v[j] = sr.values[k * k + j];
        }
        if (!detail::verify_affine(s1, s2, M, v, D))
            throw Error("internal: solver produced a non-matching affine map");
        res.match = AffineMatch{std::move(M), std::move(v), D};
        return res;
    }
    if (sr.status == detail::SolveStatus::NoSolution) {
        res.certified_none = true;
        res.failing_order = D;
        res.detail = "rational solution space exhausted through order " + std::to_string(D);
        return res;
    }
    res.detail = "undecided within solver budget";
    return res;
}

// ---------------------------------------------------------------------------
// period signature: canonical comparison key for class separation

struct PeriodSignature {
    Polygon nf;  // normal form the signature was computed on
    SingularityContent content;
    Rat deg;
    std::size_t mm_dim = 0;
    bool stabilized = false;
    unsigned depth = 0;
    unsigned order = 0;
    PeriodSeries series;  // classical period of the generic MM member
};

inline PeriodSignature period_signature(const Polygon& p, unsigned depth, unsigned order) {
    Polygon nf = normal_form(p);
    MMSpace space = mm_space(nf, depth);
    PeriodSignature sig{nf,
                        singularity_content(nf),
                        degree(nf),
                        space.dimension(),
                        space.stabilized,
                        depth,
                        order,
                        classical_period(space.generic(), order)};
    return sig;
}

// ---------------------------------------------------------------------------
// comparison against an external coefficient table

struct ReferenceCoeffs {
    bool regularized = false;               // file stores d! * c_d when true
    std::map<unsigned, Rat> coeffs;         // order -> expected value
    std::map<std::string, Rat> substitution;  // parameter name -> value
};

struct ReferenceReport {
    struct Entry {
        unsigned order = 0;
        Rat expected, actual;
        bool in_range = false;  // within the series truncation
        bool match = false;
    };
    std::vector<Entry> entries;
    bool all_match = true;  // over in-range entries
};

inline ReferenceReport compare_to_reference(const PeriodSeries& s, const ReferenceCoeffs& ref) {
    std::vector<Rat> values(s.params.size(), Rat(0));
    for (std::size_t i = 0; i < s.params.size(); ++i) {
        auto it = ref.substitution.find(s.params[i]);
        if (it != ref.substitution.end()) values[i] = it->second;
    }
    ReferenceReport rep;
    for (const auto& [d, expected] : ref.coeffs) {
        ReferenceReport::Entry e;
        e.order = d;
        e.expected = expected;
        e.in_range = d <= s.order();
        if (e.in_range) {
            Rat c = s.coeffs[d].eval(values);
            if (ref.regularized) c *= Rat(factorial(d));
            e.actual = c;
            e.match = (e.actual == e.expected);
            rep.all_match = rep.all_match && e.match;
        }
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

}  // namespace fanopoly
