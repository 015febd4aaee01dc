#pragma once

// Sparse multivariate polynomials over exact rationals (the coefficient ring
// for parametric Laurent polynomials), and exact affine linear algebra used
// to solve constraint systems.

#include "core.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <vector>

namespace fanopoly {

// ---------------------------------------------------------------------------
// ParamPolynomial: sparse map from exponent multidegrees to rationals.
// The number of variables is implied by context; exponent vectors are
// normalized by trimming trailing zeros, so polynomials over nested variable
// lists interoperate.

class ParamPolynomial {
public:
    using Monomial = std::vector<unsigned>;  // trailing zeros trimmed

    ParamPolynomial() = default;
    explicit ParamPolynomial(const Rat& c) {
        if (c != 0) terms_[{}] = c;
    }
    static ParamPolynomial constant(const Rat& c) { return ParamPolynomial(c); }
    static ParamPolynomial variable(std::size_t index, const Rat& scale = 1) {
        ParamPolynomial p;
        if (scale != 0) {
            Monomial m(index + 1, 0);
            m[index] = 1;
            p.terms_[m] = scale;
        }
        return p;
    }
    static ParamPolynomial monomial(const Monomial& m, const Rat& c) {
        ParamPolynomial p;
        p.add_term(m, c);
        return p;
    }

    const std::map<Monomial, Rat>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
    }
    Rat constant_value() const {
        auto it = terms_.find({});
        return it == terms_.end() ? Rat(0) : it->second;
    }

    std::size_t total_degree() const {
        std::size_t d = 0;
        for (const auto& [m, c] : terms_) {
            std::size_t s = 0;
            for (unsigned e : m) s += e;
            d = std::max(d, s);
        }
        return d;
    }

    ParamPolynomial& operator+=(const ParamPolynomial& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    ParamPolynomial& operator-=(const ParamPolynomial& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend ParamPolynomial operator+(ParamPolynomial a, const ParamPolynomial& b) { return a += b; }
    friend ParamPolynomial operator-(ParamPolynomial a, const ParamPolynomial& b) { return a -= b; }
    friend ParamPolynomial operator-(const ParamPolynomial& a) {
        ParamPolynomial r;
        for (const auto& [m, c] : a.terms_) r.terms_[m] = -c;
        return r;
    }

    ParamPolynomial& operator*=(const Rat& s) {
        if (s == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, c] : terms_) c *= s;
        return *this;
    }
    friend ParamPolynomial operator*(ParamPolynomial a, const Rat& s) { return a *= s; }
    friend ParamPolynomial operator*(const Rat& s, ParamPolynomial a) { return a *= s; }

    friend ParamPolynomial operator*(const ParamPolynomial& a, const ParamPolynomial& b) {
        ParamPolynomial r;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) r.add_term(mul_monomials(ma, mb), ca * cb);
        return r;
    }

    friend bool operator==(const ParamPolynomial& a, const ParamPolynomial& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const ParamPolynomial& a, const ParamPolynomial& b) { return !(a == b); }
    friend bool operator<(const ParamPolynomial& a, const ParamPolynomial& b) {
        return a.terms_ < b.terms_;
    }

    // substitute variable i by values[i]; values must cover every variable used
    Rat eval(const std::vector<Rat>& values) const {
        Rat total = 0;
        for (const auto& [m, c] : terms_) {
            Rat t = c;
            for (std::size_t i = 0; i < m.size(); ++i)
                for (unsigned e = 0; e < m[i]; ++e) t *= values.at(i);
            total += t;
        }
        return total;
    }

    // substitute variable i by the polynomial subs[i] (over a new variable list)
    ParamPolynomial substitute(const std::vector<ParamPolynomial>& subs) const {
        ParamPolynomial total;
        for (const auto& [m, c] : terms_) {
            ParamPolynomial t = ParamPolynomial::constant(c);
            for (std::size_t i = 0; i < m.size(); ++i)
                for (unsigned e = 0; e < m[i]; ++e) t = t * subs.at(i);
            total += t;
        }
        return total;
    }

    // the coefficient row of an affine polynomial: (linear coeffs over nvars, constant)
    // Throws if the polynomial has degree > 1.
    std::vector<Rat> affine_row(std::size_t nvars) const {
        std::vector<Rat> row(nvars + 1, Rat(0));
        for (const auto& [m, c] : terms_) {
            if (m.empty()) {
                row[nvars] = c;
                continue;
            }
            std::size_t idx = 0, count = 0;
            for (std::size_t i = 0; i < m.size(); ++i) {
                if (m[i] > 1) throw Error("polynomial is not affine-linear");
                if (m[i] == 1) {
                    idx = i;
                    ++count;
                }
            }
            if (count != 1) throw Error("polynomial is not affine-linear");
            if (idx >= nvars) throw Error("variable index out of range");
            row[idx] = c;
        }
        return row;
    }

    std::string to_string(const std::vector<std::string>& names) const {
        if (terms_.empty()) return "0";
        // render highest-degree first, then reverse-lex, matching handwritten order
        std::vector<std::pair<Monomial, Rat>> ts(terms_.begin(), terms_.end());
        std::sort(ts.begin(), ts.end(), [](const auto& a, const auto& b) {
            std::size_t da = 0, db = 0;
            for (unsigned e : a.first) da += e;
            for (unsigned e : b.first) db += e;
            if (da != db) return da > db;
            return a.first < b.first;
        });
        std::ostringstream os;
        bool first = true;
        for (const auto& [m, c] : ts) {
            Rat a = c;
            if (first) {
                if (a < 0) {
                    os << "-";
                    a = -a;
                }
            } else {
                os << (a < 0 ? " - " : " + ");
                if (a < 0) a = -a;
            }
            first = false;
            std::string mono = monomial_string(m, names);
            if (mono.empty())
                os << rat_to_string(a);
            else if (a == 1)
                os << mono;
            else
                os << rat_to_string(a) << "*" << mono;
        }
        return os.str();
    }

    static std::string monomial_string(const Monomial& m, const std::vector<std::string>& names) {
        std::string s;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            if (!s.empty()) s += "*";
            s += i < names.size() ? names[i] : ("x" + std::to_string(i));
            if (m[i] > 1) s += "^" + std::to_string(m[i]);
        }
        return s;
    }

private:
    static Monomial mul_monomials(const Monomial& a, const Monomial& b) {
        Monomial m(std::max(a.size(), b.size()), 0);
        for (std::size_t i = 0; i < a.size(); ++i) m[i] += a[i];
        for (std::size_t i = 0; i < b.size(); ++i) m[i] += b[i];
        return m;
    }

    void add_term(const Monomial& m, const Rat& c) {
        if (c == 0) return;
        auto key = m;
        while (!key.empty() && key.back() == 0) key.pop_back();
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            terms_.emplace(std::move(key), c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    std::map<Monomial, Rat> terms_;
};

// ---------------------------------------------------------------------------
// incremental reduced row echelon form over the rationals for affine
// constraint systems: rows are (c_0..c_{n-1}, d) meaning sum c_i v_i + d = 0.

class RrefAccumulator {
public:
    explicit RrefAccumulator(std::size_t nvars) : nvars_(nvars) {}

    std::size_t nvars() const { return nvars_; }
    std::size_t rank() const { return pivots_.size(); }
    bool inconsistent() const { return inconsistent_; }

    // reduce a row against the current pivots (leaves it normalized if nonzero)
    std::vector<Rat> reduce(std::vector<Rat> row) const {
        for (const auto& [col, prow] : pivots_) {
            if (row[col] == 0) continue;
            Rat f = row[col];
            for (std::size_t j = 0; j <= nvars_; ++j) row[j] -= f * prow[j];
        }
        return row;
    }

    // add a constraint; returns true if it increased the rank
    bool add(std::vector<Rat> row) {
        if (row.size() != nvars_ + 1) throw Error("constraint row has wrong length");
        row = reduce(std::move(row));
        std::size_t col = 0;
        while (col < nvars_ && row[col] == 0) ++col;
        if (col == nvars_) {
            if (row[nvars_] != 0) inconsistent_ = true;
            return false;
        }
        Rat lead = row[col];
        for (std::size_t j = 0; j <= nvars_; ++j) row[j] /= lead;
        for (auto& [pcol, prow] : pivots_) {
            if (prow[col] == 0) continue;
            Rat f = prow[col];
            for (std::size_t j = 0; j <= nvars_; ++j) prow[j] -= f * row[j];
        }
        pivots_.emplace(col, std::move(row));
        return true;
    }

    bool add(const ParamPolynomial& constraint) { return add(constraint.affine_row(nvars_)); }

    // substitute pivot variables by their expressions in free variables:
    // the pivot row col: v_col + sum_j c_j v_j + d = 0 gives v_col = -sum - d.
    ParamPolynomial reduce(const ParamPolynomial& p) const {
        std::vector<ParamPolynomial> subs(nvars_);
        for (std::size_t i = 0; i < nvars_; ++i) subs[i] = ParamPolynomial::variable(i);
        for (const auto& [col, prow] : pivots_) {
            ParamPolynomial e = ParamPolynomial::constant(-prow[nvars_]);
            for (std::size_t j = 0; j < nvars_; ++j)
                if (j != col && prow[j] != 0) e += ParamPolynomial::variable(j, -prow[j]);
            subs[col] = std::move(e);
        }
        return p.substitute(subs);
    }

    const std::map<std::size_t, std::vector<Rat>>& pivot_rows() const { return pivots_; }

    std::vector<std::size_t> free_columns() const {
        std::vector<std::size_t> fc;
        for (std::size_t i = 0; i < nvars_; ++i)
            if (!pivots_.count(i)) fc.push_back(i);
        return fc;
    }

    // particular solution with all free variables set to zero
    std::vector<Rat> particular() const {
        std::vector<Rat> v(nvars_, Rat(0));
        for (const auto& [col, prow] : pivots_) v[col] = -prow[nvars_];
        return v;
    }

    // homogeneous solution with free variable `fcol` set to one, other free
    // variables zero
    std::vector<Rat> basis_vector(std::size_t fcol) const {
        std::vector<Rat> v(nvars_, Rat(0));
        v[fcol] = 1;
        for (const auto& [col, prow] : pivots_) v[col] = -prow[fcol];
        return v;
    }

private:
    std::size_t nvars_;
    std::map<std::size_t, std::vector<Rat>> pivots_;  // pivot column -> normalized row
    bool inconsistent_ = false;
};

}  // namespace fanopoly
