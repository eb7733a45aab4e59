#pragma once

#include "gerber/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace gerber {

/// Exponent vector; size always equals the ambient number of variables.
using Monomial = std::vector<std::uint32_t>;

inline std::uint64_t monomial_degree(const Monomial& m) {
    std::uint64_t d = 0;
    for (auto e : m) d += e;
    return d;
}

/// Graded lexicographic order: total degree first, then lex on exponents.
struct GradedLexLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        const auto da = monomial_degree(a);
        const auto db = monomial_degree(b);
        if (da != db) return da < db;
        return a < b;
    }
};

/// Element of Q[x_1, ..., x_m], stored as a canonical term map (no zero
/// coefficients, exponent vectors all of length m).  m == 0 gives plain
/// rational constants.
class Scalar {
public:
    using TermMap = std::map<Monomial, Rational, GradedLexLess>;

    explicit Scalar(std::size_t num_vars) : num_vars_(num_vars) {}
    Scalar(std::size_t num_vars, Rational c) : num_vars_(num_vars) {
        if (!c.is_zero()) terms_.emplace(Monomial(num_vars, 0), std::move(c));
    }

    static Scalar variable(std::size_t num_vars, std::size_t index) {
        if (index >= num_vars) throw std::out_of_range("Scalar::variable: index out of range");
        Scalar s(num_vars);
        Monomial m(num_vars, 0);
        m[index] = 1;
        s.terms_.emplace(std::move(m), Rational(1));
        return s;
    }

    std::size_t num_vars() const { return num_vars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        return terms_.empty() ||
               (terms_.size() == 1 && monomial_degree(terms_.begin()->first) == 0);
    }

    /// Coefficient of the constant monomial (zero if absent).
    Rational constant_term() const {
        auto it = terms_.find(Monomial(num_vars_, 0));
        return it == terms_.end() ? Rational(0) : it->second;
    }

    Rational coefficient(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    /// Total degree; -1 by convention for the zero polynomial.
    long total_degree() const {
        if (terms_.empty()) return -1;
        return static_cast<long>(monomial_degree(terms_.rbegin()->first));
    }

    /// Adds c * x^m into this polynomial, keeping the map canonical.
    Scalar& add_term(const Monomial& m, const Rational& c) {
        if (m.size() != num_vars_)
            throw std::invalid_argument("Scalar::add_term: monomial arity mismatch");
        if (c.is_zero()) return *this;
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
        return *this;
    }

    Scalar operator-() const {
        Scalar r(num_vars_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }

    Scalar& operator+=(const Scalar& o) {
        check_vars(o);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Scalar& operator-=(const Scalar& o) {
        check_vars(o);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }

    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        a.check_vars(b);
        Scalar r(a.num_vars_);
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                Monomial m(a.num_vars_);
                for (std::size_t i = 0; i < a.num_vars_; ++i) m[i] = ma[i] + mb[i];
                r.add_term(m, ca * cb);
            }
        }
        return r;
    }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    friend Scalar operator*(const Rational& c, const Scalar& s) {
        Scalar r(s.num_vars_);
        if (c.is_zero()) return r;
        for (const auto& [m, coeff] : s.terms_) r.terms_.emplace(m, c * coeff);
        return r;
    }

    /// Formal partial derivative with respect to variable `index`.
    Scalar derivative(std::size_t index) const {
        if (index >= num_vars_) throw std::out_of_range("Scalar::derivative: index out of range");
        Scalar r(num_vars_);
        for (const auto& [m, c] : terms_) {
            if (m[index] == 0) continue;
            Monomial d = m;
            d[index] -= 1;
            r.add_term(d, c * Rational(static_cast<int>(m[index])));
        }
        return r;
    }

    friend bool operator==(const Scalar& a, const Scalar& b) {
        return a.num_vars_ == b.num_vars_ && a.terms_ == b.terms_;
    }

private:
    void check_vars(const Scalar& o) const {
        if (num_vars_ != o.num_vars_)
            throw std::invalid_argument("Scalar: mixing polynomials over different variable sets");
    }

    std::size_t num_vars_;
    TermMap terms_;
};

}  // namespace gerber
