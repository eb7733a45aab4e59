#pragma once

#include "gerber/scalar.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace gerber {

/// Strictly increasing subset of frame indices {1, ..., n}.  The empty set is
/// the degree-0 basis monomial.  Ordering is by degree first, then
/// lexicographic, which fixes the basis enumeration used everywhere (matrices,
/// reports, printing).
class FrameIndexSet {
public:
    FrameIndexSet() = default;

    explicit FrameIndexSet(std::vector<std::uint32_t> indices) : idx_(std::move(indices)) {
        for (std::size_t i = 0; i < idx_.size(); ++i) {
            if (idx_[i] == 0) throw std::invalid_argument("FrameIndexSet: indices are 1-based");
            if (i > 0 && idx_[i] <= idx_[i - 1])
                throw std::invalid_argument("FrameIndexSet: indices must be strictly increasing");
        }
    }

    FrameIndexSet(std::initializer_list<std::uint32_t> indices)
        : FrameIndexSet(std::vector<std::uint32_t>(indices)) {}

    static FrameIndexSet full(std::uint32_t n) {
        std::vector<std::uint32_t> v(n);
        for (std::uint32_t i = 0; i < n; ++i) v[i] = i + 1;
        return FrameIndexSet(std::move(v));
    }

    std::size_t degree() const { return idx_.size(); }
    const std::vector<std::uint32_t>& indices() const { return idx_; }
    std::uint32_t max_index() const { return idx_.empty() ? 0 : idx_.back(); }

    bool contains(std::uint32_t i) const {
        return std::binary_search(idx_.begin(), idx_.end(), i);
    }

    /// Wedge of basis monomials: sign (+1/-1) and merged set, or nullopt when
    /// the sets overlap (the product is zero).  The sign counts transpositions
    /// needed to interleave `other` after `*this`.
    std::optional<std::pair<int, FrameIndexSet>> merge(const FrameIndexSet& other) const {
        std::vector<std::uint32_t> out;
        out.reserve(idx_.size() + other.idx_.size());
        int sign = 1;
        std::size_t a = 0, b = 0;
        while (a < idx_.size() && b < other.idx_.size()) {
            if (idx_[a] == other.idx_[b]) return std::nullopt;
            if (idx_[a] < other.idx_[b]) {
                out.push_back(idx_[a++]);
            } else {
                // other.idx_[b] jumps over the remaining entries of *this
                if ((idx_.size() - a) % 2 == 1) sign = -sign;
                out.push_back(other.idx_[b++]);
            }
        }
        while (a < idx_.size()) out.push_back(idx_[a++]);
        while (b < other.idx_.size()) out.push_back(other.idx_[b++]);
        FrameIndexSet r;
        r.idx_ = std::move(out);
        return std::make_pair(sign, std::move(r));
    }

    /// Removes index i (which must be present): returns (-1)^(pos-1) with pos
    /// the 1-based position of i, and the remaining set.
    std::pair<int, FrameIndexSet> remove(std::uint32_t i) const {
        auto it = std::lower_bound(idx_.begin(), idx_.end(), i);
        if (it == idx_.end() || *it != i)
            throw std::invalid_argument("FrameIndexSet::remove: index not present");
        const std::size_t pos = static_cast<std::size_t>(it - idx_.begin()) + 1;
        FrameIndexSet r;
        r.idx_.reserve(idx_.size() - 1);
        r.idx_.insert(r.idx_.end(), idx_.begin(), it);
        r.idx_.insert(r.idx_.end(), it + 1, idx_.end());
        return {pos % 2 == 1 ? 1 : -1, std::move(r)};
    }

    friend bool operator==(const FrameIndexSet& a, const FrameIndexSet& b) {
        return a.idx_ == b.idx_;
    }
    friend bool operator<(const FrameIndexSet& a, const FrameIndexSet& b) {
        if (a.idx_.size() != b.idx_.size()) return a.idx_.size() < b.idx_.size();
        return a.idx_ < b.idx_;
    }

private:
    std::vector<std::uint32_t> idx_;
};

/// Calls fn with every strictly increasing k-subset of {1, ..., n}, in
/// lexicographic order.
inline void for_each_index_set(std::uint32_t n, std::size_t k,
                               const std::function<void(const FrameIndexSet&)>& fn) {
    if (k > n) return;
    std::vector<std::uint32_t> cur(k);
    for (std::size_t i = 0; i < k; ++i) cur[i] = static_cast<std::uint32_t>(i + 1);
    while (true) {
        fn(FrameIndexSet(cur));
        if (k == 0) return;
        // advance to the next combination
        std::size_t i = k;
        while (i > 0 && cur[i - 1] == n - (k - i)) --i;
        if (i == 0) return;
        ++cur[i - 1];
        for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
}

struct PrimalFrame {};  // multivector fields, basis X_I
struct DualFrame {};    // forms, basis alpha_I

/// Element of the exterior algebra over a rank-n frame with polynomial
/// coefficients.  Mixed degrees are allowed; the term map is canonical
/// (no zero coefficients).
template <typename Tag>
class GradedElement {
public:
    using TermMap = std::map<FrameIndexSet, Scalar>;

    GradedElement(std::uint32_t rank, std::size_t num_vars)
        : rank_(rank), num_vars_(num_vars) {}

    static GradedElement zero(std::uint32_t rank, std::size_t num_vars) {
        return GradedElement(rank, num_vars);
    }

    static GradedElement from_scalar(std::uint32_t rank, Scalar f) {
        GradedElement e(rank, f.num_vars());
        e.add_term(FrameIndexSet{}, std::move(f));
        return e;
    }

    static GradedElement basis(std::uint32_t rank, std::size_t num_vars, FrameIndexSet I) {
        GradedElement e(rank, num_vars);
        e.add_term(std::move(I), Scalar(num_vars, Rational(1)));
        return e;
    }

    std::uint32_t rank() const { return rank_; }
    std::size_t num_vars() const { return num_vars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    std::set<std::size_t> degrees() const {
        std::set<std::size_t> d;
        for (const auto& [I, f] : terms_) d.insert(I.degree());
        return d;
    }

    bool is_homogeneous() const { return degrees().size() <= 1; }

    /// Degree of a homogeneous element; nullopt for zero or mixed degrees.
    std::optional<std::size_t> degree() const {
        auto d = degrees();
        if (d.size() != 1) return std::nullopt;
        return *d.begin();
    }

    GradedElement component(std::size_t k) const {
        GradedElement r(rank_, num_vars_);
        for (const auto& [I, f] : terms_)
            if (I.degree() == k) r.terms_.emplace(I, f);
        return r;
    }

    Scalar coefficient(const FrameIndexSet& I) const {
        auto it = terms_.find(I);
        return it == terms_.end() ? Scalar(num_vars_) : it->second;
    }

    GradedElement& add_term(FrameIndexSet I, Scalar f) {
        if (f.num_vars() != num_vars_)
            throw std::invalid_argument("GradedElement::add_term: coefficient arity mismatch");
        if (I.max_index() > rank_)
            throw std::invalid_argument("GradedElement::add_term: frame index exceeds rank");
        if (f.is_zero()) return *this;
        auto it = terms_.find(I);
        if (it == terms_.end()) {
            terms_.emplace(std::move(I), std::move(f));
        } else {
            it->second += f;
            if (it->second.is_zero()) terms_.erase(it);
        }
        return *this;
    }

    GradedElement operator-() const {
        GradedElement r(rank_, num_vars_);
        for (const auto& [I, f] : terms_) r.terms_.emplace(I, -f);
        return r;
    }

    GradedElement& operator+=(const GradedElement& o) {
        check_shape(o);
        for (const auto& [I, f] : o.terms_) add_term(I, f);
        return *this;
    }
    GradedElement& operator-=(const GradedElement& o) {
        check_shape(o);
        for (const auto& [I, f] : o.terms_) add_term(I, -f);
        return *this;
    }

    friend GradedElement operator+(GradedElement a, const GradedElement& b) { return a += b; }
    friend GradedElement operator-(GradedElement a, const GradedElement& b) { return a -= b; }

    friend GradedElement operator*(const Scalar& g, const GradedElement& e) {
        GradedElement r(e.rank_, e.num_vars_);
        for (const auto& [I, f] : e.terms_) r.add_term(I, g * f);
        return r;
    }
    friend GradedElement operator*(const Rational& c, const GradedElement& e) {
        return Scalar(e.num_vars_, c) * e;
    }

    friend bool operator==(const GradedElement& a, const GradedElement& b) {
        return a.rank_ == b.rank_ && a.num_vars_ == b.num_vars_ && a.terms_ == b.terms_;
    }

    void check_shape(const GradedElement& o) const {
        if (rank_ != o.rank_ || num_vars_ != o.num_vars_)
            throw std::invalid_argument("GradedElement: mixing elements of different shapes");
    }

private:
    std::uint32_t rank_;
    std::size_t num_vars_;
    TermMap terms_;
};

using MultiVector = GradedElement<PrimalFrame>;
using Form = GradedElement<DualFrame>;

/// Exterior product, extended bilinearly over polynomial coefficients.
template <typename Tag>
GradedElement<Tag> wedge(const GradedElement<Tag>& a, const GradedElement<Tag>& b) {
    a.check_shape(b);
    GradedElement<Tag> r(a.rank(), a.num_vars());
    for (const auto& [I, f] : a.terms()) {
        for (const auto& [J, g] : b.terms()) {
            auto merged = I.merge(J);
            if (!merged) continue;
            auto [sign, K] = *merged;
            Scalar c = f * g;
            if (sign < 0) c = -c;
            r.add_term(std::move(K), std::move(c));
        }
    }
    return r;
}

/// Interior product of a form into a multivector.  On basis monomials the
/// dual generators act one at a time, lowest index first:
///   alpha_j . X_I = (-1)^(pos-1) X_(I \ j)  when j sits at 1-based position
/// pos in I, and 0 when j is absent.  Composite forms satisfy
///   (w /\ t) . u = t . (w . u).
inline MultiVector contract(const Form& w, const MultiVector& u) {
    if (w.rank() != u.rank() || w.num_vars() != u.num_vars())
        throw std::invalid_argument("contract: mixing elements of different shapes");
    MultiVector r(u.rank(), u.num_vars());
    for (const auto& [J, g] : w.terms()) {
        for (const auto& [I, f] : u.terms()) {
            if (J.degree() > I.degree()) continue;
            int sign = 1;
            FrameIndexSet rest = I;
            bool dead = false;
            for (std::uint32_t j : J.indices()) {
                if (!rest.contains(j)) {
                    dead = true;
                    break;
                }
                auto [s, next] = rest.remove(j);
                sign *= s;
                rest = std::move(next);
            }
            if (dead) continue;
            Scalar c = g * f;
            if (sign < 0) c = -c;
            r.add_term(std::move(rest), std::move(c));
        }
    }
    return r;
}

/// Full pairing <w, u>: the degree-0 coefficient of w . u, so that
/// <alpha_I, X_J> = delta_IJ on basis monomials of equal degree.
inline Scalar pairing(const Form& w, const MultiVector& u) {
    return contract(w, u).coefficient(FrameIndexSet{});
}

}  // namespace gerber
