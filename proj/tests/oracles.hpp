// Independent re-derivations used by the test suites.  Everything here is
// written straight from the defining formulas, with no calls into the
// engine's bracket/extension/differential code paths, so one implementation
// checks the other.
#pragma once

#include "gerber/algebroid.hpp"

#include <cstdint>
#include <vector>

namespace oracle {

using namespace gerber;

// a(X_i)f expanded directly from the anchor matrix.
inline Scalar anchor(const AlgebroidSpec& s, std::uint32_t i, const Scalar& f) {
    Scalar out(s.num_vars());
    for (std::size_t mu = 0; mu < s.num_vars(); ++mu)
        out += s.anchor()[i - 1][mu] * f.derivative(mu);
    return out;
}

// Jacobiator [[X_i,X_j],X_k] + cyclic, expanded through structure functions
// and anchor derivatives only:
//   [[X_i,X_j],X_k] = sum_l c_ij^l [X_l,X_k] - sum_l (a(X_k) c_ij^l) X_l.
inline std::vector<Scalar> jacobiator(const AlgebroidSpec& s, std::uint32_t i, std::uint32_t j,
                                      std::uint32_t k) {
    const std::uint32_t n = s.rank();
    std::vector<Scalar> total(n, Scalar(s.num_vars()));
    const std::uint32_t cyc[3][3] = {{i, j, k}, {j, k, i}, {k, i, j}};
    for (const auto& t : cyc) {
        const auto c = s.frame_bracket(t[0], t[1]);
        for (std::uint32_t l = 1; l <= n; ++l) {
            if (c[l - 1].is_zero()) continue;
            const auto inner = s.frame_bracket(l, t[2]);
            for (std::uint32_t r = 0; r < n; ++r) total[r] += c[l - 1] * inner[r];
            total[l - 1] -= anchor(s, t[2], c[l - 1]);
        }
    }
    return total;
}

// [g X_i, X_j] = g [X_i, X_j] - (a(X_j)g) X_i, straight from the axioms.
inline MultiVector bracket_1_frame(const AlgebroidSpec& s, std::uint32_t i, const Scalar& g,
                                   std::uint32_t j) {
    MultiVector out = s.zero_mv();
    const auto c = s.frame_bracket(i, j);
    for (std::uint32_t k = 1; k <= s.rank(); ++k) out.add_term(FrameIndexSet{k}, g * c[k - 1]);
    out.add_term(FrameIndexSet{i}, -anchor(s, j, g));
    return out;
}

// [g X_i, u] for a monomial u = f X_J, via the in-place Leibniz expansion
//   [X, a /\ b] = [X, a] /\ b + a /\ [X, b]  (degree-1 X acts with no signs):
//   [gX_i, f X_J] = g (a(X_i)f) X_J + f * sum_t X_j1 /\ .. [gX_i, X_jt] .. /\ X_jk.
inline MultiVector lie_on_monomial(const AlgebroidSpec& s, std::uint32_t i, const Scalar& g,
                                   const FrameIndexSet& J, const Scalar& f) {
    MultiVector out = s.zero_mv();
    out.add_term(J, g * anchor(s, i, f));
    const auto& idx = J.indices();
    for (std::size_t t = 0; t < idx.size(); ++t) {
        MultiVector piece = MultiVector::from_scalar(s.rank(), Scalar(s.num_vars(), Rational(1)));
        for (std::size_t r = 0; r < idx.size(); ++r) {
            const MultiVector factor = r == t
                                           ? bracket_1_frame(s, i, g, idx[r])
                                           : s.frame_section(idx[r]);
            piece = wedge(piece, factor);
        }
        out += f * piece;
    }
    return out;
}

// [X, u] for X = sum g_i X_i of degree 1 and arbitrary u.
inline MultiVector lie(const AlgebroidSpec& s, const MultiVector& X, const MultiVector& u) {
    MultiVector out = s.zero_mv();
    for (const auto& [I, g] : X.terms())
        for (const auto& [J, f] : u.terms())
            out += lie_on_monomial(s, I.indices()[0], g, J, f);
    return out;
}

// Value of the coboundary on an increasing index tuple, straight from the
// defining sum (1-based positions p, q):
//   (dw)(X_1..X_{k+1}) = sum_p (-1)^(p+1) a(X_p) w(.. ^p ..)
//                      + sum_{p<q} (-1)^(p+q) w([X_p,X_q], .. ^p ^q ..).
inline Scalar dw_value(const AlgebroidSpec& s, const Form& w,
                       const std::vector<std::uint32_t>& tuple) {
    Scalar out(s.num_vars());
    const std::size_t kp1 = tuple.size();
    auto eval = [&](std::vector<std::uint32_t> args) -> Scalar {
        int sign = 1;
        for (std::size_t a = 1; a < args.size(); ++a)
            for (std::size_t b = a; b > 0 && args[b - 1] > args[b]; --b) {
                std::swap(args[b - 1], args[b]);
                sign = -sign;
            }
        for (std::size_t a = 1; a < args.size(); ++a)
            if (args[a] == args[a - 1]) return Scalar(s.num_vars());
        const Scalar c = w.coefficient(FrameIndexSet(args));
        return sign < 0 ? -c : c;
    };
    for (std::size_t p = 1; p <= kp1; ++p) {
        std::vector<std::uint32_t> rest;
        for (std::size_t r = 0; r < kp1; ++r)
            if (r != p - 1) rest.push_back(tuple[r]);
        const Scalar inner = eval(rest);
        if (inner.is_zero()) continue;
        const Scalar term = anchor(s, tuple[p - 1], inner);
        if (p % 2 == 1) out += term;  // (-1)^(p+1)
        else out -= term;
    }
    for (std::size_t p = 1; p <= kp1; ++p) {
        for (std::size_t q = p + 1; q <= kp1; ++q) {
            const auto c = s.frame_bracket(tuple[p - 1], tuple[q - 1]);
            std::vector<std::uint32_t> rest;
            for (std::size_t r = 0; r < kp1; ++r)
                if (r != p - 1 && r != q - 1) rest.push_back(tuple[r]);
            Scalar contrib(s.num_vars());
            for (std::uint32_t l = 1; l <= s.rank(); ++l) {
                if (c[l - 1].is_zero()) continue;
                std::vector<std::uint32_t> args = {l};
                args.insert(args.end(), rest.begin(), rest.end());
                contrib += c[l - 1] * eval(std::move(args));
            }
            if ((p + q) % 2 == 0) out += contrib;  // (-1)^(p+q)
            else out -= contrib;
        }
    }
    return out;
}

// D(X_i) defined through the reference top section: (D X_i) Lambda =
// L_{X_i} Lambda - theta_i Lambda, with the Lie derivative from the oracle
// expansion above.
inline Scalar d_frame(const AlgebroidSpec& s, const std::vector<Scalar>& theta,
                      std::uint32_t i) {
    const FrameIndexSet full = FrameIndexSet::full(s.rank());
    const MultiVector lam = s.top_section();
    return lie(s, s.frame_section(i), lam).coefficient(full) - theta[i - 1];
}

// [f, X_I] by peeling factors with the graded Leibniz rule:
//   [f, X_i /\ rest] = (-a(X_i)f) X_rest - X_i /\ [f, X_rest].
inline MultiVector bracket_function_monomial(const AlgebroidSpec& s, const Scalar& f,
                                             const FrameIndexSet& I) {
    if (I.degree() == 0) return s.zero_mv();
    const std::uint32_t i = I.indices()[0];
    const auto [sgn, rest] = I.remove(i);
    (void)sgn;  // removing the first index never flips
    MultiVector out = s.zero_mv();
    out.add_term(rest, -anchor(s, i, f));
    out -= wedge(s.frame_section(i), bracket_function_monomial(s, f, rest));
    return out;
}

// The degree -1 operator on one monomial f X_I via the closed double sum
// (not the recursive split the engine uses):
//   D(X_I) = sum_p (-1)^(p+1) D(X_ip) X_(I-ip)
//          + sum_{p<q} (-1)^(p+q) [X_ip, X_iq] /\ X_(I-ip-iq),
//   D(f X_I) = [f, X_I] + f D(X_I).
inline MultiVector extend_monomial(const AlgebroidSpec& s, const std::vector<Scalar>& theta,
                                   const FrameIndexSet& I, const Scalar& f) {
    MultiVector out = bracket_function_monomial(s, f, I);
    const auto& idx = I.indices();
    for (std::size_t p = 0; p < idx.size(); ++p) {
        std::vector<std::uint32_t> rest;
        for (std::size_t r = 0; r < idx.size(); ++r)
            if (r != p) rest.push_back(idx[r]);
        Scalar coeff = f * d_frame(s, theta, idx[p]);
        if (p % 2 == 1) coeff = -coeff;  // (-1)^(p+1), 1-based position p+1
        MultiVector term = s.zero_mv();
        term.add_term(FrameIndexSet(std::move(rest)), std::move(coeff));
        out += term;
    }
    for (std::size_t p = 0; p < idx.size(); ++p) {
        for (std::size_t q = p + 1; q < idx.size(); ++q) {
            std::vector<std::uint32_t> rest;
            for (std::size_t r = 0; r < idx.size(); ++r)
                if (r != p && r != q) rest.push_back(idx[r]);
            MultiVector bracket = s.zero_mv();
            const auto c = s.frame_bracket(idx[p], idx[q]);
            for (std::uint32_t l = 1; l <= s.rank(); ++l)
                bracket.add_term(FrameIndexSet{l}, f * c[l - 1]);
            MultiVector tail = s.zero_mv();
            tail.add_term(FrameIndexSet(std::move(rest)),
                          Scalar(s.num_vars(), Rational(1)));
            MultiVector term = wedge(bracket, tail);
            // (-1)^(p+q) with 1-based positions p+1, q+1
            if ((p + q) % 2 == 1) term = -term;
            out += term;
        }
    }
    return out;
}

inline MultiVector extend(const AlgebroidSpec& s, const std::vector<Scalar>& theta,
                          const MultiVector& u) {
    MultiVector out = s.zero_mv();
    for (const auto& [I, f] : u.terms()) out += extend_monomial(s, theta, I, f);
    return out;
}

// Plain Gaussian elimination over the rationals (the engine uses fraction-free
// Bareiss, so ranks are cross-checked by a different algorithm).
inline std::size_t gaussian_rank(std::vector<std::vector<Rational>> m) {
    if (m.empty() || m[0].empty()) return 0;
    const std::size_t rows = m.size(), cols = m[0].size();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && m[pivot][col].is_zero()) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[pivot], m[rank]);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || m[r][col].is_zero()) continue;
            const Rational factor = m[r][col] / m[rank][col];
            for (std::size_t c = col; c < cols; ++c) m[r][c] -= factor * m[rank][c];
        }
        ++rank;
    }
    return rank;
}

// Betti numbers over a point (m = 0), assembled from the oracle operators:
// boundary columns via extend_monomial, coboundary entries via dw_value,
// ranks via gaussian_rank.
inline std::vector<std::size_t> betti_table(const AlgebroidSpec& s,
                                            const std::vector<Scalar>& theta,
                                            bool cohomology) {
    const std::uint32_t n = s.rank();
    auto basis = [&](std::size_t k) {
        std::vector<FrameIndexSet> out;
        for_each_index_set(n, k, [&](const FrameIndexSet& I) { out.push_back(I); });
        return out;
    };
    // rank of the map leaving degree k (partial_k downward, d_k upward)
    std::vector<std::size_t> out_rank(n + 1, 0);
    for (std::size_t k = 0; k <= n; ++k) {
        if (k == (cohomology ? n : 0u)) continue;
        const auto dom = basis(k);
        const auto cod = basis(cohomology ? k + 1 : k - 1);
        std::vector<std::vector<Rational>> m(cod.size(), std::vector<Rational>(dom.size()));
        for (std::size_t c = 0; c < dom.size(); ++c) {
            if (cohomology) {
                const Form w = Form::basis(n, 0, dom[c]);
                for (std::size_t r = 0; r < cod.size(); ++r)
                    m[r][c] = dw_value(s, w, cod[r].indices()).constant_term();
            } else {
                MultiVector img =
                    extend_monomial(s, theta, dom[c], Scalar(0, Rational(1)));
                if ((n - k) % 2 == 1) img = -img;
                for (std::size_t r = 0; r < cod.size(); ++r)
                    m[r][c] = img.coefficient(cod[r]).constant_term();
            }
        }
        out_rank[k] = gaussian_rank(std::move(m));
    }
    std::vector<std::size_t> dims(n + 1, 0);
    for (std::size_t k = 0; k <= n; ++k) {
        const std::size_t dim = basis(k).size();
        const std::size_t in_rank = cohomology ? (k == 0 ? 0 : out_rank[k - 1])
                                               : (k == n ? 0 : out_rank[k + 1]);
        dims[k] = dim - out_rank[k] - in_rank;
    }
    return dims;
}

}  // namespace oracle
