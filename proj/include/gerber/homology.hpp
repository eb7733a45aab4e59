#pragma once

#include "gerber/bv.hpp"
#include "gerber/linalg.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gerber {

/// Contraction against the fixed frame top section Lambda = X_1 /\ ... /\ X_n.
class StarOperator {
public:
    explicit StarOperator(AlgebroidSpec spec)
        : spec_(std::move(spec)), top_(spec_.top_section()) {}

    const AlgebroidSpec& spec() const { return spec_; }
    const MultiVector& top() const { return top_; }

    MultiVector apply(const Form& w) const {
        if (w.rank() != spec_.rank() || w.num_vars() != spec_.num_vars())
            throw std::invalid_argument("StarOperator: form over a different frame");
        return contract(w, top_);
    }

private:
    AlgebroidSpec spec_;
    MultiVector top_;
};

inline MultiVector star(const StarOperator& s, const Form& w) { return s.apply(w); }

/// Chain boundary at degree k: (-1)^(n-k) times the degree -1 operator.
/// Squares to zero precisely when the underlying connection is flat.
inline MultiVector boundary(const GeneratingOperator& op, const MultiVector& u, std::size_t k) {
    const std::size_t deg = hom_degree(u, "boundary");
    if (!u.is_zero() && deg != k)
        throw std::invalid_argument("boundary: input degree does not match k");
    MultiVector out = extend(op, u);
    const std::size_t n = op.spec().rank();
    if (k > n) throw std::invalid_argument("boundary: degree exceeds rank");
    if ((n - k) % 2 == 1) out = -out;
    return out;
}

/// Residual of the commuting square linking the coboundary to the chain
/// boundary through *: returns D0(w . Lambda) + (-1)^|w| (dw) . Lambda.
/// Requires the horizontal connection theta = 0.
inline MultiVector star_diagram_check(const GeneratingOperator& op, const Form& w) {
    if (!op.connection().theta_is_zero())
        throw std::invalid_argument("star_diagram_check: requires theta = 0");
    const AlgebroidSpec& s = op.spec();
    const std::size_t k = hom_degree(w, "star_diagram_check");
    const MultiVector lambda = s.top_section();
    MultiVector out = extend(op, contract(w, lambda));
    MultiVector tail = contract(detail::differential(s, w), lambda);
    if (k % 2 == 1) tail = -tail;
    out += tail;
    return out;
}

/// Residual of the contraction identity
///   dw . u = w . D(u) - (-1)^|w| D(w . u),
/// returned as dw.u - w.D(u) + (-1)^|w| D(w.u); holds for flat and curved
/// operators alike, whenever |w| + 1 <= |u|.
inline MultiVector dw_contraction_identity(const GeneratingOperator& op, const Form& w,
                                           const MultiVector& u) {
    const AlgebroidSpec& s = op.spec();
    const std::size_t dw = hom_degree(w, "dw_contraction_identity");
    const std::size_t du = hom_degree(u, "dw_contraction_identity");
    if (!w.is_zero() && !u.is_zero() && dw + 1 > du)
        throw std::invalid_argument("dw_contraction_identity: requires |w| + 1 <= |u|");
    MultiVector out = contract(detail::differential(s, w), u);
    out -= contract(w, extend(op, u));
    MultiVector tail = extend(op, contract(w, u));
    if (dw % 2 == 1) tail = -tail;
    out += tail;
    return out;
}

enum class Direction { homology, cohomology };

inline std::string direction_name(Direction d) {
    return d == Direction::homology ? "homology" : "cohomology";
}

/// Matrices of the boundary (or coboundary) in the frame-monomial basis,
/// ordered lexicographically within each degree.  Only defined over a point
/// (m = 0), where the chain spaces are finite-dimensional.
struct ChainComplexMatrices {
    Direction direction;
    // homology:   matrices[k] is partial_k : C_k -> C_(k-1), k = 1..n
    // cohomology: matrices[k] is d_k : C^k -> C^(k+1),       k = 0..n-1
    std::map<std::size_t, RationalMatrix> matrices;
};

struct BettiTable {
    Direction direction;
    std::vector<std::size_t> dims;  // n+1 entries
};

namespace detail {

inline std::vector<FrameIndexSet> degree_basis(std::uint32_t n, std::size_t k) {
    std::vector<FrameIndexSet> basis;
    for_each_index_set(n, k, [&](const FrameIndexSet& I) { basis.push_back(I); });
    return basis;
}

inline void require_point_base(const AlgebroidSpec& s) {
    if (s.num_vars() != 0)
        throw std::invalid_argument("Betti computation requires base dimension 0");
}

inline void require_flat(const TopConnection& conn) {
    const AlgebroidSpec& s = conn.spec();
    for (std::uint32_t i = 1; i <= s.rank(); ++i)
        for (std::uint32_t j = i + 1; j <= s.rank(); ++j)
            if (!curvature(conn, s.frame_section(i), s.frame_section(j)).is_zero())
                throw std::invalid_argument("homology requires a flat connection");
}

}  // namespace detail

inline ChainComplexMatrices chain_matrices(const GeneratingOperator& op, Direction dir) {
    const AlgebroidSpec& s = op.spec();
    s.ensure_valid();
    detail::require_point_base(s);
    if (dir == Direction::homology) detail::require_flat(op.connection());
    const std::uint32_t n = s.rank();
    ChainComplexMatrices out{dir, {}};
    if (dir == Direction::homology) {
        for (std::size_t k = 1; k <= n; ++k) {
            const auto dom = detail::degree_basis(n, k);
            const auto cod = detail::degree_basis(n, k - 1);
            RationalMatrix m(cod.size(), dom.size());
            for (std::size_t c = 0; c < dom.size(); ++c) {
                const MultiVector img =
                    boundary(op, MultiVector::basis(n, 0, dom[c]), k);
                for (std::size_t r = 0; r < cod.size(); ++r)
                    m.at(r, c) = img.coefficient(cod[r]).constant_term();
            }
            out.matrices.emplace(k, std::move(m));
        }
    } else {
        for (std::size_t k = 0; k < n; ++k) {
            const auto dom = detail::degree_basis(n, k);
            const auto cod = detail::degree_basis(n, k + 1);
            RationalMatrix m(cod.size(), dom.size());
            for (std::size_t c = 0; c < dom.size(); ++c) {
                const Form img = detail::differential(s, Form::basis(n, 0, dom[c]));
                for (std::size_t r = 0; r < cod.size(); ++r)
                    m.at(r, c) = img.coefficient(cod[r]).constant_term();
            }
            out.matrices.emplace(k, std::move(m));
        }
    }
    return out;
}

/// Exact Betti numbers of the chain (or cochain) complex over a point.
inline BettiTable betti(const GeneratingOperator& op, Direction dir) {
    const AlgebroidSpec& s = op.spec();
    const std::uint32_t n = s.rank();
    const ChainComplexMatrices cm = chain_matrices(op, dir);
    auto rank_of = [&](std::size_t k) -> std::size_t {
        auto it = cm.matrices.find(k);
        return it == cm.matrices.end() ? 0 : it->second.rank();
    };
    BettiTable table{dir, std::vector<std::size_t>(n + 1, 0)};
    for (std::size_t k = 0; k <= n; ++k) {
        const std::size_t dim = detail::degree_basis(n, k).size();
        std::size_t out_rank, in_rank;
        if (dir == Direction::homology) {
            out_rank = rank_of(k);       // partial_k
            in_rank = rank_of(k + 1);    // partial_(k+1)
        } else {
            out_rank = rank_of(k);       // d_k
            in_rank = k == 0 ? 0 : rank_of(k - 1);  // d_(k-1)
        }
        table.dims[k] = dim - out_rank - in_rank;
    }
    return table;
}

struct DualityReport {
    bool pass = true;
    std::vector<std::size_t> homology;
    std::vector<std::size_t> cohomology;
    std::vector<std::string> witness_failures;
};

/// Computes both Betti tables for the horizontal connection (theta = 0),
/// checks dim H_k = dim H^(n-k), and verifies the witnessing chain map: the
/// commuting-square residual must vanish on every frame form, which is what
/// sends cocycles to cycles and coboundaries to boundaries degreewise.
inline DualityReport duality_check(const AlgebroidSpec& spec) {
    spec.ensure_valid();
    detail::require_point_base(spec);
    const std::uint32_t n = spec.rank();
    GeneratingOperator op(TopConnection::flat(spec));
    DualityReport report;
    report.homology = betti(op, Direction::homology).dims;
    report.cohomology = betti(op, Direction::cohomology).dims;
    for (std::size_t k = 0; k <= n; ++k)
        if (report.homology[k] != report.cohomology[n - k]) report.pass = false;
    for (std::size_t k = 0; k <= n; ++k) {
        for (const auto& I : detail::degree_basis(n, k)) {
            const Form w = Form::basis(n, 0, I);
            if (star_diagram_check(op, w).is_zero()) continue;
            std::string desc = "degree " + std::to_string(k) + " basis form (";
            for (std::size_t t = 0; t < I.indices().size(); ++t)
                desc += (t ? "," : "") + std::to_string(I.indices()[t]);
            desc += ")";
            report.witness_failures.push_back(std::move(desc));
            report.pass = false;
        }
    }
    return report;
}

}  // namespace gerber
