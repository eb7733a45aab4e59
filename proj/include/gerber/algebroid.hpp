#pragma once

#include "gerber/multivector.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gerber {

// Frame indices are 1-based throughout (they index X_1..X_n, matching
// FrameIndexSet); base-variable indices are 0-based (they index exponent
// vectors inside Scalar).

struct Violation {
    std::string identity;              // "jacobi" or "anchor-morphism"
    std::vector<std::uint32_t> where;  // witness indices, see validate()
    Scalar residual;
};

struct ValidationReport {
    bool ok = true;
    std::vector<Violation> violations;
};

class InvalidSpecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Structure data of a Lie algebroid in a fixed global frame over the
/// polynomial model Q[x_1..x_m]: anchor coefficients a(X_i) = sum_mu
/// anchor[i][mu] d/dx_mu and frame brackets [X_i, X_j] = sum_k c_ij^k X_k.
/// The defining identities are checked eagerly at construction; operations
/// that require them consult ensure_valid().
class AlgebroidSpec {
public:
    using StructureMap =
        std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<Scalar>>;

    AlgebroidSpec(std::vector<std::string> base_vars, std::vector<std::string> frame,
                  std::vector<std::string> coframe, std::vector<std::vector<Scalar>> anchor,
                  StructureMap structure)
        : base_vars_(std::move(base_vars)),
          frame_(std::move(frame)),
          coframe_(std::move(coframe)),
          anchor_(std::move(anchor)),
          structure_(std::move(structure)) {
        check_shapes();
        run_checks();
    }

    std::uint32_t rank() const { return static_cast<std::uint32_t>(frame_.size()); }
    std::size_t num_vars() const { return base_vars_.size(); }
    const std::vector<std::string>& base_vars() const { return base_vars_; }
    const std::vector<std::string>& frame_names() const { return frame_; }
    const std::vector<std::string>& coframe_names() const { return coframe_; }
    const std::vector<std::vector<Scalar>>& anchor() const { return anchor_; }
    const StructureMap& structure() const { return structure_; }

    /// anchor coefficient of a(X_i) on d/dx_mu; i is 1-based, mu 0-based.
    const Scalar& anchor_entry(std::uint32_t i, std::size_t mu) const {
        return anchor_.at(i - 1).at(mu);
    }

    /// Coefficients of [X_i, X_j] in the frame, for any i, j (antisymmetric,
    /// zero on the diagonal).
    std::vector<Scalar> frame_bracket(std::uint32_t i, std::uint32_t j) const {
        std::vector<Scalar> out(rank(), Scalar(num_vars()));
        if (i == j) return out;
        const bool flip = i > j;
        if (flip) std::swap(i, j);
        auto it = structure_.find({i, j});
        if (it == structure_.end()) return out;
        for (std::uint32_t k = 0; k < rank(); ++k) out[k] = flip ? -it->second[k] : it->second[k];
        return out;
    }

    const ValidationReport& validation() const { return report_; }
    bool is_valid() const { return report_.ok; }
    void ensure_valid() const {
        if (!report_.ok)
            throw InvalidSpecError("algebroid spec fails validation (" +
                                   std::to_string(report_.violations.size()) + " violation(s))");
    }

    Scalar zero_scalar() const { return Scalar(num_vars()); }
    MultiVector zero_mv() const { return MultiVector(rank(), num_vars()); }
    Form zero_form() const { return Form(rank(), num_vars()); }
    MultiVector frame_section(std::uint32_t i) const {
        return MultiVector::basis(rank(), num_vars(), FrameIndexSet{i});
    }
    MultiVector top_section() const {
        return MultiVector::basis(rank(), num_vars(), FrameIndexSet::full(rank()));
    }

private:
    void check_shapes() const {
        const std::size_t n = frame_.size();
        if (coframe_.size() != n)
            throw std::invalid_argument("AlgebroidSpec: coframe size must match frame size");
        if (anchor_.size() != n)
            throw std::invalid_argument("AlgebroidSpec: anchor must have one row per frame section");
        for (const auto& row : anchor_) {
            if (row.size() != base_vars_.size())
                throw std::invalid_argument("AlgebroidSpec: anchor row length must match base dimension");
            for (const auto& s : row)
                if (s.num_vars() != base_vars_.size())
                    throw std::invalid_argument("AlgebroidSpec: anchor entry over wrong variable count");
        }
        for (const auto& [key, coeffs] : structure_) {
            if (key.first == 0 || key.first >= key.second || key.second > n)
                throw std::invalid_argument("AlgebroidSpec: structure keys must satisfy 1 <= i < j <= n");
            if (coeffs.size() != n)
                throw std::invalid_argument("AlgebroidSpec: structure entry must have one coefficient per frame section");
            for (const auto& s : coeffs)
                if (s.num_vars() != base_vars_.size())
                    throw std::invalid_argument("AlgebroidSpec: structure coefficient over wrong variable count");
        }
    }

    void run_checks();

    std::vector<std::string> base_vars_;
    std::vector<std::string> frame_;
    std::vector<std::string> coframe_;
    std::vector<std::vector<Scalar>> anchor_;  // n x m
    StructureMap structure_;                   // (i<j) -> n coefficients
    ValidationReport report_;
};

namespace detail {

/// a(X_i)f = sum_mu anchor[i][mu] * df/dx_mu (i 1-based).
inline Scalar anchor_derivation(const AlgebroidSpec& s, std::uint32_t i, const Scalar& f) {
    Scalar out(s.num_vars());
    for (std::size_t mu = 0; mu < s.num_vars(); ++mu)
        out += s.anchor_entry(i, mu) * f.derivative(mu);
    return out;
}

/// a(sum_i a_i X_i)f for a section given by its coefficient vector.
inline Scalar anchor_derivation(const AlgebroidSpec& s, const std::vector<Scalar>& coeffs,
                                const Scalar& f) {
    Scalar out(s.num_vars());
    for (std::uint32_t i = 1; i <= s.rank(); ++i)
        out += coeffs[i - 1] * anchor_derivation(s, i, f);
    return out;
}

/// Bracket of two degree-1 sections given by coefficient vectors:
/// [sum a_i X_i, sum b_j X_j] = sum a_i b_j [X_i,X_j]
///                            + sum_j (a(A)b_j) X_j - sum_i (a(B)a_i) X_i.
inline std::vector<Scalar> section_bracket(const AlgebroidSpec& s, const std::vector<Scalar>& a,
                                           const std::vector<Scalar>& b) {
    const std::uint32_t n = s.rank();
    std::vector<Scalar> out(n, s.zero_scalar());
    for (std::uint32_t i = 1; i <= n; ++i) {
        if (a[i - 1].is_zero()) continue;
        for (std::uint32_t j = 1; j <= n; ++j) {
            if (b[j - 1].is_zero()) continue;
            auto c = s.frame_bracket(i, j);
            const Scalar ab = a[i - 1] * b[j - 1];
            for (std::uint32_t k = 0; k < n; ++k)
                if (!c[k].is_zero()) out[k] += ab * c[k];
        }
    }
    for (std::uint32_t j = 1; j <= n; ++j) out[j - 1] += anchor_derivation(s, a, b[j - 1]);
    for (std::uint32_t i = 1; i <= n; ++i) out[i - 1] -= anchor_derivation(s, b, a[i - 1]);
    return out;
}

/// [X_i, X_j] as a MultiVector.
inline MultiVector frame_bracket_mv(const AlgebroidSpec& s, std::uint32_t i, std::uint32_t j) {
    MultiVector out = s.zero_mv();
    auto c = s.frame_bracket(i, j);
    for (std::uint32_t k = 1; k <= s.rank(); ++k)
        out.add_term(FrameIndexSet{k}, std::move(c[k - 1]));
    return out;
}

/// Schouten bracket of the monomials f*X_I and g*X_J, by recursion on degree.
/// Base cases on degrees <= 1; higher right degree splits off the right
/// argument's lowest frame factor through the super-Leibniz rule; higher left
/// degree flips via graded antisymmetry.
inline MultiVector schouten_terms(const AlgebroidSpec& s, const FrameIndexSet& I, const Scalar& f,
                                  const FrameIndexSet& J, const Scalar& g) {
    const std::size_t du = I.degree();
    const std::size_t dv = J.degree();
    const std::uint32_t n = s.rank();
    const std::size_t m = s.num_vars();

    if (du <= 1 && dv <= 1) {
        if (du == 0 && dv == 0) return s.zero_mv();
        if (du == 1 && dv == 0) {
            // [f X_i, g] = f * a(X_i)g
            const std::uint32_t i = I.indices()[0];
            return MultiVector::from_scalar(n, f * anchor_derivation(s, i, g));
        }
        if (du == 0 && dv == 1) {
            // [f, g X_j] = -g * a(X_j)f
            const std::uint32_t j = J.indices()[0];
            return MultiVector::from_scalar(n, -(g * anchor_derivation(s, j, f)));
        }
        // [f X_i, g X_j] = fg [X_i,X_j] + f(a(X_i)g) X_j - g(a(X_j)f) X_i
        const std::uint32_t i = I.indices()[0];
        const std::uint32_t j = J.indices()[0];
        MultiVector out = (f * g) * frame_bracket_mv(s, i, j);
        out.add_term(J, f * anchor_derivation(s, i, g));
        out.add_term(I, -(g * anchor_derivation(s, j, f)));
        return out;
    }

    if (dv >= 2) {
        // v = X_j /\ v' with j the lowest index of J and v' = g X_J'.
        // [u, X_j /\ v'] = [u, X_j] /\ v' + (-1)^(|u|-1) X_j /\ [u, v']
        const std::uint32_t j = J.indices()[0];
        FrameIndexSet Jrest(
            std::vector<std::uint32_t>(J.indices().begin() + 1, J.indices().end()));
        const Scalar one(m, Rational(1));

        MultiVector left = schouten_terms(s, I, f, FrameIndexSet{j}, one);
        MultiVector vrest(n, m);
        vrest.add_term(Jrest, g);
        MultiVector out = wedge(left, vrest);

        MultiVector right = schouten_terms(s, I, f, Jrest, g);
        MultiVector xj = MultiVector::basis(n, m, FrameIndexSet{j});
        MultiVector tail = wedge(xj, right);
        if ((du + 1) % 2 == 1) tail = -tail;  // sign (-1)^(du-1)
        return out + tail;
    }

    // du >= 2, dv <= 1: [u,v] = -(-1)^((|u|-1)(|v|-1)) [v,u]
    MultiVector flipped = schouten_terms(s, J, g, I, f);
    const long exponent = (static_cast<long>(du) - 1) * (static_cast<long>(dv) - 1);
    return exponent % 2 == 0 ? -flipped : flipped;
}

inline MultiVector schouten(const AlgebroidSpec& s, const MultiVector& u, const MultiVector& v) {
    MultiVector out = s.zero_mv();
    for (const auto& [I, f] : u.terms())
        for (const auto& [J, g] : v.terms()) out += schouten_terms(s, I, f, J, g);
    return out;
}

/// Value of the homogeneous form w on an ordered tuple of frame indices
/// (alternating in the arguments; duplicate indices give 0).
inline Scalar eval_form(const AlgebroidSpec& s, const Form& w,
                        std::vector<std::uint32_t> args) {
    int sign = 1;
    // insertion sort, tracking the permutation sign
    for (std::size_t i = 1; i < args.size(); ++i) {
        std::size_t j = i;
        while (j > 0 && args[j - 1] > args[j]) {
            std::swap(args[j - 1], args[j]);
            sign = -sign;
            --j;
        }
    }
    for (std::size_t i = 1; i < args.size(); ++i)
        if (args[i] == args[i - 1]) return s.zero_scalar();
    Scalar c = w.coefficient(FrameIndexSet(std::move(args)));
    return sign < 0 ? -c : c;
}

/// Cartan-style coboundary on forms:
/// (dw)(X_1..X_{k+1}) = sum_p (-1)^(p+1) a(X_p) w(.. ^X_p ..)
///                    + sum_{p<q} (-1)^(p+q) w([X_p,X_q], .. ^X_p ^X_q ..).
inline Form differential(const AlgebroidSpec& s, const Form& w) {
    Form out = s.zero_form();
    const std::uint32_t n = s.rank();
    for (std::size_t k : w.degrees()) {
        const Form wk = w.component(k);
        if (k + 1 > n) continue;
        for_each_index_set(n, k + 1, [&](const FrameIndexSet& K) {
            const auto& idx = K.indices();
            Scalar coeff = s.zero_scalar();
            // anchor sum
            for (std::size_t p = 0; p < idx.size(); ++p) {
                auto [sgn, rest] = K.remove(idx[p]);  // sgn = (-1)^p for position p+1
                Scalar val = wk.coefficient(rest);
                if (val.is_zero()) continue;
                Scalar term = anchor_derivation(s, idx[p], val);
                coeff += sgn < 0 ? -term : term;
            }
            // bracket sum
            for (std::size_t p = 0; p < idx.size(); ++p) {
                for (std::size_t q = p + 1; q < idx.size(); ++q) {
                    auto c = s.frame_bracket(idx[p], idx[q]);
                    std::vector<std::uint32_t> rest;
                    for (std::size_t r = 0; r < idx.size(); ++r)
                        if (r != p && r != q) rest.push_back(idx[r]);
                    Scalar contrib = s.zero_scalar();
                    for (std::uint32_t l = 1; l <= n; ++l) {
                        if (c[l - 1].is_zero()) continue;
                        std::vector<std::uint32_t> args;
                        args.reserve(rest.size() + 1);
                        args.push_back(l);
                        args.insert(args.end(), rest.begin(), rest.end());
                        Scalar val = eval_form(s, wk, std::move(args));
                        if (!val.is_zero()) contrib += c[l - 1] * val;
                    }
                    if (contrib.is_zero()) continue;
                    // 1-based positions are p+1 and q+1, so the sign is
                    // (-1)^((p+1)+(q+1)) = (-1)^(p+q)
                    if ((p + q) % 2 == 0) coeff += contrib;
                    else coeff -= contrib;
                }
            }
            out.add_term(K, std::move(coeff));
        });
    }
    return out;
}

}  // namespace detail

inline void AlgebroidSpec::run_checks() {
    const std::uint32_t n = rank();
    // (i) Jacobi identity on frame triples
    for (std::uint32_t i = 1; i <= n; ++i) {
        for (std::uint32_t j = i + 1; j <= n; ++j) {
            for (std::uint32_t k = j + 1; k <= n; ++k) {
                std::vector<Scalar> total(n, zero_scalar());
                const std::uint32_t tri[3][3] = {{i, j, k}, {j, k, i}, {k, i, j}};
                for (const auto& t : tri) {
                    std::vector<Scalar> inner = frame_bracket(t[0], t[1]);
                    std::vector<Scalar> outer(n, zero_scalar());
                    outer[t[2] - 1] = Scalar(num_vars(), Rational(1));
                    auto term = detail::section_bracket(*this, inner, outer);
                    for (std::uint32_t l = 0; l < n; ++l) total[l] += term[l];
                }
                for (std::uint32_t l = 1; l <= n; ++l) {
                    if (total[l - 1].is_zero()) continue;
                    report_.violations.push_back({"jacobi", {i, j, k, l}, total[l - 1]});
                }
            }
        }
    }
    // (ii) anchor is a bracket morphism: a([X_i,X_j]) = [a(X_i), a(X_j)]
    for (std::uint32_t i = 1; i <= n; ++i) {
        for (std::uint32_t j = i + 1; j <= n; ++j) {
            auto c = frame_bracket(i, j);
            for (std::size_t nu = 0; nu < num_vars(); ++nu) {
                Scalar lhs = zero_scalar();
                for (std::uint32_t k = 1; k <= n; ++k) lhs += c[k - 1] * anchor_entry(k, nu);
                Scalar rhs = zero_scalar();
                for (std::size_t mu = 0; mu < num_vars(); ++mu) {
                    rhs += anchor_entry(i, mu) * anchor_entry(j, nu).derivative(mu);
                    rhs -= anchor_entry(j, mu) * anchor_entry(i, nu).derivative(mu);
                }
                Scalar res = rhs - lhs;
                if (res.is_zero()) continue;
                report_.violations.push_back(
                    {"anchor-morphism", {i, j, static_cast<std::uint32_t>(nu + 1)}, res});
            }
        }
    }
    report_.ok = report_.violations.empty();
}

inline ValidationReport validate(const AlgebroidSpec& spec) { return spec.validation(); }

/// a(X)f for X of degree <= 1 (the degree-0 part contributes nothing).
inline Scalar anchor_apply(const AlgebroidSpec& spec, const MultiVector& X, const Scalar& f) {
    Scalar out = spec.zero_scalar();
    for (const auto& [I, g] : X.terms()) {
        if (I.degree() > 1)
            throw std::invalid_argument("anchor_apply: input must have degree <= 1");
        if (I.degree() == 0) continue;
        out += g * detail::anchor_derivation(spec, I.indices()[0], f);
    }
    return out;
}

/// Schouten bracket on arbitrary (possibly mixed-degree) multivector fields.
inline MultiVector schouten_bracket(const AlgebroidSpec& spec, const MultiVector& u,
                                    const MultiVector& v) {
    spec.ensure_valid();
    return detail::schouten(spec, u, v);
}

/// L_X u = [X, u] for X of degree 1.
inline MultiVector lie_derivative(const AlgebroidSpec& spec, const MultiVector& X,
                                  const MultiVector& u) {
    spec.ensure_valid();
    for (const auto& [I, g] : X.terms())
        if (I.degree() != 1)
            throw std::invalid_argument("lie_derivative: direction must be homogeneous of degree 1");
    return detail::schouten(spec, X, u);
}

/// Lie algebroid coboundary d on forms (degree +1).
inline Form differential(const AlgebroidSpec& spec, const Form& w) {
    spec.ensure_valid();
    return detail::differential(spec, w);
}

}  // namespace gerber
