#pragma once

#include "gerber/algebroid.hpp"
#include "gerber/random.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gerber {

/// Degree of a homogeneous element; 0 for the zero element, throws on mixed
/// degrees.
template <typename Tag>
std::size_t hom_degree(const GradedElement<Tag>& e, const char* what) {
    auto d = e.degrees();
    if (d.size() > 1)
        throw std::invalid_argument(std::string(what) + ": input must be homogeneous");
    return d.empty() ? 0 : *d.begin();
}

/// A-connection on the top exterior power, stored through frame coefficients:
/// nabla_{X_i} Lambda = theta_i Lambda for the frame top section Lambda,
/// extended by nabla_{sum f_i X_i}(g Lambda) = sum f_i (a(X_i)g + g theta_i) Lambda.
class TopConnection {
public:
    TopConnection(AlgebroidSpec spec, std::vector<Scalar> theta)
        : spec_(std::move(spec)), theta_(std::move(theta)) {
        if (theta_.size() != spec_.rank())
            throw std::invalid_argument("TopConnection: need one theta entry per frame section");
        for (const auto& t : theta_)
            if (t.num_vars() != spec_.num_vars())
                throw std::invalid_argument("TopConnection: theta entry over wrong variable count");
    }

    static TopConnection flat(AlgebroidSpec spec) {
        std::vector<Scalar> zeros(spec.rank(), spec.zero_scalar());
        return TopConnection(std::move(spec), std::move(zeros));
    }

    const AlgebroidSpec& spec() const { return spec_; }
    const std::vector<Scalar>& theta() const { return theta_; }

    bool theta_is_zero() const {
        for (const auto& t : theta_)
            if (!t.is_zero()) return false;
        return true;
    }

    /// Coefficient h with nabla_X (g Lambda) = h Lambda, for a degree-1
    /// direction X (a zero or degree-0-free mixed part is rejected).
    Scalar covariant_coeff(const MultiVector& X, const Scalar& g) const {
        Scalar out = spec_.zero_scalar();
        for (const auto& [I, f] : X.terms()) {
            if (I.degree() != 1)
                throw std::invalid_argument("TopConnection: direction must be a degree-1 section");
            const std::uint32_t i = I.indices()[0];
            out += f * (detail::anchor_derivation(spec_, i, g) + g * theta_[i - 1]);
        }
        return out;
    }

    /// nabla_X L for L = g Lambda of top degree.
    MultiVector covariant_derivative(const MultiVector& X, const MultiVector& L) const {
        const std::size_t k = hom_degree(L, "TopConnection::covariant_derivative");
        if (!L.is_zero() && k != spec_.rank())
            throw std::invalid_argument("TopConnection: covariant derivative is defined on top degree");
        const Scalar g = L.coefficient(FrameIndexSet::full(spec_.rank()));
        MultiVector out = spec_.zero_mv();
        out.add_term(FrameIndexSet::full(spec_.rank()), covariant_coeff(X, g));
        return out;
    }

private:
    AlgebroidSpec spec_;
    std::vector<Scalar> theta_;
};

/// D on degree <= 1 inputs, defined against a reference top section
/// T = c Lambda (c a nonzero rational): (DX) T = L_X T - nabla_X T.
/// The result does not depend on c; `d_on_generators` below and the
/// independence property test both rely on that.
inline Scalar d_on_generators(const TopConnection& conn, const MultiVector& X,
                              const MultiVector& top) {
    const AlgebroidSpec& s = conn.spec();
    s.ensure_valid();
    for (const auto& [I, f] : X.terms())
        if (I.degree() > 1)
            throw std::invalid_argument("d_on_generators: input must have degree <= 1");
    const FrameIndexSet full = FrameIndexSet::full(s.rank());
    // the reference section must be a unit multiple of the frame top section
    if (hom_degree(top, "d_on_generators") != s.rank() || top.is_zero() ||
        top.terms().size() != 1)
        throw std::invalid_argument("d_on_generators: reference section must be c * Lambda");
    const Scalar c = top.coefficient(full);
    if (!c.is_constant() || c.is_zero())
        throw std::invalid_argument(
            "d_on_generators: reference section must have a nonzero constant coefficient");

    MultiVector X1 = X.component(1);
    if (X1.is_zero()) return s.zero_scalar();
    const MultiVector lie = detail::schouten(s, X1, top);
    const MultiVector nab = conn.covariant_derivative(X1, top);
    const Scalar diff = lie.coefficient(full) - nab.coefficient(full);
    return Rational(c.constant_term().den(), c.constant_term().num()) * diff;
}

inline Scalar d_on_generators(const TopConnection& conn, const MultiVector& X) {
    return d_on_generators(conn, X, conn.spec().top_section());
}

/// The degree -1 operator: D on generators plus its recursive extension to
/// the whole exterior algebra.  Frame values D(X_i) are cached eagerly.
class GeneratingOperator {
public:
    explicit GeneratingOperator(TopConnection conn) : conn_(std::move(conn)) {
        conn_.spec().ensure_valid();
        const std::uint32_t n = spec().rank();
        frame_d_.reserve(n);
        for (std::uint32_t i = 1; i <= n; ++i)
            frame_d_.push_back(d_on_generators(conn_, spec().frame_section(i)));
    }

    const TopConnection& connection() const { return conn_; }
    const AlgebroidSpec& spec() const { return conn_.spec(); }

    /// Cached D(X_i), one Scalar per frame section.
    const std::vector<Scalar>& frame_d() const { return frame_d_; }

private:
    TopConnection conn_;
    std::vector<Scalar> frame_d_;
};

namespace detail {

/// Extension applied to one monomial f X_I.  Degree 0 dies, degree 1 is
/// D(f X_i) = -a(X_i)f + f D(X_i), and degree >= 2 splits off the lowest
/// frame factor a = X_i:
///   D(a /\ V) = -[a, V] + (Da) V - a /\ D(V),   V = f X_(I minus i).
inline MultiVector extend_term(const GeneratingOperator& op, const FrameIndexSet& I,
                               const Scalar& f) {
    const AlgebroidSpec& s = op.spec();
    const std::size_t k = I.degree();
    if (k == 0) return s.zero_mv();
    if (k == 1) {
        const std::uint32_t i = I.indices()[0];
        return MultiVector::from_scalar(
            s.rank(), -anchor_derivation(s, i, f) + f * op.frame_d()[i - 1]);
    }
    const std::uint32_t i = I.indices()[0];
    FrameIndexSet rest(std::vector<std::uint32_t>(I.indices().begin() + 1, I.indices().end()));
    MultiVector V = s.zero_mv();
    V.add_term(rest, f);
    const MultiVector a = s.frame_section(i);
    MultiVector out = -schouten_terms(s, FrameIndexSet{i}, Scalar(s.num_vars(), Rational(1)),
                                      rest, f);
    out += op.frame_d()[i - 1] * V;
    out -= wedge(a, extend_term(op, rest, f));
    return out;
}

}  // namespace detail

/// The extended operator on arbitrary multivector fields (linear over terms).
inline MultiVector extend(const GeneratingOperator& op, const MultiVector& u) {
    MultiVector out = op.spec().zero_mv();
    for (const auto& [I, f] : u.terms()) out += detail::extend_term(op, I, f);
    return out;
}

inline MultiVector dsquared(const GeneratingOperator& op, const MultiVector& u) {
    return extend(op, extend(op, u));
}

/// Residual of the generator condition
///   [a,b] - (-1)^|a| ( D(a/\b) - Da/\b - (-1)^|a| a/\Db );
/// zero for every homogeneous pair by construction of the extension.
inline MultiVector generator_check(const GeneratingOperator& op, const MultiVector& a,
                                   const MultiVector& b) {
    const AlgebroidSpec& s = op.spec();
    const std::size_t da = hom_degree(a, "generator_check");
    hom_degree(b, "generator_check");
    const MultiVector bracket = schouten_bracket(s, a, b);
    MultiVector inner = extend(op, wedge(a, b)) - wedge(extend(op, a), b);
    MultiVector last = wedge(a, extend(op, b));
    if (da % 2 == 1) last = -last;  // (-1)^|a| a /\ Db
    inner -= last;
    if (da % 2 == 1) inner = -inner;  // (-1)^|a| prefactor
    return bracket - inner;
}

/// Residual of the derivation identity
///   D[u,v] - [Du,v] - (-1)^(|u|-1) [u,Dv];
/// vanishes identically exactly when the connection is flat.
inline MultiVector derivation_check(const GeneratingOperator& op, const MultiVector& u,
                                    const MultiVector& v) {
    const AlgebroidSpec& s = op.spec();
    const std::size_t du = hom_degree(u, "derivation_check");
    hom_degree(v, "derivation_check");
    MultiVector out = extend(op, schouten_bracket(s, u, v));
    out -= schouten_bracket(s, extend(op, u), v);
    MultiVector tail = schouten_bracket(s, u, extend(op, v));
    if (du % 2 == 0) tail = -tail;  // (-1)^(|u|-1)
    out -= tail;
    return out;
}

/// Curvature coefficient r with R(X,Y) Lambda = r Lambda, computed literally
/// as nabla_X nabla_Y - nabla_Y nabla_X - nabla_[X,Y] applied to Lambda.
inline Scalar curvature(const TopConnection& conn, const MultiVector& X, const MultiVector& Y) {
    const AlgebroidSpec& s = conn.spec();
    s.ensure_valid();
    for (const auto* e : {&X, &Y})
        for (const auto& [I, f] : e->terms())
            if (I.degree() != 1)
                throw std::invalid_argument("curvature: inputs must be degree-1 sections");
    const Scalar one(s.num_vars(), Rational(1));
    Scalar out = conn.covariant_coeff(X, conn.covariant_coeff(Y, one));
    out -= conn.covariant_coeff(Y, conn.covariant_coeff(X, one));
    out -= conn.covariant_coeff(detail::schouten(s, X, Y), one);
    return out;
}

/// Residual of R(X,Y) Lambda = -X /\ Y /\ D^2 Lambda, returned as
/// R(X,Y)Lambda + X /\ Y /\ D^2 Lambda.
inline MultiVector curvature_vs_dsquared(const TopConnection& conn, const MultiVector& X,
                                         const MultiVector& Y) {
    const AlgebroidSpec& s = conn.spec();
    const Scalar r = curvature(conn, X, Y);
    GeneratingOperator op(conn);
    MultiVector out = r * s.top_section();
    out += wedge(X, wedge(Y, dsquared(op, s.top_section())));
    return out;
}

/// Residual of the recovery identity nabla_X L = -X /\ D(L), returned as
/// nabla_X L + X /\ D(L); L must be of top degree.
inline MultiVector connection_recovery(const GeneratingOperator& op, const MultiVector& X,
                                       const MultiVector& L) {
    const std::size_t k = hom_degree(L, "connection_recovery");
    if (!L.is_zero() && k != op.spec().rank())
        throw std::invalid_argument("connection_recovery: section must have top degree");
    MultiVector out = op.connection().covariant_derivative(X, L);
    out += wedge(X, extend(op, L));
    return out;
}

struct FlatnessStage {
    std::string name;
    bool pass = true;
    std::string witness;                   // where the first failure occurred
    std::optional<MultiVector> residual;   // the failing value, when !pass
};

struct FlatnessReport {
    bool flat = true;
    std::vector<FlatnessStage> stages;
};

/// Checks the implication chain behind "flat connection <=> square-zero
/// operator" on this spec, in three stages:
///   1. D^2 kills the top sections f Lambda (f ranging over samples);
///   2. the derivation identity holds on all frame pairs;
///   3. D^2 kills a randomized sample across all degrees.
/// A flat connection passes all three; a curved one must already fail stage 1.
inline FlatnessReport flatness_propagation_check(const GeneratingOperator& op,
                                                 std::uint64_t seed = 0, int samples = 25,
                                                 long max_poly_degree = 3) {
    const AlgebroidSpec& s = op.spec();
    FlatnessReport report;
    Rng rng(seed);

    FlatnessStage top{"top-sections", true, "", std::nullopt};
    const MultiVector lambda = s.top_section();
    MultiVector res = dsquared(op, lambda);
    if (!res.is_zero()) {
        top.pass = false;
        top.witness = "Lambda";
        top.residual = res;
    }
    for (int t = 0; top.pass && t < samples; ++t) {
        const Scalar f = rng.nonzero_scalar(s.num_vars(), max_poly_degree);
        res = dsquared(op, f * lambda);
        if (!res.is_zero()) {
            top.pass = false;
            top.witness = "f * Lambda, sample " + std::to_string(t);
            top.residual = res;
        }
    }
    report.stages.push_back(std::move(top));

    FlatnessStage pairs{"frame-pairs", true, "", std::nullopt};
    for (std::uint32_t i = 1; pairs.pass && i <= s.rank(); ++i) {
        for (std::uint32_t j = i + 1; pairs.pass && j <= s.rank(); ++j) {
            res = derivation_check(op, s.frame_section(i), s.frame_section(j));
            if (!res.is_zero()) {
                pairs.pass = false;
                pairs.witness =
                    "pair (" + std::to_string(i) + ", " + std::to_string(j) + ")";
                pairs.residual = res;
            }
        }
    }
    report.stages.push_back(std::move(pairs));

    FlatnessStage sample{"random-sample", true, "", std::nullopt};
    for (int t = 0; sample.pass && t < samples; ++t) {
        const std::size_t degree = static_cast<std::size_t>(t) % (s.rank() + 1);
        const MultiVector u = rng.multivector(s.rank(), s.num_vars(), degree, max_poly_degree);
        res = dsquared(op, u);
        if (!res.is_zero()) {
            sample.pass = false;
            sample.witness = "sample " + std::to_string(t) + " (degree " +
                             std::to_string(degree) + ")";
            sample.residual = res;
        }
    }
    report.stages.push_back(std::move(sample));

    for (const auto& st : report.stages) report.flat = report.flat && st.pass;
    return report;
}

}  // namespace gerber
