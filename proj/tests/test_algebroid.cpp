#include "gerber/algebroid.hpp"
#include "gerber/random.hpp"
#include "gerber/registry.hpp"
#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace gerber;

namespace {

AlgebroidSpec example(const std::string& name) { return make_example(name).spec; }

MultiVector mv_basis(const AlgebroidSpec& s, std::initializer_list<std::uint32_t> idx) {
    return MultiVector::basis(s.rank(), s.num_vars(), FrameIndexSet(idx));
}

Form form_basis(const AlgebroidSpec& s, std::initializer_list<std::uint32_t> idx) {
    return Form::basis(s.rank(), s.num_vars(), FrameIndexSet(idx));
}

// The invalid rank-3 test spec: c_12^3 = 1, c_23^1 = 1, c_31^1 = 1, anchor 0.
AlgebroidSpec broken_spec() {
    AlgebroidSpec::StructureMap st;
    auto consts = [](std::initializer_list<int> v) {
        std::vector<Scalar> out;
        for (int c : v) out.emplace_back(0, Rational(c));
        return out;
    };
    st.emplace(std::make_pair(1u, 2u), consts({0, 0, 1}));
    st.emplace(std::make_pair(2u, 3u), consts({1, 0, 0}));
    st.emplace(std::make_pair(1u, 3u), consts({-1, 0, 0}));  // [X3,X1] = X1
    return AlgebroidSpec({}, {"X1", "X2", "X3"}, {"a1", "a2", "a3"},
                         std::vector<std::vector<Scalar>>(3), std::move(st));
}

const std::vector<std::string> kRegistryNames = {
    "abelian-n2", "abelian-n3", "heisenberg", "sl2", "aff1", "tangent-r2"};

}  // namespace

TEST_CASE("validate accepts the well-formed examples") {
    for (const auto& [name, summary] : example_catalog()) {
        const auto entry = make_example(name);
        INFO(name);
        CHECK(entry.spec.is_valid());
        CHECK(validate(entry.spec).violations.empty());
    }
}

TEST_CASE("validate rejects a bracket that fails Jacobi") {
    const AlgebroidSpec bad = broken_spec();
    REQUIRE(!bad.is_valid());
    REQUIRE(!bad.validation().violations.empty());
    const auto& v = bad.validation().violations.front();
    CHECK(v.identity == "jacobi");
    REQUIRE(v.where.size() == 4);
    CHECK(v.where[0] == 1);
    CHECK(v.where[1] == 2);
    CHECK(v.where[2] == 3);
    // oracle: the Jacobiator evaluates to X3 on the triple (1,2,3)
    const auto jac = oracle::jacobiator(bad, 1, 2, 3);
    CHECK(jac[0].is_zero());
    CHECK(jac[1].is_zero());
    CHECK(jac[2] == Scalar(0, Rational(1)));
    CHECK(v.where[3] == 3);
    CHECK(v.residual == jac[2]);
    CHECK_THROWS_AS(schouten_bracket(bad, bad.frame_section(1), bad.frame_section(2)),
                    InvalidSpecError);
}

TEST_CASE("validate agrees with the brute-force Jacobiator everywhere") {
    for (const auto& name : kRegistryNames) {
        const AlgebroidSpec s = example(name);
        for (std::uint32_t i = 1; i <= s.rank(); ++i)
            for (std::uint32_t j = i + 1; j <= s.rank(); ++j)
                for (std::uint32_t k = j + 1; k <= s.rank(); ++k)
                    for (const auto& c : oracle::jacobiator(s, i, j, k)) CHECK(c.is_zero());
    }
}

TEST_CASE("malformed shapes are constructor errors, not validation failures") {
    CHECK_THROWS_AS(AlgebroidSpec({}, {"X1"}, {"a1", "a2"}, {{}}, {}), std::invalid_argument);
    CHECK_THROWS_AS(AlgebroidSpec({"x"}, {"X1"}, {"a1"}, {{}}, {}), std::invalid_argument);
    AlgebroidSpec::StructureMap st;
    st.emplace(std::make_pair(2u, 1u), std::vector<Scalar>(1, Scalar(0)));
    CHECK_THROWS_AS(AlgebroidSpec({}, {"X1"}, {"a1"}, {{}}, std::move(st)),
                    std::invalid_argument);
}

TEST_CASE("anchor_apply") {
    const AlgebroidSpec tan = example("tangent-r2");
    const Scalar x = Scalar::variable(2, 0);
    // a(Dx)(x^2) = 2x
    CHECK(anchor_apply(tan, tan.frame_section(1), x * x) == Scalar(2, Rational(2)) * x);

    const AlgebroidSpec point = example("heisenberg");
    CHECK(anchor_apply(point, point.frame_section(2), Scalar(0, Rational(4))).is_zero());

    // C-infinity linearity: a(f X)g = f a(X)g
    Rng rng(41);
    for (int trial = 0; trial < 25; ++trial) {
        const Scalar f = rng.scalar(2, 2);
        const Scalar g = rng.scalar(2, 3);
        const MultiVector X = rng.multivector(2, 2, 1, 2);
        CHECK(anchor_apply(tan, f * X, g) == f * anchor_apply(tan, X, g));
    }
    CHECK_THROWS_AS(anchor_apply(tan, mv_basis(tan, {1, 2}), x), std::invalid_argument);
}

TEST_CASE("schouten bracket on generators") {
    const AlgebroidSpec h = example("heisenberg");
    // [e1, e2] = e3
    CHECK(schouten_bracket(h, h.frame_section(1), h.frame_section(2)) == mv_basis(h, {3}));
    // [f, g] = 0
    const MultiVector f = MultiVector::from_scalar(3, Scalar(0, Rational(2)));
    const MultiVector g = MultiVector::from_scalar(3, Scalar(0, Rational(5)));
    CHECK(schouten_bracket(h, f, g).is_zero());
    // [X, f] = a(X)f and [f, X] = -a(X)f
    const AlgebroidSpec tan = example("tangent-r2");
    const Scalar x = Scalar::variable(2, 0);
    const MultiVector fx = MultiVector::from_scalar(2, x * x);
    const MultiVector dx = tan.frame_section(1);
    CHECK(schouten_bracket(tan, dx, fx) ==
          MultiVector::from_scalar(2, Scalar(2, Rational(2)) * x));
    CHECK(schouten_bracket(tan, fx, dx) ==
          MultiVector::from_scalar(2, Scalar(2, Rational(-2)) * x));
}

TEST_CASE("schouten bracket matches the Leibniz axiom on random inputs") {
    // [X, f Y] = (a(X)f) Y + f [X, Y]
    const AlgebroidSpec tan = example("tangent-r2");
    Rng rng(1234);
    for (int trial = 0; trial < 30; ++trial) {
        const MultiVector X = rng.multivector(2, 2, 1, 2);
        const MultiVector Y = rng.multivector(2, 2, 1, 2);
        const Scalar f = rng.scalar(2, 2);
        const MultiVector lhs = schouten_bracket(tan, X, f * Y);
        const MultiVector rhs =
            anchor_apply(tan, X, f) * Y + f * schouten_bracket(tan, X, Y);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("schouten bracket on higher degrees: frozen values") {
    const AlgebroidSpec tan = example("tangent-r2");
    const Scalar x = Scalar::variable(2, 0);
    // [x Dx, Dx /\ Dy] = -(Dx /\ Dy)
    const MultiVector xdx = x * tan.frame_section(1);
    const MultiVector dxdy = mv_basis(tan, {1, 2});
    CHECK(schouten_bracket(tan, xdx, dxdy) == -dxdy);
    CHECK(lie_derivative(tan, xdx, dxdy) == -dxdy);
    // constant-frame Lie derivative vanishes
    CHECK(lie_derivative(tan, tan.frame_section(1), dxdy).is_zero());

    // aff(1): L_e1 (e1 /\ e2) = e1 /\ e2
    const AlgebroidSpec aff = example("aff1");
    const MultiVector e12 = mv_basis(aff, {1, 2});
    CHECK(lie_derivative(aff, aff.frame_section(1), e12) == e12);

    CHECK_THROWS_AS(lie_derivative(tan, dxdy, dxdy), std::invalid_argument);
}

TEST_CASE("schouten bracket agrees with the term-expansion oracle") {
    Rng rng(4242);
    for (const auto& name : kRegistryNames) {
        const AlgebroidSpec s = example(name);
        if (s.rank() == 0) continue;
        for (int trial = 0; trial < 12; ++trial) {
            const std::size_t k = static_cast<std::size_t>(rng.integer(0, s.rank()));
            const MultiVector X = rng.multivector(s.rank(), s.num_vars(), 1, 2);
            const MultiVector u = rng.multivector(s.rank(), s.num_vars(), k, 2);
            CHECK(schouten_bracket(s, X, u) == oracle::lie(s, X, u));
        }
    }
}

TEST_CASE("graded antisymmetry of the bracket") {
    Rng rng(5150);
    for (const auto& name : kRegistryNames) {
        const AlgebroidSpec s = example(name);
        if (s.rank() == 0) continue;
        for (int trial = 0; trial < 10; ++trial) {
            const std::size_t p = static_cast<std::size_t>(rng.integer(0, s.rank()));
            const std::size_t q = static_cast<std::size_t>(rng.integer(0, s.rank()));
            const MultiVector u = rng.multivector(s.rank(), s.num_vars(), p, 2);
            const MultiVector v = rng.multivector(s.rank(), s.num_vars(), q, 2);
            // [u,v] = -(-1)^((p-1)(q-1)) [v,u]
            MultiVector rhs = schouten_bracket(s, v, u);
            if (((p + 1) * (q + 1)) % 2 == 0) rhs = -rhs;
            CHECK(schouten_bracket(s, u, v) == rhs);
        }
    }
}

TEST_CASE("super-Leibniz identity of the bracket") {
    // [a, b /\ c] = [a,b] /\ c + (-1)^((|a|-1)|b|) b /\ [a,c]
    Rng rng(616);
    for (const auto& name : {"heisenberg", "sl2", "aff1", "tangent-r2"}) {
        const AlgebroidSpec s = example(name);
        for (int trial = 0; trial < 12; ++trial) {
            const std::size_t da = static_cast<std::size_t>(rng.integer(0, s.rank()));
            const std::size_t db = static_cast<std::size_t>(rng.integer(0, s.rank()));
            const std::size_t dc = static_cast<std::size_t>(rng.integer(0, s.rank()));
            const MultiVector a = rng.multivector(s.rank(), s.num_vars(), da, 2);
            const MultiVector b = rng.multivector(s.rank(), s.num_vars(), db, 2);
            const MultiVector c = rng.multivector(s.rank(), s.num_vars(), dc, 2);
            MultiVector tail = wedge(b, schouten_bracket(s, a, c));
            if (((da + 1) * db) % 2 == 1) tail = -tail;
            CHECK(schouten_bracket(s, a, wedge(b, c)) ==
                  wedge(schouten_bracket(s, a, b), c) + tail);
        }
    }
}

TEST_CASE("super-Jacobi identity of the bracket") {
    // (-1)^((|a|-1)(|c|-1)) [[a,b],c] + cyclic = 0
    Rng rng(777);
    for (const auto& name : {"heisenberg", "sl2", "aff1", "tangent-r2"}) {
        const AlgebroidSpec s = example(name);
        for (int trial = 0; trial < 10; ++trial) {
            const std::size_t da = static_cast<std::size_t>(rng.integer(0, s.rank()));
            const std::size_t db = static_cast<std::size_t>(rng.integer(0, s.rank()));
            const std::size_t dc = static_cast<std::size_t>(rng.integer(0, s.rank()));
            const MultiVector a = rng.multivector(s.rank(), s.num_vars(), da, 2);
            const MultiVector b = rng.multivector(s.rank(), s.num_vars(), db, 2);
            const MultiVector c = rng.multivector(s.rank(), s.num_vars(), dc, 2);
            auto term = [&](const MultiVector& p, const MultiVector& q, const MultiVector& r,
                            std::size_t dp, std::size_t dr) {
                MultiVector t = schouten_bracket(s, schouten_bracket(s, p, q), r);
                if (((dp + 1) * (dr + 1)) % 2 == 1) t = -t;  // (-1)^((dp-1)(dr-1))
                return t;
            };
            const MultiVector total = term(a, b, c, da, dc) + term(b, c, a, db, da) +
                                      term(c, a, b, dc, db);
            CHECK(total.is_zero());
        }
    }
}

TEST_CASE("differential: frozen values") {
    const AlgebroidSpec h = example("heisenberg");
    // d eps3 = -(eps1 /\ eps2), d eps1 = d eps2 = 0
    CHECK(differential(h, form_basis(h, {3})) == -wedge(form_basis(h, {1}), form_basis(h, {2})));
    CHECK(differential(h, form_basis(h, {1})).is_zero());
    CHECK(differential(h, form_basis(h, {2})).is_zero());

    // tangent model: d(xy) = y dx + x dy
    const AlgebroidSpec tan = example("tangent-r2");
    const Scalar x = Scalar::variable(2, 0);
    const Scalar y = Scalar::variable(2, 1);
    const Form dxy = differential(tan, Form::from_scalar(2, x * y));
    CHECK(dxy == y * form_basis(tan, {1}) + x * form_basis(tan, {2}));

    // abelian with zero anchor kills everything
    const AlgebroidSpec ab = example("abelian-n3");
    for (std::size_t k = 0; k <= 3; ++k)
        for_each_index_set(3, k, [&](const FrameIndexSet& I) {
            CHECK(differential(ab, Form::basis(3, 0, I)).is_zero());
        });
}

TEST_CASE("differential agrees with the tuple-evaluation oracle") {
    Rng rng(909);
    for (const auto& name : kRegistryNames) {
        const AlgebroidSpec s = example(name);
        if (s.rank() == 0) continue;
        for (int trial = 0; trial < 10; ++trial) {
            const std::size_t k = static_cast<std::size_t>(rng.integer(0, s.rank()));
            const Form w = rng.form(s.rank(), s.num_vars(), k, 2);
            const Form dw = differential(s, w);
            if (k + 1 > s.rank()) {
                CHECK(dw.is_zero());
                continue;
            }
            for_each_index_set(s.rank(), k + 1, [&](const FrameIndexSet& K) {
                CHECK(dw.coefficient(K) == oracle::dw_value(s, w, K.indices()));
            });
        }
    }
}

TEST_CASE("differential squares to zero on all frame forms") {
    for (const auto& [name, summary] : example_catalog()) {
        const AlgebroidSpec s = make_example(name).spec;
        for (std::size_t k = 0; k <= s.rank(); ++k)
            for_each_index_set(s.rank(), k, [&](const FrameIndexSet& I) {
                const Form w = Form::basis(s.rank(), s.num_vars(), I);
                CHECK(differential(s, differential(s, w)).is_zero());
            });
    }
}

TEST_CASE("differential of a function pairs with the anchor") {
    // <df, X> = a(X)f
    const AlgebroidSpec tan = example("tangent-r2");
    Rng rng(100);
    for (int trial = 0; trial < 20; ++trial) {
        const Scalar f = rng.scalar(2, 3);
        const MultiVector X = rng.multivector(2, 2, 1, 2);
        const Form df = differential(tan, Form::from_scalar(2, f));
        CHECK(pairing(df, X) == anchor_apply(tan, X, f));
    }
}

TEST_CASE("degenerate ranks work end to end") {
    // n = 0: only scalars
    const AlgebroidSpec zero({}, {}, {}, {}, {});
    CHECK(zero.is_valid());
    const MultiVector f = MultiVector::from_scalar(0, Scalar(0, Rational(3)));
    CHECK(schouten_bracket(zero, f, f).is_zero());
    CHECK(differential(zero, Form::from_scalar(0, Scalar(0, Rational(1)))).is_zero());

    // n = 1 over one base variable, anchor = d/dx
    const std::vector<std::vector<Scalar>> anchor = {{Scalar(1, Rational(1))}};
    const AlgebroidSpec line({"x"}, {"X"}, {"al"}, anchor, {});
    CHECK(line.is_valid());
    const Scalar x = Scalar::variable(1, 0);
    const MultiVector X = line.frame_section(1);
    CHECK(schouten_bracket(line, X, x * X) == x.derivative(0) * X);
    const Form dx2 = differential(line, Form::from_scalar(1, x * x));
    CHECK(dx2 == (Scalar(1, Rational(2)) * x) * Form::basis(1, 1, FrameIndexSet{1}));
    CHECK(differential(line, differential(line, Form::from_scalar(1, x * x * x))).is_zero());
}
