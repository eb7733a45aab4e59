#pragma once

#include "gerber/algebroid.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gerber {

class UnknownExampleError : public std::runtime_error {
public:
    explicit UnknownExampleError(const std::string& name)
        : std::runtime_error("unknown example '" + name + "' (see the `examples` command)") {}
};

struct RegistryEntry {
    std::string name;
    std::string summary;
    AlgebroidSpec spec;
    std::vector<Scalar> theta;
};

namespace detail {

inline AlgebroidSpec point_algebra(std::vector<std::string> frame, std::vector<std::string> coframe,
                                   AlgebroidSpec::StructureMap structure) {
    const std::size_t n = frame.size();
    return AlgebroidSpec({}, std::move(frame), std::move(coframe),
                         std::vector<std::vector<Scalar>>(n), std::move(structure));
}

/// Structure coefficients over a point from integer data.
inline std::vector<Scalar> consts(std::initializer_list<int> values) {
    std::vector<Scalar> out;
    for (int v : values) out.emplace_back(0, Rational(v));
    return out;
}

}  // namespace detail

inline const std::vector<std::pair<std::string, std::string>>& example_catalog() {
    static const std::vector<std::pair<std::string, std::string>> catalog = {
        {"abelian-n2", "rank-2 abelian Lie algebra over a point"},
        {"abelian-n3", "rank-3 abelian Lie algebra over a point"},
        {"heisenberg", "Heisenberg Lie algebra: [e1,e2] = e3"},
        {"sl2", "sl(2): [e1,e2] = 2 e2, [e1,e3] = -2 e3, [e2,e3] = e1"},
        {"aff1", "aff(1): [e1,e2] = e2 (non-unimodular)"},
        {"tangent-r2", "tangent algebroid of the plane, anchor = identity"},
        {"tangent-r2-curved", "tangent algebroid of the plane with theta = (y, 0)"},
    };
    return catalog;
}

inline RegistryEntry make_example(const std::string& name) {
    if (name == "abelian-n2") {
        AlgebroidSpec spec = detail::point_algebra({"X1", "X2"}, {"a1", "a2"}, {});
        return {name, example_catalog()[0].second, std::move(spec),
                std::vector<Scalar>(2, Scalar(0))};
    }
    if (name == "abelian-n3") {
        AlgebroidSpec spec = detail::point_algebra({"X1", "X2", "X3"}, {"a1", "a2", "a3"}, {});
        return {name, example_catalog()[1].second, std::move(spec),
                std::vector<Scalar>(3, Scalar(0))};
    }
    if (name == "heisenberg") {
        AlgebroidSpec::StructureMap st;
        st.emplace(std::make_pair(1u, 2u), detail::consts({0, 0, 1}));
        AlgebroidSpec spec =
            detail::point_algebra({"e1", "e2", "e3"}, {"eps1", "eps2", "eps3"}, std::move(st));
        return {name, example_catalog()[2].second, std::move(spec),
                std::vector<Scalar>(3, Scalar(0))};
    }
    if (name == "sl2") {
        AlgebroidSpec::StructureMap st;
        st.emplace(std::make_pair(1u, 2u), detail::consts({0, 2, 0}));
        st.emplace(std::make_pair(1u, 3u), detail::consts({0, 0, -2}));
        st.emplace(std::make_pair(2u, 3u), detail::consts({1, 0, 0}));
        AlgebroidSpec spec =
            detail::point_algebra({"e1", "e2", "e3"}, {"eps1", "eps2", "eps3"}, std::move(st));
        return {name, example_catalog()[3].second, std::move(spec),
                std::vector<Scalar>(3, Scalar(0))};
    }
    if (name == "aff1") {
        AlgebroidSpec::StructureMap st;
        st.emplace(std::make_pair(1u, 2u), detail::consts({0, 1}));
        AlgebroidSpec spec = detail::point_algebra({"e1", "e2"}, {"eps1", "eps2"}, std::move(st));
        return {name, example_catalog()[4].second, std::move(spec),
                std::vector<Scalar>(2, Scalar(0))};
    }
    if (name == "tangent-r2" || name == "tangent-r2-curved") {
        const Scalar zero(2);
        const Scalar one(2, Rational(1));
        std::vector<std::vector<Scalar>> anchor = {{one, zero}, {zero, one}};
        AlgebroidSpec spec({"x", "y"}, {"Dx", "Dy"}, {"dx", "dy"}, std::move(anchor), {});
        std::vector<Scalar> theta(2, Scalar(2));
        std::string summary = example_catalog()[5].second;
        if (name == "tangent-r2-curved") {
            theta[0] = Scalar::variable(2, 1);  // theta = (y, 0)
            summary = example_catalog()[6].second;
        }
        return {name, std::move(summary), std::move(spec), std::move(theta)};
    }
    throw UnknownExampleError(name);
}

}  // namespace gerber
