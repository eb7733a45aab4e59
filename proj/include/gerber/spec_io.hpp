#pragma once

#include "gerber/algebroid.hpp"
#include "gerber/text.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gerber {

class SpecFileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An algebroid spec plus the connection data that may ride along in the
/// same file ("connection": {"theta": [...]}; absent means theta = 0).
struct LoadedSpec {
    AlgebroidSpec spec;
    std::vector<Scalar> theta;
};

namespace detail {

inline const nlohmann::json& require_field(const nlohmann::json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end())
        throw SpecFileError(std::string("spec file: missing required field '") + name + "'");
    return *it;
}

inline std::vector<std::string> string_list(const nlohmann::json& j, const char* name) {
    if (!j.is_array()) throw SpecFileError(std::string("spec file: '") + name + "' must be an array of strings");
    std::vector<std::string> out;
    for (const auto& e : j) {
        if (!e.is_string())
            throw SpecFileError(std::string("spec file: '") + name + "' must be an array of strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

inline Scalar poly_field(const nlohmann::json& j, const std::vector<std::string>& vars,
                         const std::string& where) {
    if (!j.is_string())
        throw SpecFileError("spec file: " + where + " must be a polynomial string");
    try {
        return parse_poly(j.get<std::string>(), vars);
    } catch (const ParseError& e) {
        throw SpecFileError("spec file: " + where + ": " + e.what());
    }
}

inline bool valid_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

}  // namespace detail

inline LoadedSpec spec_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw SpecFileError("spec file: top level must be a JSON object");

    const auto& version = detail::require_field(j, "version");
    if (!version.is_number_integer() || version.get<long>() != 1)
        throw SpecFileError("spec file: unsupported version (expected 1)");

    const auto& rank_field = detail::require_field(j, "rank");
    if (!rank_field.is_number_integer() || rank_field.get<long>() < 0)
        throw SpecFileError("spec file: 'rank' must be a non-negative integer");
    const std::uint32_t n = rank_field.get<std::uint32_t>();

    std::vector<std::string> base_vars;
    if (j.contains("base_vars")) base_vars = detail::string_list(j["base_vars"], "base_vars");
    const std::size_t m = base_vars.size();

    std::vector<std::string> frame = detail::string_list(detail::require_field(j, "frame"), "frame");
    std::vector<std::string> coframe =
        detail::string_list(detail::require_field(j, "coframe"), "coframe");
    if (frame.size() != n) throw SpecFileError("spec file: 'frame' must list exactly rank names");
    if (coframe.size() != n)
        throw SpecFileError("spec file: 'coframe' must list exactly rank names");

    std::set<std::string> seen;
    for (const auto* list : {&base_vars, &frame, &coframe}) {
        for (const auto& name : *list) {
            if (!detail::valid_identifier(name))
                throw SpecFileError("spec file: '" + name + "' is not a valid identifier");
            if (!seen.insert(name).second)
                throw SpecFileError("spec file: duplicate symbol name '" + name + "'");
        }
    }

    std::vector<std::vector<Scalar>> anchor(n, std::vector<Scalar>(m, Scalar(m)));
    if (j.contains("anchor")) {
        const auto& a = j["anchor"];
        if (!a.is_array() || a.size() != n)
            throw SpecFileError("spec file: 'anchor' must have one row per frame section");
        for (std::uint32_t i = 0; i < n; ++i) {
            if (!a[i].is_array() || a[i].size() != m)
                throw SpecFileError("spec file: anchor rows must have one entry per base variable");
            for (std::size_t mu = 0; mu < m; ++mu)
                anchor[i][mu] = detail::poly_field(
                    a[i][mu], base_vars,
                    "anchor[" + std::to_string(i) + "][" + std::to_string(mu) + "]");
        }
    }

    AlgebroidSpec::StructureMap structure;
    if (j.contains("structure")) {
        const auto& st = j["structure"];
        if (!st.is_object())
            throw SpecFileError("spec file: 'structure' must be an object keyed by \"i,j\"");
        for (auto it = st.begin(); it != st.end(); ++it) {
            const std::string key = it.key();
            const auto comma = key.find(',');
            std::uint32_t i = 0, jj = 0;
            try {
                if (comma == std::string::npos) throw std::invalid_argument(key);
                i = static_cast<std::uint32_t>(std::stoul(key.substr(0, comma)));
                jj = static_cast<std::uint32_t>(std::stoul(key.substr(comma + 1)));
            } catch (const std::exception&) {
                throw SpecFileError("spec file: structure key '" + key + "' is not of the form \"i,j\"");
            }
            if (i == 0 || i >= jj || jj > n)
                throw SpecFileError("spec file: structure key '" + key +
                                    "' must satisfy 1 <= i < j <= rank");
            if (!it.value().is_array() || it.value().size() != n)
                throw SpecFileError("spec file: structure entry '" + key +
                                    "' must list one coefficient per frame section");
            std::vector<Scalar> coeffs;
            for (std::uint32_t k = 0; k < n; ++k)
                coeffs.push_back(detail::poly_field(it.value()[k], base_vars,
                                                    "structure[\"" + key + "\"][" +
                                                        std::to_string(k) + "]"));
            structure.emplace(std::make_pair(i, jj), std::move(coeffs));
        }
    }

    std::vector<Scalar> theta(n, Scalar(m));
    if (j.contains("connection")) {
        const auto& conn = j["connection"];
        if (!conn.is_object() || !conn.contains("theta"))
            throw SpecFileError("spec file: 'connection' must be an object with a 'theta' array");
        const auto& th = conn["theta"];
        if (!th.is_array() || th.size() != n)
            throw SpecFileError("spec file: 'theta' must list one polynomial per frame section");
        for (std::uint32_t i = 0; i < n; ++i)
            theta[i] = detail::poly_field(th[i], base_vars, "theta[" + std::to_string(i) + "]");
    }

    try {
        AlgebroidSpec spec(std::move(base_vars), std::move(frame), std::move(coframe),
                           std::move(anchor), std::move(structure));
        return LoadedSpec{std::move(spec), std::move(theta)};
    } catch (const std::invalid_argument& e) {
        throw SpecFileError(std::string("spec file: ") + e.what());
    }
}

inline LoadedSpec load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecFileError("cannot open spec file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw SpecFileError("spec file '" + path + "': " + e.what());
    }
    return spec_from_json(j);
}

}  // namespace gerber
