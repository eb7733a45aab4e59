// Command-line front end: loads an algebroid (spec file or built-in example),
// parses expression arguments, dispatches to the engine, and renders reports.
//
// Exit codes: 0 success / identity holds, 1 identity violation,
//             2 usage or parse error, 3 invalid spec.

#include "gerber/gerber.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::ordered_json;
using namespace gerber;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInvalidSpec = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string spec_path;
    std::string example;
    std::vector<std::string> exprs;
    std::string theta_csv;
    bool json = false;
    std::uint64_t seed = 0;
    std::string direction = "homology";
};

long max_degree_from_env() {
    const char* raw = std::getenv("GERBER_MAX_DEGREE");
    if (raw == nullptr || *raw == '\0') return 3;
    char* end = nullptr;
    const long v = std::strtol(raw, &end, 10);
    if (end == raw || *end != '\0' || v < 0)
        throw UsageError("GERBER_MAX_DEGREE must be a non-negative integer");
    return v;
}

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    std::string piece;
    std::istringstream in(text);
    while (std::getline(in, piece, ',')) out.push_back(piece);
    return out;
}

LoadedSpec load_input(const Options& o) {
    if (!o.spec_path.empty() && !o.example.empty())
        throw UsageError("pass either --spec or --example, not both");
    LoadedSpec loaded = [&] {
        if (!o.spec_path.empty()) return load_spec_file(o.spec_path);
        if (!o.example.empty()) {
            RegistryEntry entry = make_example(o.example);
            return LoadedSpec{std::move(entry.spec), std::move(entry.theta)};
        }
        throw UsageError("an algebroid is required: pass --spec <file> or --example <name>");
    }();
    if (!o.theta_csv.empty()) {
        const std::vector<std::string> pieces = split_csv(o.theta_csv);
        if (pieces.size() != loaded.spec.rank())
            throw UsageError("--theta needs exactly one polynomial per frame section");
        loaded.theta.clear();
        for (const auto& p : pieces) loaded.theta.push_back(parse_poly(p, loaded.spec.base_vars()));
    }
    return loaded;
}

void require_arity(const Options& o, std::size_t count, const char* what) {
    if (o.exprs.size() != count)
        throw UsageError(std::string(what) + " (got " + std::to_string(o.exprs.size()) +
                         " --expr arguments)");
}

void emit(const Options& o, const ordered_json& doc, const std::string& text) {
    if (o.json) std::cout << doc.dump(2) << "\n";
    else std::cout << text;
}

ordered_json dims_json(const std::vector<std::size_t>& dims) {
    ordered_json arr = ordered_json::array();
    for (std::size_t d : dims) arr.push_back(d);
    return arr;
}

std::string dims_text(const std::vector<std::size_t>& dims) {
    std::string out = "[";
    for (std::size_t i = 0; i < dims.size(); ++i)
        out += (i ? ", " : "") + std::to_string(dims[i]);
    return out + "]";
}

// ---------------------------------------------------------------------------
// verbs
// ---------------------------------------------------------------------------

int run_validate(const Options& o) {
    const LoadedSpec loaded = load_input(o);
    const ValidationReport& report = loaded.spec.validation();
    ordered_json doc;
    doc["ok"] = report.ok;
    ordered_json violations = ordered_json::array();
    std::string text;
    if (report.ok) {
        text = "ok\n";
    } else {
        for (const auto& v : report.violations) {
            ordered_json row;
            row["identity"] = v.identity;
            row["where"] = v.where;
            row["residual"] = render(v.residual, loaded.spec.base_vars());
            violations.push_back(std::move(row));
            std::string where;
            for (std::size_t i = 0; i < v.where.size(); ++i)
                where += (i ? ", " : "") + std::to_string(v.where[i]);
            text += "violation: " + v.identity + " at (" + where +
                    "): " + render(v.residual, loaded.spec.base_vars()) + "\n";
        }
    }
    doc["violations"] = std::move(violations);
    emit(o, doc, text);
    return report.ok ? kExitOk : kExitInvalidSpec;
}

int run_bracket(const Options& o) {
    const LoadedSpec loaded = load_input(o);
    require_arity(o, 2, "bracket takes two multivector expressions");
    const MultiVector u = parse_multivector(o.exprs[0], loaded.spec);
    const MultiVector v = parse_multivector(o.exprs[1], loaded.spec);
    const MultiVector result = schouten_bracket(loaded.spec, u, v);
    const std::string text = render(result, loaded.spec);
    emit(o, ordered_json{{"result", text}}, text + "\n");
    return kExitOk;
}

int run_diff(const Options& o) {
    const LoadedSpec loaded = load_input(o);
    require_arity(o, 1, "diff takes one form expression");
    const Form w = parse_form(o.exprs[0], loaded.spec);
    const std::string text = render(differential(loaded.spec, w), loaded.spec);
    emit(o, ordered_json{{"result", text}}, text + "\n");
    return kExitOk;
}

int run_extend(const Options& o) {
    const LoadedSpec loaded = load_input(o);
    require_arity(o, 1, "extend takes one multivector expression");
    const GeneratingOperator op(TopConnection(loaded.spec, loaded.theta));
    const MultiVector u = parse_multivector(o.exprs[0], loaded.spec);
    const std::string text = render(extend(op, u), loaded.spec);
    emit(o, ordered_json{{"result", text}}, text + "\n");
    return kExitOk;
}

int run_star(const Options& o) {
    const LoadedSpec loaded = load_input(o);
    require_arity(o, 1, "star takes one form expression");
    const Form w = parse_form(o.exprs[0], loaded.spec);
    const std::string text = render(star(StarOperator(loaded.spec), w), loaded.spec);
    emit(o, ordered_json{{"result", text}}, text + "\n");
    return kExitOk;
}

int run_curvature(const Options& o) {
    const LoadedSpec loaded = load_input(o);
    require_arity(o, 2, "curvature takes two degree-1 expressions");
    const TopConnection conn(loaded.spec, loaded.theta);
    const MultiVector X = parse_multivector(o.exprs[0], loaded.spec);
    const MultiVector Y = parse_multivector(o.exprs[1], loaded.spec);
    const std::string text = render(curvature(conn, X, Y), loaded.spec.base_vars());
    emit(o, ordered_json{{"result", text}}, text + "\n");
    return kExitOk;
}

// Shared report path for the check-* verbs: either an explicit residual from
// --expr arguments, or the first failure found by a seeded sweep.
int report_check(const Options& o, const AlgebroidSpec& spec, bool pass,
                 const std::string& witness, const MultiVector& residual) {
    ordered_json doc;
    doc["pass"] = pass;
    std::string text;
    if (pass) {
        text = "ok\n";
    } else {
        doc["witness"] = witness;
        doc["residual"] = render(residual, spec);
        text = "witness: " + witness + "\nresidual: " + render(residual, spec) + "\n";
    }
    emit(o, doc, text);
    return pass ? kExitOk : kExitViolation;
}

// Enumerates deterministic + seeded-random homogeneous test elements.
std::vector<MultiVector> sweep_elements(const AlgebroidSpec& s, Rng& rng, long max_degree,
                                        int random_per_degree) {
    std::vector<MultiVector> out;
    for (std::size_t k = 0; k <= s.rank(); ++k)
        for_each_index_set(s.rank(), k, [&](const FrameIndexSet& I) {
            out.push_back(MultiVector::basis(s.rank(), s.num_vars(), I));
        });
    for (std::size_t k = 0; k <= s.rank(); ++k)
        for (int t = 0; t < random_per_degree; ++t)
            out.push_back(rng.multivector(s.rank(), s.num_vars(), k, max_degree));
    return out;
}

int run_check_generator(const Options& o) {
    const LoadedSpec loaded = load_input(o);
    const GeneratingOperator op(TopConnection(loaded.spec, loaded.theta));
    if (!o.exprs.empty()) {
        require_arity(o, 2, "check-generator takes two expressions (or none for a sweep)");
        const MultiVector a = parse_multivector(o.exprs[0], loaded.spec);
        const MultiVector b = parse_multivector(o.exprs[1], loaded.spec);
        const MultiVector res = generator_check(op, a, b);
        return report_check(o, loaded.spec, res.is_zero(), "given expressions", res);
    }
    Rng rng(o.seed);
    const auto elements = sweep_elements(loaded.spec, rng, max_degree_from_env(), 2);
    for (std::size_t i = 0; i < elements.size(); ++i)
        for (std::size_t j = 0; j < elements.size(); ++j) {
            const MultiVector res = generator_check(op, elements[i], elements[j]);
            if (!res.is_zero())
                return report_check(o, loaded.spec, false,
                                    "pair (" + render(elements[i], loaded.spec) + ", " +
                                        render(elements[j], loaded.spec) + ")",
                                    res);
        }
    return report_check(o, loaded.spec, true, "", loaded.spec.zero_mv());
}

int run_check_derivation(const Options& o) {
    const LoadedSpec loaded = load_input(o);
    const GeneratingOperator op(TopConnection(loaded.spec, loaded.theta));
    if (!o.exprs.empty()) {
        require_arity(o, 2, "check-derivation takes two expressions (or none for a sweep)");
        const MultiVector u = parse_multivector(o.exprs[0], loaded.spec);
        const MultiVector v = parse_multivector(o.exprs[1], loaded.spec);
        const MultiVector res = derivation_check(op, u, v);
        return report_check(o, loaded.spec, res.is_zero(), "given expressions", res);
    }
    Rng rng(o.seed);
    const auto elements = sweep_elements(loaded.spec, rng, max_degree_from_env(), 2);
    for (std::size_t i = 0; i < elements.size(); ++i)
        for (std::size_t j = 0; j < elements.size(); ++j) {
            const MultiVector res = derivation_check(op, elements[i], elements[j]);
            if (!res.is_zero())
                return report_check(o, loaded.spec, false,
                                    "pair (" + render(elements[i], loaded.spec) + ", " +
                                        render(elements[j], loaded.spec) + ")",
                                    res);
        }
    return report_check(o, loaded.spec, true, "", loaded.spec.zero_mv());
}

int run_check_curvature_relation(const Options& o) {
    const LoadedSpec loaded = load_input(o);
    const TopConnection conn(loaded.spec, loaded.theta);
    const AlgebroidSpec& s = conn.spec();
    if (!o.exprs.empty()) {
        require_arity(o, 2,
                      "check-curvature-relation takes two expressions (or none for a sweep)");
        const MultiVector X = parse_multivector(o.exprs[0], s);
        const MultiVector Y = parse_multivector(o.exprs[1], s);
        const MultiVector res = curvature_vs_dsquared(conn, X, Y);
        return report_check(o, s, res.is_zero(), "given expressions", res);
    }
    Rng rng(o.seed);
    const long max_degree = max_degree_from_env();
    std::vector<MultiVector> sections;
    for (std::uint32_t i = 1; i <= s.rank(); ++i) sections.push_back(s.frame_section(i));
    for (int t = 0; t < 6; ++t)
        sections.push_back(rng.multivector(s.rank(), s.num_vars(), 1, max_degree));
    for (const auto& X : sections)
        for (const auto& Y : sections) {
            const MultiVector res = curvature_vs_dsquared(conn, X, Y);
            if (!res.is_zero())
                return report_check(o, s, false,
                                    "pair (" + render(X, s) + ", " + render(Y, s) + ")", res);
        }
    return report_check(o, s, true, "", s.zero_mv());
}

int run_check_recovery(const Options& o) {
    const LoadedSpec loaded = load_input(o);
    const GeneratingOperator op(TopConnection(loaded.spec, loaded.theta));
    const AlgebroidSpec& s = op.spec();
    if (!o.exprs.empty()) {
        if (o.exprs.size() > 2)
            throw UsageError("check-recovery takes a direction and an optional top section");
        const MultiVector X = parse_multivector(o.exprs[0], s);
        const MultiVector L =
            o.exprs.size() == 2 ? parse_multivector(o.exprs[1], s) : s.top_section();
        const MultiVector res = connection_recovery(op, X, L);
        return report_check(o, s, res.is_zero(), "given expressions", res);
    }
    Rng rng(o.seed);
    const long max_degree = max_degree_from_env();
    std::vector<MultiVector> sections;
    for (std::uint32_t i = 1; i <= s.rank(); ++i) sections.push_back(s.frame_section(i));
    for (int t = 0; t < 6; ++t)
        sections.push_back(rng.multivector(s.rank(), s.num_vars(), 1, max_degree));
    std::vector<MultiVector> tops = {s.top_section()};
    for (int t = 0; t < 4; ++t)
        tops.push_back(rng.scalar(s.num_vars(), max_degree) * s.top_section());
    for (const auto& X : sections)
        for (const auto& L : tops) {
            const MultiVector res = connection_recovery(op, X, L);
            if (!res.is_zero())
                return report_check(
                    o, s, false, "pair (" + render(X, s) + ", " + render(L, s) + ")", res);
        }
    return report_check(o, s, true, "", s.zero_mv());
}

int run_check_dw_identity(const Options& o) {
    const LoadedSpec loaded = load_input(o);
    const GeneratingOperator op(TopConnection(loaded.spec, loaded.theta));
    const AlgebroidSpec& s = op.spec();
    if (!o.exprs.empty()) {
        require_arity(o, 2, "check-dw-identity takes a form and a multivector (or none)");
        const Form w = parse_form(o.exprs[0], s);
        const MultiVector u = parse_multivector(o.exprs[1], s);
        const MultiVector res = dw_contraction_identity(op, w, u);
        return report_check(o, s, res.is_zero(), "given expressions", res);
    }
    Rng rng(o.seed);
    const long max_degree = max_degree_from_env();
    for (std::size_t dw = 0; dw < s.rank(); ++dw)
        for (std::size_t du = dw + 1; du <= s.rank(); ++du) {
            std::vector<Form> forms;
            for_each_index_set(s.rank(), dw, [&](const FrameIndexSet& I) {
                forms.push_back(Form::basis(s.rank(), s.num_vars(), I));
            });
            forms.push_back(rng.form(s.rank(), s.num_vars(), dw, max_degree));
            std::vector<MultiVector> fields;
            for_each_index_set(s.rank(), du, [&](const FrameIndexSet& I) {
                fields.push_back(MultiVector::basis(s.rank(), s.num_vars(), I));
            });
            fields.push_back(rng.multivector(s.rank(), s.num_vars(), du, max_degree));
            for (const auto& w : forms)
                for (const auto& u : fields) {
                    const MultiVector res = dw_contraction_identity(op, w, u);
                    if (!res.is_zero())
                        return report_check(o, s, false,
                                            "pair (" + render(w, s) + ", " + render(u, s) + ")",
                                            res);
                }
        }
    return report_check(o, s, true, "", s.zero_mv());
}

int run_homology(const Options& o) {
    const LoadedSpec loaded = load_input(o);
    if (o.direction != "homology" && o.direction != "cohomology")
        throw UsageError("--direction must be homology or cohomology");
    const Direction dir =
        o.direction == "homology" ? Direction::homology : Direction::cohomology;
    const GeneratingOperator op(TopConnection(loaded.spec, loaded.theta));
    const BettiTable table = betti(op, dir);
    const ChainComplexMatrices cm = chain_matrices(op, dir);
    ordered_json doc;
    doc["direction"] = direction_name(dir);
    doc["dims"] = dims_json(table.dims);
    ordered_json mats = ordered_json::object();
    for (const auto& [k, m] : cm.matrices) {
        ordered_json rows = ordered_json::array();
        for (std::size_t r = 0; r < m.rows(); ++r) {
            ordered_json row = ordered_json::array();
            for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m.at(r, c).str());
            rows.push_back(std::move(row));
        }
        mats[std::to_string(k)] = std::move(rows);
    }
    doc["matrices"] = std::move(mats);
    const std::string text =
        "direction: " + direction_name(dir) + "\ndims: " + dims_text(table.dims) + "\n";
    emit(o, doc, text);
    return kExitOk;
}

int run_duality(const Options& o) {
    const LoadedSpec loaded = load_input(o);
    const DualityReport report = duality_check(loaded.spec);
    ordered_json doc;
    doc["pass"] = report.pass;
    doc["homology"] = dims_json(report.homology);
    doc["cohomology"] = dims_json(report.cohomology);
    ordered_json failures = ordered_json::array();
    for (const auto& f : report.witness_failures) failures.push_back(f);
    doc["witness_failures"] = std::move(failures);
    std::string text = std::string("pass: ") + (report.pass ? "true" : "false") + "\n";
    text += "homology: " + dims_text(report.homology) + "\n";
    text += "cohomology: " + dims_text(report.cohomology) + "\n";
    for (const auto& f : report.witness_failures) text += "witness failure: " + f + "\n";
    emit(o, doc, text);
    return report.pass ? kExitOk : kExitViolation;
}

int run_examples(const Options& o) {
    ordered_json doc = ordered_json::array();
    std::string text;
    for (const auto& [name, summary] : example_catalog()) {
        ordered_json row;
        row["name"] = name;
        row["summary"] = summary;
        doc.push_back(std::move(row));
        text += name + "  " + summary + "\n";
    }
    emit(o, doc, text);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Gerstenhaber/BV calculator for Lie algebroids over polynomial bases"};
    app.require_subcommand(1);

    Options o;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--spec", o.spec_path, "path to a spec JSON file");
        sub->add_option("--example", o.example, "name of a built-in example algebroid");
        sub->add_option("--expr", o.exprs,
                        "expression argument (repeatable; order is significant)");
        sub->add_option("--theta", o.theta_csv,
                        "comma-separated connection coefficients, one per frame section");
        sub->add_flag("--json", o.json, "emit a JSON report");
        sub->add_option("--seed", o.seed, "seed for the randomized part of check sweeps");
        return sub;
    };

    struct Verb {
        const char* name;
        const char* help;
        int (*run)(const Options&);
    };
    const std::vector<Verb> verbs = {
        {"validate", "check the Jacobi and anchor-morphism conditions", run_validate},
        {"bracket", "Schouten bracket of two multivector expressions", run_bracket},
        {"diff", "coboundary of a form expression", run_diff},
        {"extend", "apply the degree -1 operator of the loaded connection", run_extend},
        {"check-generator", "verify the operator generates the bracket", run_check_generator},
        {"check-derivation", "verify the operator is a bracket derivation",
         run_check_derivation},
        {"curvature", "curvature coefficient of the connection on two sections",
         run_curvature},
        {"check-curvature-relation", "verify curvature against the squared operator",
         run_check_curvature_relation},
        {"check-recovery", "verify the connection is recovered from the operator",
         run_check_recovery},
        {"check-dw-identity", "verify the coboundary/contraction identity",
         run_check_dw_identity},
        {"star", "contract a form into the frame top section", run_star},
        {"homology", "Betti numbers and boundary matrices over a point", run_homology},
        {"duality", "match homology against cohomology in complementary degrees",
         run_duality},
        {"examples", "list the built-in example algebroids", run_examples},
    };

    std::optional<int> code;
    for (const auto& verb : verbs) {
        CLI::App* sub = add_common(app.add_subcommand(verb.name, verb.help));
        if (std::string(verb.name) == "homology")
            sub->add_option("--direction", o.direction, "homology or cohomology")
                ->default_str("homology");
        auto run = verb.run;
        sub->callback([&code, run, &o] { code = run(o); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const UnknownExampleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const SpecFileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidSpec;
    } catch (const InvalidSpecError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidSpec;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return code.value_or(kExitOk);
}
