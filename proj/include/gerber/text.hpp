#pragma once

#include "gerber/algebroid.hpp"

#include <cctype>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gerber {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t line, std::size_t col)
        : std::runtime_error(msg + " at line " + std::to_string(line) + ", column " +
                             std::to_string(col)),
          line_(line),
          col_(col) {}

    std::size_t line() const { return line_; }
    std::size_t col() const { return col_; }

private:
    std::size_t line_;
    std::size_t col_;
};

namespace detail {

enum class Tok { End, Ident, Number, Plus, Minus, Star, Caret, Slash, LParen, RParen, Wedge };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::size_t line = 1;
    std::size_t col = 1;
};

inline const char* token_name(Tok t) {
    switch (t) {
        case Tok::End: return "end of input";
        case Tok::Ident: return "identifier";
        case Tok::Number: return "number";
        case Tok::Plus: return "'+'";
        case Tok::Minus: return "'-'";
        case Tok::Star: return "'*'";
        case Tok::Caret: return "'^'";
        case Tok::Slash: return "'/'";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::Wedge: return "'/\\'";
    }
    return "?";
}

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return cur_; }

    Token next() {
        Token t = cur_;
        advance();
        return t;
    }

    Token expect(Tok kind, const char* what) {
        if (cur_.kind != kind)
            throw ParseError(std::string("expected ") + what + ", found " +
                                 describe(cur_),
                             cur_.line, cur_.col);
        return next();
    }

    static std::string describe(const Token& t) {
        if (t.kind == Tok::Ident || t.kind == Tok::Number) return "'" + t.text + "'";
        return token_name(t.kind);
    }

private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
            bump();
        cur_ = Token{Tok::End, "", line_, col_};
        if (pos_ >= src_.size()) return;
        const char c = src_[pos_];
        cur_.line = line_;
        cur_.col = col_;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string text;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                text += src_[pos_];
                bump();
            }
            cur_.kind = Tok::Ident;
            cur_.text = std::move(text);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string text;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                text += src_[pos_];
                bump();
            }
            cur_.kind = Tok::Number;
            cur_.text = std::move(text);
            return;
        }
        bump();
        switch (c) {
            case '+': cur_.kind = Tok::Plus; return;
            case '-': cur_.kind = Tok::Minus; return;
            case '*': cur_.kind = Tok::Star; return;
            case '^': cur_.kind = Tok::Caret; return;
            case '(': cur_.kind = Tok::LParen; return;
            case ')': cur_.kind = Tok::RParen; return;
            case '/':
                if (pos_ < src_.size() && src_[pos_] == '\\') {
                    bump();
                    cur_.kind = Tok::Wedge;
                } else {
                    cur_.kind = Tok::Slash;
                }
                return;
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", cur_.line,
                                 cur_.col);
        }
    }

    void bump() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
    Token cur_;
};

inline BigInt parse_bigint(const std::string& digits) { return BigInt(digits); }

/// One additive term of an expression: sign, coefficient polynomial, and the
/// (unresolved) frame-symbol tokens.
struct ExprTerm {
    int sign = 1;
    Scalar coeff;
    std::vector<Token> factors;
};

class PolyParser {
public:
    PolyParser(Lexer& lex, const std::vector<std::string>& var_names) : lex_(lex) {
        for (std::size_t i = 0; i < var_names.size(); ++i) vars_[var_names[i]] = i;
    }

    /// poly := term (('+'|'-') term)*, with an optional sign before the first
    /// term so canonical output like "-x + 1" reads back.
    Scalar parse() {
        Scalar out(vars_.size());
        int sign = 1;
        if (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
            sign = lex_.next().kind == Tok::Minus ? -1 : 1;
        }
        out += term(sign);
        while (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
            sign = lex_.next().kind == Tok::Minus ? -1 : 1;
            out += term(sign);
        }
        return out;
    }

private:
    Scalar term(int sign) {
        Rational coeff(1);
        Monomial mono(vars_.size(), 0);
        bool any = false;
        if (lex_.peek().kind == Tok::Number) {
            const BigInt num = parse_bigint(lex_.next().text);
            BigInt den = 1;
            if (lex_.peek().kind == Tok::Slash) {
                lex_.next();
                const Token d = lex_.expect(Tok::Number, "a positive denominator");
                den = parse_bigint(d.text);
                if (den == 0) throw ParseError("denominator must be positive", d.line, d.col);
            }
            coeff = Rational(num, den);
            any = true;
        }
        while (true) {
            if (lex_.peek().kind == Tok::Star) {
                lex_.next();
                applyVar(lex_.expect(Tok::Ident, "a variable name"), mono);
                any = true;
                continue;
            }
            if (lex_.peek().kind == Tok::Ident) {
                applyVar(lex_.next(), mono);
                any = true;
                continue;
            }
            break;
        }
        if (!any)
            throw ParseError("expected a polynomial term, found " + Lexer::describe(lex_.peek()),
                             lex_.peek().line, lex_.peek().col);
        Scalar out(vars_.size());
        if (sign < 0) coeff = -coeff;
        out.add_term(mono, coeff);
        return out;
    }

    void applyVar(const Token& name, Monomial& mono) {
        auto it = vars_.find(name.text);
        if (it == vars_.end())
            throw ParseError("unknown identifier '" + name.text + "'", name.line, name.col);
        std::uint32_t exp = 1;
        if (lex_.peek().kind == Tok::Caret) {
            lex_.next();
            const Token e = lex_.expect(Tok::Number, "an exponent");
            exp = static_cast<std::uint32_t>(std::stoul(e.text));
        }
        mono[it->second] += exp;
    }

    Lexer& lex_;
    std::map<std::string, std::size_t> vars_;
};

}  // namespace detail

/// Parses a standalone polynomial over the given variable names.
inline Scalar parse_poly(const std::string& text, const std::vector<std::string>& var_names) {
    detail::Lexer lex(text);
    if (lex.peek().kind == detail::Tok::End) throw ParseError("empty polynomial", 1, 1);
    detail::PolyParser parser(lex, var_names);
    Scalar out = parser.parse();
    if (lex.peek().kind != detail::Tok::End)
        throw ParseError("unexpected " + detail::Lexer::describe(lex.peek()) +
                             " after polynomial",
                         lex.peek().line, lex.peek().col);
    return out;
}

/// Parsed but unresolved expression: factor symbols are bound to the frame or
/// the coframe only when converted, so each CLI verb can demand the kind it
/// needs.
struct ParsedExpr {
    std::vector<detail::ExprTerm> terms;
};

/// mv := mterm (('+'|'-') mterm)* ;
/// mterm := '(' poly ')'? factor ('/\' factor)* | '(' poly ')'
/// The bare-coefficient alternative keeps degree-0 outputs like "(1)"
/// round-trippable.
inline ParsedExpr parse_expression(const std::string& text, const AlgebroidSpec& spec) {
    detail::Lexer lex(text);
    if (lex.peek().kind == detail::Tok::End) throw ParseError("empty expression", 1, 1);
    ParsedExpr out;
    int sign = 1;
    if (lex.peek().kind == detail::Tok::Plus || lex.peek().kind == detail::Tok::Minus)
        sign = lex.next().kind == detail::Tok::Minus ? -1 : 1;
    while (true) {
        detail::ExprTerm term{sign, Scalar(spec.num_vars(), Rational(1)), {}};
        bool have_coeff = false;
        if (lex.peek().kind == detail::Tok::LParen) {
            lex.next();
            detail::PolyParser parser(lex, spec.base_vars());
            term.coeff = parser.parse();
            lex.expect(detail::Tok::RParen, "')'");
            have_coeff = true;
        }
        if (lex.peek().kind == detail::Tok::Ident) {
            term.factors.push_back(lex.next());
            while (lex.peek().kind == detail::Tok::Wedge) {
                lex.next();
                term.factors.push_back(lex.expect(detail::Tok::Ident, "a frame symbol"));
            }
        } else if (!have_coeff) {
            throw ParseError("expected a coefficient or a frame symbol, found " +
                                 detail::Lexer::describe(lex.peek()),
                             lex.peek().line, lex.peek().col);
        }
        out.terms.push_back(std::move(term));
        if (lex.peek().kind == detail::Tok::Plus || lex.peek().kind == detail::Tok::Minus) {
            sign = lex.next().kind == detail::Tok::Minus ? -1 : 1;
            continue;
        }
        break;
    }
    if (lex.peek().kind != detail::Tok::End)
        throw ParseError("unexpected " + detail::Lexer::describe(lex.peek()) +
                             " after expression",
                         lex.peek().line, lex.peek().col);
    return out;
}

namespace detail {

template <typename Tag>
GradedElement<Tag> resolve_expression(const ParsedExpr& expr, const AlgebroidSpec& spec,
                                      const std::vector<std::string>& names,
                                      const std::vector<std::string>& other_names,
                                      const char* kind, const char* other_kind) {
    std::map<std::string, std::uint32_t> index;
    for (std::size_t i = 0; i < names.size(); ++i)
        index[names[i]] = static_cast<std::uint32_t>(i + 1);
    std::map<std::string, bool> other;
    for (const auto& n : other_names) other[n] = true;

    GradedElement<Tag> out(spec.rank(), spec.num_vars());
    for (const auto& term : expr.terms) {
        Scalar c = term.sign < 0 ? -term.coeff : term.coeff;
        GradedElement<Tag> piece = GradedElement<Tag>::from_scalar(spec.rank(), std::move(c));
        for (const auto& tok : term.factors) {
            auto it = index.find(tok.text);
            if (it == index.end()) {
                if (other.count(tok.text))
                    throw ParseError(std::string(other_kind) + " symbol '" + tok.text +
                                         "' in a " + kind + " expression",
                                     tok.line, tok.col);
                throw ParseError("unknown symbol '" + tok.text + "'", tok.line, tok.col);
            }
            piece = wedge(piece, GradedElement<Tag>::basis(spec.rank(), spec.num_vars(),
                                                           FrameIndexSet{it->second}));
        }
        out += piece;
    }
    return out;
}

}  // namespace detail

inline MultiVector as_multivector(const ParsedExpr& expr, const AlgebroidSpec& spec) {
    return detail::resolve_expression<PrimalFrame>(expr, spec, spec.frame_names(),
                                                   spec.coframe_names(), "multivector",
                                                   "coframe");
}

inline Form as_form(const ParsedExpr& expr, const AlgebroidSpec& spec) {
    return detail::resolve_expression<DualFrame>(expr, spec, spec.coframe_names(),
                                                 spec.frame_names(), "form", "frame");
}

inline MultiVector parse_multivector(const std::string& text, const AlgebroidSpec& spec) {
    return as_multivector(parse_expression(text, spec), spec);
}

inline Form parse_form(const std::string& text, const AlgebroidSpec& spec) {
    return as_form(parse_expression(text, spec), spec);
}

/// Renders a polynomial in the grammar the parser accepts, terms in
/// descending graded-lex order: "3/2*x^2*y - y + 1".
inline std::string render(const Scalar& f, const std::vector<std::string>& var_names) {
    if (f.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
        const auto& [mono, coeff] = *it;
        const bool neg = coeff.sign() < 0;
        if (first) {
            if (neg) out += "-";
            first = false;
        } else {
            out += neg ? " - " : " + ";
        }
        const Rational mag = neg ? -coeff : coeff;
        std::vector<std::string> parts;
        if (!mag.is_one() || monomial_degree(mono) == 0) parts.push_back(mag.str());
        for (std::size_t v = 0; v < mono.size(); ++v) {
            if (mono[v] == 0) continue;
            std::string p = var_names.at(v);
            if (mono[v] > 1) p += "^" + std::to_string(mono[v]);
            parts.push_back(std::move(p));
        }
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) out += "*";
            out += parts[i];
        }
    }
    return out;
}

namespace detail {

template <typename Tag>
std::string render_element(const GradedElement<Tag>& e, const AlgebroidSpec& spec,
                           const std::vector<std::string>& names) {
    if (e.is_zero()) return "(0)";
    std::string out;
    bool first = true;
    for (const auto& [I, f] : e.terms()) {
        // sign comes from the graded-lex-leading coefficient of f
        const bool neg = f.terms().rbegin()->second.sign() < 0;
        const Scalar mag = neg ? -f : f;
        if (first) {
            if (neg) out += "-";
            first = false;
        } else {
            out += neg ? " - " : " + ";
        }
        out += "(" + render(mag, spec.base_vars()) + ")";
        for (std::size_t t = 0; t < I.indices().size(); ++t) {
            out += t == 0 ? " " : " /\\ ";
            out += names.at(I.indices()[t] - 1);
        }
    }
    return out;
}

}  // namespace detail

inline std::string render(const MultiVector& u, const AlgebroidSpec& spec) {
    return detail::render_element(u, spec, spec.frame_names());
}

inline std::string render(const Form& w, const AlgebroidSpec& spec) {
    return detail::render_element(w, spec, spec.coframe_names());
}

}  // namespace gerber
