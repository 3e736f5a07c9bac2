#include "calorics/poly_io.hpp"

#include <cctype>
#include <limits>

#include "calorics/errors.hpp"

namespace calorics {

std::string axis_name(int axis, int spatial_dim) {
    static const char* short_names[] = {"x", "y", "z"};
    if (spatial_dim <= 3) return short_names[axis];
    return "x" + std::to_string(axis + 1);
}

namespace {

class Parser {
public:
    Parser(std::string_view text, int n) : text_(text), n_(n) {}

    Polynomial parse() {
        skip_space();
        if (at_end()) throw ParseError("empty expression", pos_);
        Polynomial p = expression();
        skip_space();
        if (!at_end()) throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
        return p;
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }

    void skip_space() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool starts_factor() const {
        const char c = peek();
        return std::isdigit(static_cast<unsigned char>(c)) || std::isalpha(static_cast<unsigned char>(c)) ||
               c == '(';
    }

    Polynomial expression() {
        Polynomial acc = signed_term();
        for (;;) {
            skip_space();
            const char c = peek();
            if (c != '+' && c != '-') return acc;
            ++pos_;
            Polynomial rhs = term();
            if (c == '+')
                acc += rhs;
            else
                acc -= rhs;
        }
    }

    Polynomial signed_term() {
        skip_space();
        if (peek() == '-') {
            ++pos_;
            return -term();
        }
        if (peek() == '+') ++pos_;
        return term();
    }

    Polynomial term() {
        Polynomial acc = unary();
        for (;;) {
            skip_space();
            const char c = peek();
            if (c == '*') {
                ++pos_;
                acc = acc * unary();
            } else if (c == '/') {
                const std::size_t at = pos_++;
                Polynomial divisor = unary();
                const bool constant =
                    divisor.is_zero() || (divisor.size() == 1 && divisor.terms().begin()->first.algebraic_degree() == 0);
                if (!constant) throw ParseError("division by a non-constant expression", at);
                if (divisor.is_zero()) throw ParseError("division by zero", at);
                acc *= 1 / divisor.terms().begin()->second;
            } else if (starts_factor()) {
                acc = acc * power();
            } else {
                return acc;
            }
        }
    }

    Polynomial unary() {
        skip_space();
        if (peek() == '-') {
            ++pos_;
            return -unary();
        }
        if (peek() == '+') {
            ++pos_;
            return unary();
        }
        return power();
    }

    Polynomial power() {
        Polynomial base = primary();
        skip_space();
        if (peek() != '^') return base;
        ++pos_;
        skip_space();
        const std::size_t at = pos_;
        bool parenthesized = false;
        if (peek() == '(') {
            parenthesized = true;
            ++pos_;
            skip_space();
        }
        if (peek() == '-') throw ParseError("negative exponent", at);
        if (!std::isdigit(static_cast<unsigned char>(peek()))) throw ParseError("expected integer exponent", pos_);
        const BigInt e = integer_literal();
        if (parenthesized) {
            skip_space();
            if (peek() != ')') throw ParseError("expected ')'", pos_);
            ++pos_;
        }
        if (e > 4096) throw ParseError("exponent too large", at);
        return pow(base, static_cast<unsigned>(e.get_ui()));
    }

    Polynomial primary() {
        skip_space();
        const char c = peek();
        if (c == '(') {
            ++pos_;
            Polynomial inner = expression();
            skip_space();
            if (peek() != ')') throw ParseError("expected ')'", pos_);
            ++pos_;
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return Polynomial::constant(n_, Rational(integer_literal()));
        if (std::isalpha(static_cast<unsigned char>(c))) return variable();
        if (at_end()) throw ParseError("unexpected end of expression", pos_);
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    BigInt integer_literal() {
        const std::size_t start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        return BigInt(std::string(text_.substr(start, pos_ - start)), 10);
    }

    Polynomial variable() {
        // One letter per variable so that "xy" and "tx" juxtapose; only x takes an index.
        const std::size_t start = pos_;
        const char letter = peek();
        ++pos_;
        if (letter == 'x')
            while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        const std::string name(text_.substr(start, pos_ - start));
        if (name == "t") return Polynomial::variable(n_, Var::t());
        if (n_ <= 3) {
            for (int i = 0; i < n_; ++i)
                if (name == axis_name(i, n_)) return Polynomial::variable(n_, Var::x(i));
        }
        if (name.size() > 1 && name[0] == 'x' && std::isdigit(static_cast<unsigned char>(name[1]))) {
            const long idx = std::stol(name.substr(1));
            if (idx >= 1 && idx <= n_) return Polynomial::variable(n_, Var::x(static_cast<int>(idx - 1)));
        }
        throw ParseError("unknown variable '" + name + "'", start);
    }

    std::string_view text_;
    int n_;
    std::size_t pos_ = 0;
};

std::string monomial_text(const ExponentVector& e, int n) {
    std::string out;
    auto append = [&](const std::string& name, unsigned power) {
        if (power == 0) return;
        if (!out.empty()) out += '*';
        out += name;
        if (power > 1) out += '^' + std::to_string(power);
    };
    append("t", e.t_exp);
    for (int i = 0; i < n; ++i) append(axis_name(i, n), e.space[i]);
    return out;
}

}  // namespace

Polynomial parse_poly(std::string_view text, int spatial_dim) {
    if (spatial_dim < 1) throw InvalidArgument("spatial dimension must be at least 1");
    return Parser(text, spatial_dim).parse();
}

std::string to_string(const Polynomial& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : p.terms()) {
        const bool negative = c < 0;
        const Rational magnitude = abs(c);
        if (first)
            out += negative ? "-" : "";
        else
            out += negative ? " - " : " + ";
        first = false;
        const std::string mono = monomial_text(e, p.spatial_dim());
        if (mono.empty())
            out += to_string(magnitude);
        else if (magnitude == 1)
            out += mono;
        else
            out += to_string(magnitude) + "*" + mono;
    }
    return out;
}

nlohmann::json to_json(const Polynomial& p) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [e, c] : p.terms()) {
        terms.push_back({{"k", e.t_exp},
                         {"alpha", e.space},
                         {"num", c.get_num().get_str()},
                         {"den", c.get_den().get_str()}});
    }
    return {{"n", p.spatial_dim()}, {"terms", std::move(terms)}};
}

Polynomial polynomial_from_json(const nlohmann::json& j) {
    try {
        const int n = j.at("n").get<int>();
        Polynomial p(n);
        for (const auto& term : j.at("terms")) {
            auto alpha = term.at("alpha").get<std::vector<unsigned>>();
            if (static_cast<int>(alpha.size()) != n)
                throw DimensionMismatch("term alpha length differs from n");
            Rational c = parse_rational(term.at("num").get<std::string>() + "/" + term.at("den").get<std::string>());
            p.add_term(ExponentVector(term.at("k").get<unsigned>(), std::move(alpha)), c);
        }
        return p;
    } catch (const nlohmann::json::exception& ex) {
        throw InvalidArgument(std::string("malformed polynomial JSON: ") + ex.what());
    }
}

}  // namespace calorics
