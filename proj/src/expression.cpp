#include "thermobeam/expression.hpp"

#include "thermobeam/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>

namespace thermobeam {

namespace {

using Node = std::function<double(double)>;

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    Node parse() {
        Node n = expression();
        skip_space();
        if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
        return n;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorCode::ParseError, "expression '" + std::string(src_) + "' at offset " +
                                               std::to_string(pos_) + ": " + msg);
    }

    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Node expression() {
        Node lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = [a = lhs, b = term()](double x) { return a(x) + b(x); };
            } else if (accept('-')) {
                lhs = [a = lhs, b = term()](double x) { return a(x) - b(x); };
            } else {
                return lhs;
            }
        }
    }

    Node term() {
        Node lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = [a = lhs, b = unary()](double x) { return a(x) * b(x); };
            } else if (accept('/')) {
                lhs = [a = lhs, b = unary()](double x) { return a(x) / b(x); };
            } else {
                return lhs;
            }
        }
    }

    Node unary() {
        if (accept('-')) {
            return [a = unary()](double x) { return -a(x); };
        }
        if (accept('+')) return unary();
        return power();
    }

    // right-associative; binds tighter than unary minus on its left operand
    Node power() {
        Node base = primary();
        if (accept('^')) {
            return [a = base, b = unary()](double x) { return std::pow(a(x), b(x)); };
        }
        return base;
    }

    Node primary() {
        skip_space();
        if (pos_ >= src_.size()) fail("unexpected end of input");
        if (accept('(')) {
            Node inner = expression();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        fail("unexpected '" + std::string(1, c) + "'");
    }

    Node number() {
        double value = 0.0;
        const char* first = src_.data() + pos_;
        const auto [ptr, ec] = std::from_chars(first, src_.data() + src_.size(), value);
        if (ec != std::errc()) fail("bad number");
        pos_ += static_cast<std::size_t>(ptr - first);
        return [value](double) { return value; };
    }

    Node identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
            ++pos_;
        }
        const std::string name(src_.substr(start, pos_ - start));
        if (name == "x") return [](double x) { return x; };
        if (name == "pi") return [](double) { return std::numbers::pi; };

        double (*fn)(double) = nullptr;
        if (name == "sin") fn = [](double v) { return std::sin(v); };
        else if (name == "cos") fn = [](double v) { return std::cos(v); };
        else if (name == "tan") fn = [](double v) { return std::tan(v); };
        else if (name == "exp") fn = [](double v) { return std::exp(v); };
        else if (name == "log") fn = [](double v) { return std::log(v); };
        else if (name == "sqrt") fn = [](double v) { return std::sqrt(v); };
        else if (name == "abs") fn = [](double v) { return std::abs(v); };
        else fail("unknown identifier '" + name + "'");

        if (!accept('(')) fail("expected '(' after " + name);
        Node arg = expression();
        if (!accept(')')) fail("expected ')'");
        return [fn, arg](double x) { return fn(arg(x)); };
    }
};

} // namespace

ScalarFunction compile_expression(std::string_view source) {
    return Parser(source).parse();
}

} // namespace thermobeam
