#pragma once

// A small arithmetic expression language used for radial weight profiles and
// for user-supplied constants in run configurations.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' unary)?
//   primary := number | name | name '(' expr ')' | '(' expr ')'
//
// Functions: exp log sqrt sin cos tan sinh cosh tanh. Constants: pi, e.
// Evaluation is forward-mode differentiated in one distinguished variable.

#include <cctype>
#include <cmath>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sticky/error.hpp"

namespace sticky {

/// Value and first derivative with respect to the distinguished variable.
struct Jet {
    double value = 0.0;
    double slope = 0.0;
};

inline Jet operator+(Jet a, Jet b) { return {a.value + b.value, a.slope + b.slope}; }
inline Jet operator-(Jet a, Jet b) { return {a.value - b.value, a.slope - b.slope}; }
inline Jet operator*(Jet a, Jet b) { return {a.value * b.value, a.slope * b.value + a.value * b.slope}; }
inline Jet operator/(Jet a, Jet b) {
    return {a.value / b.value, (a.slope * b.value - a.value * b.slope) / (b.value * b.value)};
}

class ExpressionError : public std::runtime_error {
public:
    explicit ExpressionError(const std::string& what) : std::runtime_error(what) {}
};

class Expression {
public:
    using Environment = std::map<std::string, double>;

    /// Parses `text`; every free name must be in `variables` (or a known constant).
    static Expression parse(const std::string& text, const std::set<std::string>& variables) {
        Parser p{text, 0, variables};
        auto root = p.expr();
        p.skip();
        if (p.pos != text.size()) p.fail("unexpected trailing input");
        Expression e;
        e.text_ = text;
        e.root_ = std::move(root);
        return e;
    }

    const std::string& text() const { return text_; }

    /// Evaluates with `variable` seeded as the differentiation direction.
    Jet eval(const Environment& env, const std::string& variable = "") const {
        return root_->eval(env, variable);
    }

    double value(const Environment& env = {}) const { return eval(env).value; }

    /// True when the expression mentions none of the given names.
    bool independent_of(const std::string& name) const { return !root_->mentions(name); }

private:
    struct Node {
        virtual ~Node() = default;
        virtual Jet eval(const Environment& env, const std::string& var) const = 0;
        virtual bool mentions(const std::string& name) const = 0;
    };
    using NodePtr = std::shared_ptr<const Node>;

    struct Number : Node {
        double v;
        explicit Number(double x) : v(x) {}
        Jet eval(const Environment&, const std::string&) const override { return {v, 0.0}; }
        bool mentions(const std::string&) const override { return false; }
    };

    struct Variable : Node {
        std::string name;
        explicit Variable(std::string n) : name(std::move(n)) {}
        Jet eval(const Environment& env, const std::string& var) const override {
            auto it = env.find(name);
            if (it == env.end()) throw ExpressionError("unbound variable '" + name + "'");
            return {it->second, name == var ? 1.0 : 0.0};
        }
        bool mentions(const std::string& n) const override { return n == name; }
    };

    struct Unary : Node {
        std::string fn;
        NodePtr arg;
        Unary(std::string f, NodePtr a) : fn(std::move(f)), arg(std::move(a)) {}
        Jet eval(const Environment& env, const std::string& var) const override {
            const Jet u = arg->eval(env, var);
            if (fn == "neg") return {-u.value, -u.slope};
            if (fn == "exp") {
                const double e = std::exp(u.value);
                return {e, e * u.slope};
            }
            if (fn == "log") return {std::log(u.value), u.slope / u.value};
            if (fn == "sqrt") {
                const double s = std::sqrt(u.value);
                return {s, u.slope / (2.0 * s)};
            }
            if (fn == "sin") return {std::sin(u.value), std::cos(u.value) * u.slope};
            if (fn == "cos") return {std::cos(u.value), -std::sin(u.value) * u.slope};
            if (fn == "tan") {
                const double c = std::cos(u.value);
                return {std::tan(u.value), u.slope / (c * c)};
            }
            if (fn == "sinh") return {std::sinh(u.value), std::cosh(u.value) * u.slope};
            if (fn == "cosh") return {std::cosh(u.value), std::sinh(u.value) * u.slope};
            if (fn == "tanh") {
                const double t = std::tanh(u.value);
                return {t, (1.0 - t * t) * u.slope};
            }
            throw ExpressionError("unknown function '" + fn + "'");
        }
        bool mentions(const std::string& n) const override { return arg->mentions(n); }
    };

    struct Binary : Node {
        char op;
        NodePtr lhs, rhs;
        Binary(char o, NodePtr l, NodePtr r) : op(o), lhs(std::move(l)), rhs(std::move(r)) {}
        Jet eval(const Environment& env, const std::string& var) const override {
            const Jet a = lhs->eval(env, var);
            const Jet b = rhs->eval(env, var);
            switch (op) {
                case '+': return a + b;
                case '-': return a - b;
                case '*': return a * b;
                case '/': return a / b;
                case '^': {
                    const double v = std::pow(a.value, b.value);
                    double slope = 0.0;
                    if (a.slope != 0.0) slope += b.value * std::pow(a.value, b.value - 1.0) * a.slope;
                    if (b.slope != 0.0) slope += v * std::log(a.value) * b.slope;
                    return {v, slope};
                }
            }
            throw ExpressionError("unknown operator");
        }
        bool mentions(const std::string& n) const override { return lhs->mentions(n) || rhs->mentions(n); }
    };

    struct Parser {
        const std::string& s;
        std::size_t pos;
        const std::set<std::string>& vars;

        [[noreturn]] void fail(const std::string& msg) const {
            throw ExpressionError("expression '" + s + "' at offset " + std::to_string(pos) + ": " + msg);
        }
        void skip() {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        }
        bool accept(char c) {
            skip();
            if (pos < s.size() && s[pos] == c) {
                ++pos;
                return true;
            }
            return false;
        }

        NodePtr expr() {
            auto node = term();
            for (;;) {
                if (accept('+')) node = std::make_shared<Binary>('+', node, term());
                else if (accept('-')) node = std::make_shared<Binary>('-', node, term());
                else return node;
            }
        }
        NodePtr term() {
            auto node = unary();
            for (;;) {
                if (accept('*')) node = std::make_shared<Binary>('*', node, unary());
                else if (accept('/')) node = std::make_shared<Binary>('/', node, unary());
                else return node;
            }
        }
        NodePtr unary() {
            if (accept('-')) return std::make_shared<Unary>("neg", unary());
            if (accept('+')) return unary();
            return power();
        }
        NodePtr power() {
            auto base = primary();
            if (accept('^')) return std::make_shared<Binary>('^', base, unary());
            return base;
        }
        NodePtr primary() {
            skip();
            if (pos >= s.size()) fail("unexpected end of input");
            if (accept('(')) {
                auto inner = expr();
                if (!accept(')')) fail("expected ')'");
                return inner;
            }
            const char c = s[pos];
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                std::size_t used = 0;
                double v = 0.0;
                try {
                    v = std::stod(s.substr(pos), &used);
                } catch (const std::exception&) {
                    fail("malformed number");
                }
                pos += used;
                return std::make_shared<Number>(v);
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                const std::size_t start = pos;
                while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
                const std::string name = s.substr(start, pos - start);
                static const std::set<std::string> functions{"exp", "log", "sqrt", "sin", "cos",
                                                             "tan", "sinh", "cosh", "tanh"};
                if (functions.count(name)) {
                    if (!accept('(')) fail("expected '(' after " + name);
                    auto arg = expr();
                    if (!accept(')')) fail("expected ')'");
                    return std::make_shared<Unary>(name, arg);
                }
                if (name == "pi") return std::make_shared<Number>(3.14159265358979323846);
                if (name == "e") return std::make_shared<Number>(2.71828182845904523536);
                if (!vars.count(name)) fail("unknown name '" + name + "'");
                return std::make_shared<Variable>(name);
            }
            fail(std::string("unexpected character '") + c + "'");
        }
    };

    std::string text_;
    NodePtr root_;
};

}  // namespace sticky
