#include "expression.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <vector>

namespace tscal::cli {

struct Expression::Node {
    enum class Kind { number, var_t, var_x, unary, binary, call } kind;
    double number = 0.0;
    char op = 0; // + - * / ^ for binary, '-' for unary
    std::string fn;
    std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

NodePtr make_number(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::number;
    n->number = v;
    return n;
}

struct Parser {
    const std::string& src;
    std::size_t pos = 0;
    bool uses_x = false;

    explicit Parser(const std::string& s) : src(s) {}

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < src.size() && src[pos] == c) { ++pos; return true; }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("expression error at position " + std::to_string(pos) +
                          ": " + what + " in '" + src + "'");
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        for (;;) {
            skip_ws();
            if (eat('+')) {
                auto n = std::make_shared<Node>();
                n->kind = Node::Kind::binary; n->op = '+';
                n->a = lhs; n->b = parse_term();
                lhs = n;
            } else if (eat('-')) {
                auto n = std::make_shared<Node>();
                n->kind = Node::Kind::binary; n->op = '-';
                n->a = lhs; n->b = parse_term();
                lhs = n;
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_factor();
        for (;;) {
            skip_ws();
            if (eat('*')) {
                auto n = std::make_shared<Node>();
                n->kind = Node::Kind::binary; n->op = '*';
                n->a = lhs; n->b = parse_factor();
                lhs = n;
            } else if (eat('/')) {
                auto n = std::make_shared<Node>();
                n->kind = Node::Kind::binary; n->op = '/';
                n->a = lhs; n->b = parse_factor();
                lhs = n;
            } else {
                return lhs;
            }
        }
    }

    // '-' binds weaker than '^': -t^2 is -(t^2)
    NodePtr parse_factor() {
        skip_ws();
        if (eat('-')) {
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::unary; n->op = '-';
            n->a = parse_factor();
            return n;
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        skip_ws();
        if (eat('^')) {
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::binary; n->op = '^';
            n->a = base; n->b = parse_factor(); // right-assoc, allows 2^-3
            return n;
        }
        return base;
    }

    NodePtr parse_primary() {
        skip_ws();
        if (pos >= src.size()) fail("unexpected end of expression");
        const char c = src[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t used = 0;
            double v = std::stod(src.substr(pos), &used);
            pos += used;
            return make_number(v);
        }
        if (c == '(') {
            ++pos;
            NodePtr inner = parse_expr();
            if (!eat(')')) fail("missing ')'");
            return inner;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos;
            while (pos < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
                ++pos;
            std::string name = src.substr(start, pos - start);
            if (name == "t") {
                auto n = std::make_shared<Node>();
                n->kind = Node::Kind::var_t;
                return n;
            }
            if (name == "x") {
                uses_x = true;
                auto n = std::make_shared<Node>();
                n->kind = Node::Kind::var_x;
                return n;
            }
            if (name == "pi") return make_number(3.14159265358979323846);
            if (name == "e") return make_number(2.71828182845904523536);
            if (eat('(')) {
                auto n = std::make_shared<Node>();
                n->kind = Node::Kind::call;
                n->fn = name;
                n->a = parse_expr();
                if (!eat(')')) fail("missing ')' after " + name);
                return n;
            }
            fail("unknown identifier '" + name + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

double eval_node(const Node& n, double t, double x) {
    switch (n.kind) {
        case Node::Kind::number: return n.number;
        case Node::Kind::var_t: return t;
        case Node::Kind::var_x: return x;
        case Node::Kind::unary: return -eval_node(*n.a, t, x);
        case Node::Kind::binary: {
            const double a = eval_node(*n.a, t, x);
            const double b = eval_node(*n.b, t, x);
            switch (n.op) {
                case '+': return a + b;
                case '-': return a - b;
                case '*': return a * b;
                case '/': return a / b;
                case '^': return std::pow(a, b);
            }
            return 0.0;
        }
        case Node::Kind::call: {
            const double a = eval_node(*n.a, t, x);
            if (n.fn == "sin") return std::sin(a);
            if (n.fn == "cos") return std::cos(a);
            if (n.fn == "tan") return std::tan(a);
            if (n.fn == "exp") return std::exp(a);
            if (n.fn == "log") return std::log(a);
            if (n.fn == "sqrt") return std::sqrt(a);
            if (n.fn == "abs") return std::abs(a);
            if (n.fn == "sign") return a > 0 ? 1.0 : (a < 0 ? -1.0 : 0.0);
            if (n.fn == "floor") return std::floor(a);
            if (n.fn == "round") return std::round(a);
            throw ConfigError("unknown function '" + n.fn + "'");
        }
    }
    return 0.0;
}

} // namespace

Expression Expression::parse(const std::string& src) {
    Parser p(src);
    Expression e;
    e.root_ = p.parse_expr();
    p.skip_ws();
    if (p.pos != src.size()) p.fail("trailing input");
    e.uses_x_ = p.uses_x;
    e.source_ = src;
    return e;
}

double Expression::eval(double t, double x) const {
    return eval_node(*root_, t, x);
}

} // namespace tscal::cli
