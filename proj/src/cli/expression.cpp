#include "curvlab/cli/expression.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include "curvlab/cli/config.hpp"

namespace curvlab::cli {

struct ExprNode {
    enum class Kind { Number, Variable, Unary, Binary, Call };
    Kind kind = Kind::Number;
    double number = 0.0;
    std::string name;
    char op = 0;
    std::vector<std::shared_ptr<const ExprNode>> args;
};

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

struct Env {
    double r;
    std::span<const double> omega;
};

Dual apply_unary(const std::string& f, Dual a)
{
    if (f == "exp") {
        const double e = std::exp(a.v);
        return {e, e * a.d};
    }
    if (f == "log") return {std::log(a.v), a.d / a.v};
    if (f == "sqrt") {
        const double s = std::sqrt(a.v);
        return {s, a.d / (2 * s)};
    }
    if (f == "sin") return {std::sin(a.v), std::cos(a.v) * a.d};
    if (f == "cos") return {std::cos(a.v), -std::sin(a.v) * a.d};
    if (f == "tan") {
        const double c = std::cos(a.v);
        return {std::tan(a.v), a.d / (c * c)};
    }
    if (f == "sinh") return {std::sinh(a.v), std::cosh(a.v) * a.d};
    if (f == "cosh") return {std::cosh(a.v), std::sinh(a.v) * a.d};
    if (f == "tanh") {
        const double t = std::tanh(a.v);
        return {t, (1 - t * t) * a.d};
    }
    if (f == "abs") return {std::abs(a.v), a.v < 0 ? -a.d : a.d};
    throw ConfigError("unknown function '" + f + "'");
}

Dual power(Dual a, Dual b)
{
    const double v = std::pow(a.v, b.v);
    double d = 0.0;
    if (a.d != 0.0) d += b.v * std::pow(a.v, b.v - 1) * a.d;
    if (b.d != 0.0) d += v * std::log(a.v) * b.d;
    return {v, d};
}

Dual evaluate(const ExprNode& node, const Env& env)
{
    switch (node.kind) {
    case ExprNode::Kind::Number:
        return {node.number, 0.0};
    case ExprNode::Kind::Variable: {
        if (node.name == "r") return {env.r, 1.0};
        if (node.name == "theta") {
            if (env.omega.empty()) throw ConfigError("'theta' is only defined for radial graphs");
            return {std::acos(std::clamp(env.omega.back(), -1.0, 1.0)), 0.0};
        }
        const auto idx = static_cast<std::size_t>(std::stoi(node.name.substr(1)) - 1);
        if (idx >= env.omega.size()) throw ConfigError("variable '" + node.name + "' exceeds the fiber dimension");
        return {env.omega[idx], 0.0};
    }
    case ExprNode::Kind::Unary: {
        const Dual a = evaluate(*node.args[0], env);
        return {-a.v, -a.d};
    }
    case ExprNode::Kind::Binary: {
        const Dual a = evaluate(*node.args[0], env);
        const Dual b = evaluate(*node.args[1], env);
        switch (node.op) {
        case '+': return {a.v + b.v, a.d + b.d};
        case '-': return {a.v - b.v, a.d - b.d};
        case '*': return {a.v * b.v, a.d * b.v + a.v * b.d};
        case '/': return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
        default: return power(a, b);
        }
    }
    case ExprNode::Kind::Call: {
        if (node.name == "min" || node.name == "max" || node.name == "pow") {
            const Dual a = evaluate(*node.args[0], env);
            const Dual b = evaluate(*node.args[1], env);
            if (node.name == "pow") return power(a, b);
            const bool first = node.name == "min" ? a.v <= b.v : a.v >= b.v;
            return first ? a : b;
        }
        return apply_unary(node.name, evaluate(*node.args[0], env));
    }
    }
    return {};
}

class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    NodePtr parse_all()
    {
        NodePtr n = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return n;
    }

    std::vector<std::string> variables;

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const
    {
        throw ConfigError("expression '" + s_ + "': " + what + " at position " + std::to_string(pos_));
    }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    static NodePtr binary(char op, NodePtr a, NodePtr b)
    {
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprNode::Kind::Binary;
        n->op = op;
        n->args = {std::move(a), std::move(b)};
        return n;
    }

    NodePtr expr()
    {
        NodePtr left = term();
        for (;;) {
            if (accept('+')) left = binary('+', left, term());
            else if (accept('-')) left = binary('-', left, term());
            else return left;
        }
    }

    NodePtr term()
    {
        NodePtr left = unary();
        for (;;) {
            if (accept('*')) left = binary('*', left, unary());
            else if (accept('/')) left = binary('/', left, unary());
            else return left;
        }
    }

    NodePtr unary()
    {
        if (accept('-')) {
            auto n = std::make_shared<ExprNode>();
            n->kind = ExprNode::Kind::Unary;
            n->args = {unary()};
            return n;
        }
        if (accept('+')) return unary();
        return pow_expr();
    }

    NodePtr pow_expr()
    {
        NodePtr base = primary();
        if (accept('^')) return binary('^', base, unary());
        return base;
    }

    NodePtr primary()
    {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        if (accept('(')) {
            NodePtr n = expr();
            if (!accept(')')) fail("expected ')'");
            return n;
        }
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(s_.substr(pos_), &used);
            } catch (const std::exception&) {
                fail("bad number");
            }
            pos_ += used;
            auto n = std::make_shared<ExprNode>();
            n->number = v;
            return n;
        }
        if (!std::isalpha(static_cast<unsigned char>(c))) fail("unexpected '" + std::string(1, c) + "'");
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        const std::string name = s_.substr(start, pos_ - start);
        if (accept('(')) return call(name);
        auto n = std::make_shared<ExprNode>();
        if (name == "pi" || name == "e") {
            n->number = name == "pi" ? std::numbers::pi : std::numbers::e;
            return n;
        }
        const bool omega = name.size() == 2 && name[0] == 'w' && name[1] >= '1' && name[1] <= '9';
        if (name != "r" && name != "theta" && !omega) fail("unknown variable '" + name + "'");
        n->kind = ExprNode::Kind::Variable;
        n->name = name;
        if (std::find(variables.begin(), variables.end(), name) == variables.end()) variables.push_back(name);
        return n;
    }

    NodePtr call(const std::string& name)
    {
        static const std::vector<std::string> unary_fns{"exp",  "log",  "sqrt", "sin", "cos",
                                                        "tan",  "sinh", "cosh", "tanh", "abs"};
        const bool binary_fn = name == "min" || name == "max" || name == "pow";
        if (!binary_fn && std::find(unary_fns.begin(), unary_fns.end(), name) == unary_fns.end()) {
            fail("unknown function '" + name + "'");
        }
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprNode::Kind::Call;
        n->name = name;
        n->args.push_back(expr());
        if (binary_fn) {
            if (!accept(',')) fail("expected ','");
            n->args.push_back(expr());
        }
        if (!accept(')')) fail("expected ')'");
        return n;
    }
};

} // namespace

Expression Expression::parse(const std::string& text)
{
    Parser parser(text);
    Expression e;
    e.text_ = text;
    e.root_ = parser.parse_all();
    e.variables_ = parser.variables;
    return e;
}

bool Expression::uses(const std::string& variable) const
{
    return std::find(variables_.begin(), variables_.end(), variable) != variables_.end();
}

Dual Expression::eval(double r, std::span<const double> omega) const
{
    return evaluate(*root_, Env{r, omega});
}

RadialFunction radial_function(const Expression& expr, Monotonicity declared)
{
    bool angular = expr.uses("theta");
    for (char c = '1'; c <= '9'; ++c) angular = angular || expr.uses(std::string{'w', c});
    if (angular) throw ConfigError("radial function '" + expr.text() + "' may only depend on r");
    return {expr.text(), [expr](double r) { return expr.eval(r).v; }, [expr](double r) { return expr.eval(r).d; },
            declared};
}

void require_finite(const Expression& expr, std::span<const double> grid, const std::string& where)
{
    for (double r : grid) {
        const Dual d = expr.eval(r);
        if (!std::isfinite(d.v) || !std::isfinite(d.d)) {
            throw ConfigError(where + ": '" + expr.text() + "' is not finite at r = " + std::to_string(r));
        }
    }
}

} // namespace curvlab::cli
