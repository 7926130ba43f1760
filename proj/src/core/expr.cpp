#include "expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "error.hpp"

namespace varfrac {

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make_node(Expr::Kind kind, std::vector<NodePtr> args = {}, double value = 0.0) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = kind;
    n->value = value;
    n->args = std::move(args);
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    NodePtr parse_all() {
        NodePtr e = parse_sum();
        skip_ws();
        if (pos_ != src_.size()) {
            throw ParseError(pos_, "unexpected character '" + std::string(1, src_[pos_]) + "'");
        }
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            throw ParseError(pos_, std::string("expected '") + c + "'");
        }
    }

    NodePtr parse_sum() {
        NodePtr lhs = parse_product();
        for (;;) {
            if (accept('+')) {
                lhs = make_node(Expr::Kind::Add, {lhs, parse_product()});
            } else if (accept('-')) {
                lhs = make_node(Expr::Kind::Sub, {lhs, parse_product()});
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_product() {
        NodePtr lhs = parse_unary();
        for (;;) {
            if (accept('*')) {
                lhs = make_node(Expr::Kind::Mul, {lhs, parse_unary()});
            } else if (accept('/')) {
                lhs = make_node(Expr::Kind::Div, {lhs, parse_unary()});
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_unary() {
        if (accept('-')) {
            return make_node(Expr::Kind::Neg, {parse_unary()});
        }
        if (accept('+')) {
            return parse_unary();
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        if (accept('^')) {
            // right-associative; the exponent may carry its own sign
            return make_node(Expr::Kind::Pow, {base, parse_unary()});
        }
        return base;
    }

    NodePtr parse_primary() {
        skip_ws();
        if (pos_ >= src_.size()) {
            throw ParseError(pos_, "unexpected end of expression");
        }
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr inner = parse_sum();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return parse_number();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            return parse_identifier();
        }
        throw ParseError(pos_, "unexpected character '" + std::string(1, c) + "'");
    }

    NodePtr parse_number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
            ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) {
                ++p;
            }
            if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
                pos_ = p;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                    ++pos_;
                }
            }
        }
        double value = 0.0;
        const auto* first = src_.data() + start;
        const auto* last = src_.data() + pos_;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr != last) {
            throw ParseError(start, "malformed number");
        }
        return make_node(Expr::Kind::Number, {}, value);
    }

    NodePtr parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
            ++pos_;
        }
        const std::string name(src_.substr(start, pos_ - start));
        if (name == "x") return make_node(Expr::Kind::VarX);
        if (name == "y") return make_node(Expr::Kind::VarY);
        if (name == "pi") return make_node(Expr::Kind::Pi);

        struct Builtin {
            const char* name;
            Expr::Func func;
            std::size_t arity;
        };
        static constexpr Builtin builtins[] = {
            {"sin", Expr::Func::Sin, 1}, {"cos", Expr::Func::Cos, 1},
            {"exp", Expr::Func::Exp, 1}, {"abs", Expr::Func::Abs, 1},
            {"sqrt", Expr::Func::Sqrt, 1}, {"min", Expr::Func::Min, 2},
            {"max", Expr::Func::Max, 2},
        };
        for (const auto& b : builtins) {
            if (name != b.name) continue;
            skip_ws();
            if (!accept('(')) {
                throw ParseError(pos_, "expected '(' after function " + name);
            }
            std::vector<NodePtr> args;
            args.push_back(parse_sum());
            while (accept(',')) {
                args.push_back(parse_sum());
            }
            const std::size_t close = pos_;
            expect(')');
            if (args.size() != b.arity) {
                throw ParseError(close, "function " + name + " expects " + std::to_string(b.arity) +
                                            " argument(s), got " + std::to_string(args.size()));
            }
            auto n = std::make_shared<Expr::Node>();
            n->kind = Expr::Kind::Call;
            n->func = b.func;
            n->args = std::move(args);
            return n;
        }
        throw ParseError(start, "unknown identifier '" + name + "'");
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

[[noreturn]] void domain_error(const std::string& what) {
    throw Error(ErrorCode::Evaluation, "domain error: " + what);
}

double eval_node(const Expr::Node& n, double x, const std::optional<double>& y) {
    switch (n.kind) {
    case Expr::Kind::Number:
        return n.value;
    case Expr::Kind::VarX:
        return x;
    case Expr::Kind::VarY:
        if (!y) {
            throw Error(ErrorCode::Evaluation, "variable y is not bound");
        }
        return *y;
    case Expr::Kind::Pi:
        return std::numbers::pi;
    case Expr::Kind::Neg:
        return -eval_node(*n.args[0], x, y);
    case Expr::Kind::Add:
        return eval_node(*n.args[0], x, y) + eval_node(*n.args[1], x, y);
    case Expr::Kind::Sub:
        return eval_node(*n.args[0], x, y) - eval_node(*n.args[1], x, y);
    case Expr::Kind::Mul:
        return eval_node(*n.args[0], x, y) * eval_node(*n.args[1], x, y);
    case Expr::Kind::Div: {
        const double num = eval_node(*n.args[0], x, y);
        const double den = eval_node(*n.args[1], x, y);
        if (den == 0.0) domain_error("division by zero");
        return num / den;
    }
    case Expr::Kind::Pow: {
        const double base = eval_node(*n.args[0], x, y);
        const double ex = eval_node(*n.args[1], x, y);
        if (base == 0.0 && ex < 0.0) domain_error("zero raised to a negative power");
        if (base < 0.0 && std::trunc(ex) != ex) {
            domain_error("negative base raised to a non-integer power");
        }
        return std::pow(base, ex);
    }
    case Expr::Kind::Call: {
        const double a = eval_node(*n.args[0], x, y);
        switch (n.func) {
        case Expr::Func::Sin: return std::sin(a);
        case Expr::Func::Cos: return std::cos(a);
        case Expr::Func::Exp: return std::exp(a);
        case Expr::Func::Abs: return std::fabs(a);
        case Expr::Func::Sqrt:
            if (a < 0.0) domain_error("square root of a negative number");
            return std::sqrt(a);
        case Expr::Func::Min: return std::min(a, eval_node(*n.args[1], x, y));
        case Expr::Func::Max: return std::max(a, eval_node(*n.args[1], x, y));
        }
        break;
    }
    }
    domain_error("malformed expression");
}

void collect_vars(const Expr::Node& n, std::set<std::string>& out) {
    if (n.kind == Expr::Kind::VarX) out.insert("x");
    if (n.kind == Expr::Kind::VarY) out.insert("y");
    for (const auto& a : n.args) collect_vars(*a, out);
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void print_node(const Expr::Node& n, std::string& out) {
    auto binary = [&](const char* op) {
        out += '(';
        print_node(*n.args[0], out);
        out += op;
        print_node(*n.args[1], out);
        out += ')';
    };
    switch (n.kind) {
    case Expr::Kind::Number: {
        // negative literals only arise from constant(); keep them re-parseable
        if (n.value < 0.0) {
            out += "(-" + format_number(-n.value) + ")";
        } else {
            out += format_number(n.value);
        }
        return;
    }
    case Expr::Kind::VarX: out += 'x'; return;
    case Expr::Kind::VarY: out += 'y'; return;
    case Expr::Kind::Pi: out += "pi"; return;
    case Expr::Kind::Neg:
        out += "(-";
        print_node(*n.args[0], out);
        out += ')';
        return;
    case Expr::Kind::Add: binary(" + "); return;
    case Expr::Kind::Sub: binary(" - "); return;
    case Expr::Kind::Mul: binary(" * "); return;
    case Expr::Kind::Div: binary(" / "); return;
    case Expr::Kind::Pow: binary("^"); return;
    case Expr::Kind::Call: {
        static constexpr const char* names[] = {"sin", "cos", "exp", "abs", "sqrt", "min", "max"};
        out += names[static_cast<int>(n.func)];
        out += '(';
        for (std::size_t i = 0; i < n.args.size(); ++i) {
            if (i) out += ", ";
            print_node(*n.args[i], out);
        }
        out += ')';
        return;
    }
    }
}

} // namespace

Expr Expr::parse(std::string_view source) {
    return Expr(Parser(source).parse_all());
}

Expr Expr::constant(double value) {
    return Expr(make_node(Kind::Number, {}, value));
}

double Expr::eval(double x, std::optional<double> y) const {
    if (!root_) {
        throw Error(ErrorCode::Evaluation, "empty expression");
    }
    return eval_node(*root_, x, y);
}

std::set<std::string> Expr::free_vars() const {
    std::set<std::string> vars;
    if (root_) collect_vars(*root_, vars);
    return vars;
}

bool Expr::uses_y() const {
    return free_vars().count("y") != 0;
}

std::string Expr::to_string() const {
    std::string out;
    if (root_) print_node(*root_, out);
    return out;
}

} // namespace varfrac
