#include "semicl/expr.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace semicl {

enum class NodeKind { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Func };
enum class Func { Exp, Sin, Cos, Sqrt, Abs };

struct ExprNode {
    NodeKind kind;
    double value = 0;  // Const
    int var = 0;       // Var: 1 or 2
    Func func = Func::Exp;
    std::shared_ptr<const ExprNode> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make(NodeKind k, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

const char* func_name(Func f) {
    switch (f) {
        case Func::Exp: return "exp";
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
        case Func::Sqrt: return "sqrt";
        case Func::Abs: return "abs";
    }
    return "?";
}

std::string fmt_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string render(const ExprNode& n) {
    switch (n.kind) {
        case NodeKind::Const: {
            std::string s = fmt_double(n.value);
            return n.value < 0 ? "(" + s + ")" : s;
        }
        case NodeKind::Var: return n.var == 1 ? "x1" : "x2";
        case NodeKind::Neg: return "(-" + render(*n.a) + ")";
        case NodeKind::Add: return "(" + render(*n.a) + " + " + render(*n.b) + ")";
        case NodeKind::Sub: return "(" + render(*n.a) + " - " + render(*n.b) + ")";
        case NodeKind::Mul: return "(" + render(*n.a) + " * " + render(*n.b) + ")";
        case NodeKind::Div: return "(" + render(*n.a) + " / " + render(*n.b) + ")";
        case NodeKind::Pow: return "(" + render(*n.a) + " ^ " + render(*n.b) + ")";
        case NodeKind::Func: return std::string(func_name(n.func)) + "(" + render(*n.a) + ")";
    }
    return "?";
}

double eval_node(const ExprNode& n, const Point& p) {
    switch (n.kind) {
        case NodeKind::Const: return n.value;
        case NodeKind::Var: return p[n.var - 1];
        case NodeKind::Neg: return -eval_node(*n.a, p);
        case NodeKind::Add: return eval_node(*n.a, p) + eval_node(*n.b, p);
        case NodeKind::Sub: return eval_node(*n.a, p) - eval_node(*n.b, p);
        case NodeKind::Mul: return eval_node(*n.a, p) * eval_node(*n.b, p);
        case NodeKind::Div: {
            const double d = eval_node(*n.b, p);
            if (d == 0) throw EvalDomainError(render(n), "division by zero in " + render(n));
            return eval_node(*n.a, p) / d;
        }
        case NodeKind::Pow: {
            const double base = eval_node(*n.a, p), ex = eval_node(*n.b, p);
            const double r = std::pow(base, ex);
            if (std::isnan(r)) throw EvalDomainError(render(n), "undefined power in " + render(n));
            return r;
        }
        case NodeKind::Func: {
            const double v = eval_node(*n.a, p);
            switch (n.func) {
                case Func::Exp: return std::exp(v);
                case Func::Sin: return std::sin(v);
                case Func::Cos: return std::cos(v);
                case Func::Abs: return std::abs(v);
                case Func::Sqrt:
                    if (v < 0) throw EvalDomainError(render(n), "sqrt of negative value in " + render(n));
                    return std::sqrt(v);
            }
        }
    }
    return 0;
}

int max_var(const ExprNode& n) {
    int m = n.kind == NodeKind::Var ? n.var : 0;
    if (n.a) m = std::max(m, max_var(*n.a));
    if (n.b) m = std::max(m, max_var(*n.b));
    return m;
}

// Grammar:
//   expr    := term (('+'|'-') term)*
//   term    := unary (('*'|'/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | ident | ident '(' expr ')' | '(' expr ')'
class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr parse() {
        NodePtr e = expr();
        skip();
        if (pos_ != s_.size()) fail("operator or end of input");
        return e;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& expected) {
        std::string got = pos_ < s_.size() ? "'" + std::string(1, s_[pos_]) + "'" : "end of input";
        throw ParseError(pos_, expected,
                         "syntax error at offset " + std::to_string(pos_) + ": expected " + expected + ", got " + got);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+'))
                lhs = make(NodeKind::Add, lhs, term());
            else if (accept('-'))
                lhs = make(NodeKind::Sub, lhs, term());
            else
                return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*'))
                lhs = make(NodeKind::Mul, lhs, unary());
            else if (accept('/'))
                lhs = make(NodeKind::Div, lhs, unary());
            else
                return lhs;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(NodeKind::Neg, unary());
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make(NodeKind::Pow, base, unary());
        return base;
    }

    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) fail("number, variable, function or '('");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!accept(')')) fail("')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        fail("number, variable, function or '('");
    }

    NodePtr number() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t q = pos_ + 1;
            if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
            if (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) {
                pos_ = q;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            }
        }
        double v = 0;
        auto res = std::from_chars(s_.data() + start, s_.data() + pos_, v);
        if (res.ec != std::errc() || res.ptr != s_.data() + pos_) {
            pos_ = start;
            fail("number");
        }
        auto n = std::make_shared<ExprNode>();
        n->kind = NodeKind::Const;
        n->value = v;
        return n;
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        const std::string id = s_.substr(start, pos_ - start);
        if (id == "x" || id == "x1" || id == "x2") {
            auto n = std::make_shared<ExprNode>();
            n->kind = NodeKind::Var;
            n->var = id == "x2" ? 2 : 1;
            return n;
        }
        static const std::pair<const char*, Func> funcs[] = {
            {"exp", Func::Exp}, {"sin", Func::Sin}, {"cos", Func::Cos}, {"sqrt", Func::Sqrt}, {"abs", Func::Abs}};
        for (const auto& [name, f] : funcs) {
            if (id == name) {
                if (!accept('(')) fail("'(' after function name");
                auto n = std::make_shared<ExprNode>();
                n->kind = NodeKind::Func;
                n->func = f;
                n->a = expr();
                if (!accept(')')) fail("')'");
                return n;
            }
        }
        pos_ = start;
        throw ParseError(start, "x, x1, x2 or a function name",
                         "unknown identifier '" + id + "' at offset " + std::to_string(start));
    }
};

}  // namespace

double Expr::eval(const Point& p) const {
    if (!root_) throw std::logic_error("Expr::eval on empty expression");
    return eval_node(*root_, p);
}

std::string Expr::to_string() const { return root_ ? render(*root_) : std::string(); }

int Expr::max_variable() const { return root_ ? max_var(*root_) : 0; }

Expr parse_expr(const std::string& source) {
    bool blank = true;
    for (char c : source)
        if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    if (blank) throw ParseError(0, "expression", "empty expression");
    Parser p(source);
    return Expr(p.parse());
}

double eval_expr(const Expr& e, const Point& p) { return e.eval(p); }

Point gradient_fd(const Expr& e, const Point& p) {
    Point g{0, 0};
    for (int i = 0; i < 2; ++i) {
        const double step = 1e-6 * (1 + std::abs(p[i]));
        Point a = p, b = p;
        a[i] += step;
        b[i] -= step;
        g[i] = (e.eval(a) - e.eval(b)) / (2 * step);
    }
    return g;
}

}  // namespace semicl
