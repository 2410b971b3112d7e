#include "phimon/expression.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "phimon/core.hpp"

namespace phimon {

namespace {

enum class Op {
    constant,
    variable,
    neg,
    add,
    sub,
    mul,
    div,
    pow,
    fn_sqrt,
    fn_abs,
    fn_exp,
    fn_log,
    fn_min,
    fn_max,
    branch,  // kids: cond, then, else
    cmp_lt,
    cmp_le,
    cmp_gt,
    cmp_ge,
};

}  // namespace

struct Expression::Node {
    Op op = Op::constant;
    double value = 0.0;
    std::vector<Node> kids;
};

namespace {

using Node = Expression::Node;

struct Token {
    enum class Kind { number, ident, symbol, end };
    Kind kind = Kind::end;
    double number = 0.0;
    std::string text;  // ident name or symbol spelling
    std::size_t pos = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
        tok_ = Token{};
        tok_.pos = i_;
        if (i_ >= src_.size()) {
            tok_.kind = Token::Kind::end;
            return;
        }
        char c = src_[i_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = src_.data() + i_;
            const char* end = src_.data() + src_.size();
            double v = 0.0;
            auto res = std::from_chars(begin, end, v);
            if (res.ec != std::errc{}) {
                throw ParseError("invalid number at offset " + std::to_string(i_));
            }
            tok_.kind = Token::Kind::number;
            tok_.number = v;
            i_ += static_cast<std::size_t>(res.ptr - begin);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i_;
            while (j < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_'))
                ++j;
            tok_.kind = Token::Kind::ident;
            tok_.text = std::string(src_.substr(i_, j - i_));
            i_ = j;
            return;
        }
        if (c == '<' || c == '>') {
            std::string s(1, c);
            if (i_ + 1 < src_.size() && src_[i_ + 1] == '=') s += '=';
            tok_.kind = Token::Kind::symbol;
            tok_.text = s;
            i_ += s.size();
            return;
        }
        if (std::string_view("+-*/^(),").find(c) != std::string_view::npos) {
            tok_.kind = Token::Kind::symbol;
            tok_.text = std::string(1, c);
            ++i_;
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "' at offset " +
                         std::to_string(i_));
    }

    std::string_view src_;
    std::size_t i_ = 0;
    Token tok_;
};

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) {}

    Node parse_all() {
        Node n = comparison();
        if (lex_.peek().kind != Token::Kind::end) {
            throw ParseError("trailing input at offset " + std::to_string(lex_.peek().pos));
        }
        return n;
    }

private:
    bool at_symbol(std::string_view s) const {
        return lex_.peek().kind == Token::Kind::symbol && lex_.peek().text == s;
    }

    void expect_symbol(std::string_view s) {
        if (!at_symbol(s)) {
            throw ParseError("expected '" + std::string(s) + "' at offset " +
                             std::to_string(lex_.peek().pos));
        }
        lex_.take();
    }

    Node comparison() {
        Node left = additive();
        if (lex_.peek().kind == Token::Kind::symbol) {
            const std::string& s = lex_.peek().text;
            Op op;
            if (s == "<")
                op = Op::cmp_lt;
            else if (s == "<=")
                op = Op::cmp_le;
            else if (s == ">")
                op = Op::cmp_gt;
            else if (s == ">=")
                op = Op::cmp_ge;
            else
                return left;
            lex_.take();
            Node right = additive();
            Node n;
            n.op = op;
            n.kids.push_back(std::move(left));
            n.kids.push_back(std::move(right));
            return n;
        }
        return left;
    }

    Node additive() {
        Node n = term();
        while (at_symbol("+") || at_symbol("-")) {
            Op op = lex_.take().text == "+" ? Op::add : Op::sub;
            Node rhs = term();
            Node parent;
            parent.op = op;
            parent.kids.push_back(std::move(n));
            parent.kids.push_back(std::move(rhs));
            n = std::move(parent);
        }
        return n;
    }

    Node term() {
        Node n = unary();
        while (at_symbol("*") || at_symbol("/")) {
            Op op = lex_.take().text == "*" ? Op::mul : Op::div;
            Node rhs = unary();
            Node parent;
            parent.op = op;
            parent.kids.push_back(std::move(n));
            parent.kids.push_back(std::move(rhs));
            n = std::move(parent);
        }
        return n;
    }

    Node unary() {
        if (at_symbol("-")) {
            lex_.take();
            Node n;
            n.op = Op::neg;
            n.kids.push_back(unary());
            return n;
        }
        if (at_symbol("+")) {
            lex_.take();
            return unary();
        }
        return power();
    }

    Node power() {
        Node base = primary();
        if (at_symbol("^")) {
            lex_.take();
            Node exponent = unary();  // right-associative, allows 2^-3
            Node n;
            n.op = Op::pow;
            n.kids.push_back(std::move(base));
            n.kids.push_back(std::move(exponent));
            return n;
        }
        return base;
    }

    Node primary() {
        Token t = lex_.take();
        if (t.kind == Token::Kind::number) {
            Node n;
            n.op = Op::constant;
            n.value = t.number;
            return n;
        }
        if (t.kind == Token::Kind::symbol && t.text == "(") {
            Node n = comparison();
            expect_symbol(")");
            return n;
        }
        if (t.kind == Token::Kind::ident) {
            if (t.text == "x" || t.text == "t") {
                Node n;
                n.op = Op::variable;
                return n;
            }
            return call(t);
        }
        throw ParseError("unexpected token at offset " + std::to_string(t.pos));
    }

    Node call(const Token& name) {
        Op op;
        std::size_t arity;
        if (name.text == "sqrt") {
            op = Op::fn_sqrt;
            arity = 1;
        } else if (name.text == "abs") {
            op = Op::fn_abs;
            arity = 1;
        } else if (name.text == "exp") {
            op = Op::fn_exp;
            arity = 1;
        } else if (name.text == "log") {
            op = Op::fn_log;
            arity = 1;
        } else if (name.text == "min") {
            op = Op::fn_min;
            arity = 2;
        } else if (name.text == "max") {
            op = Op::fn_max;
            arity = 2;
        } else if (name.text == "if") {
            op = Op::branch;
            arity = 3;
        } else {
            throw ParseError("unknown identifier '" + name.text + "' at offset " +
                             std::to_string(name.pos));
        }
        expect_symbol("(");
        Node n;
        n.op = op;
        for (std::size_t k = 0; k < arity; ++k) {
            if (k > 0) expect_symbol(",");
            n.kids.push_back(comparison());
        }
        expect_symbol(")");
        return n;
    }

    Lexer lex_;
};

double eval_node(const Node& n, double x) {
    switch (n.op) {
        case Op::constant:
            return n.value;
        case Op::variable:
            return x;
        case Op::neg:
            return -eval_node(n.kids[0], x);
        case Op::add:
            return eval_node(n.kids[0], x) + eval_node(n.kids[1], x);
        case Op::sub:
            return eval_node(n.kids[0], x) - eval_node(n.kids[1], x);
        case Op::mul:
            return eval_node(n.kids[0], x) * eval_node(n.kids[1], x);
        case Op::div: {
            double b = eval_node(n.kids[1], x);
            if (b == 0.0) throw EvaluationError("division by zero");
            return eval_node(n.kids[0], x) / b;
        }
        case Op::pow: {
            double b = eval_node(n.kids[0], x);
            double e = eval_node(n.kids[1], x);
            double r = std::pow(b, e);
            if (!std::isfinite(r)) {
                throw EvaluationError("power produced a non-finite value");
            }
            return r;
        }
        case Op::fn_sqrt: {
            double a = eval_node(n.kids[0], x);
            if (a < 0.0) throw EvaluationError("sqrt of a negative input");
            return std::sqrt(a);
        }
        case Op::fn_abs:
            return std::abs(eval_node(n.kids[0], x));
        case Op::fn_exp:
            return std::exp(eval_node(n.kids[0], x));
        case Op::fn_log: {
            double a = eval_node(n.kids[0], x);
            if (a <= 0.0) throw EvaluationError("log of a nonpositive input");
            return std::log(a);
        }
        case Op::fn_min:
            return std::min(eval_node(n.kids[0], x), eval_node(n.kids[1], x));
        case Op::fn_max:
            return std::max(eval_node(n.kids[0], x), eval_node(n.kids[1], x));
        case Op::branch:
            return eval_node(n.kids[0], x) != 0.0 ? eval_node(n.kids[1], x)
                                                  : eval_node(n.kids[2], x);
        case Op::cmp_lt:
            return eval_node(n.kids[0], x) < eval_node(n.kids[1], x) ? 1.0 : 0.0;
        case Op::cmp_le:
            return eval_node(n.kids[0], x) <= eval_node(n.kids[1], x) ? 1.0 : 0.0;
        case Op::cmp_gt:
            return eval_node(n.kids[0], x) > eval_node(n.kids[1], x) ? 1.0 : 0.0;
        case Op::cmp_ge:
            return eval_node(n.kids[0], x) >= eval_node(n.kids[1], x) ? 1.0 : 0.0;
    }
    throw EvaluationError("corrupt expression tree");
}

// Collects branch thresholds `if(x < c, ...)` so quadrature can split there.
void collect_knots(const Node& n, std::vector<double>& out) {
    if (n.op == Op::branch) {
        const Node& cond = n.kids[0];
        if (cond.op == Op::cmp_lt || cond.op == Op::cmp_le || cond.op == Op::cmp_gt ||
            cond.op == Op::cmp_ge) {
            const Node& a = cond.kids[0];
            const Node& b = cond.kids[1];
            if (a.op == Op::variable && b.op == Op::constant) out.push_back(b.value);
            if (a.op == Op::constant && b.op == Op::variable) out.push_back(a.value);
        }
    }
    for (const Node& k : n.kids) collect_knots(k, out);
}

}  // namespace

Expression::Expression(std::shared_ptr<const Node> root, std::vector<double> knots)
    : root_(std::move(root)), knots_(std::move(knots)) {}

Expression Expression::parse(std::string_view source) {
    Parser p(source);
    auto root = std::make_shared<const Node>(p.parse_all());
    std::vector<double> knots;
    collect_knots(*root, knots);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    return Expression(std::move(root), std::move(knots));
}

double Expression::operator()(double x) const { return eval_node(*root_, x); }

}  // namespace phimon
