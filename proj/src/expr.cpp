#include "skyrme/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "skyrme/errors.hpp"

namespace skyrme {

struct Expr::Node {
    enum Kind { Num, Var, Neg, Add, Sub, Mul, Div, Pow, Call } kind;
    double value = 0;
    int var = 0;
    double (*fn)(double) = nullptr;
    std::shared_ptr<const Node> a, b;

    double eval(const double* v) const
    {
        switch (kind) {
        case Num: return value;
        case Var: return v[var];
        case Neg: return -a->eval(v);
        case Add: return a->eval(v) + b->eval(v);
        case Sub: return a->eval(v) - b->eval(v);
        case Mul: return a->eval(v) * b->eval(v);
        case Div: return a->eval(v) / b->eval(v);
        case Pow: return std::pow(a->eval(v), b->eval(v));
        case Call: return fn(a->eval(v));
        }
        return 0;
    }
};

namespace {

using NodeP = std::shared_ptr<const Expr::Node>;

struct Parser {
    const std::string& s;
    const std::vector<std::string>& vars;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const
    {
        throw ConfigError("expression '" + s + "': " + what + " at offset " + std::to_string(pos));
    }

    void skip()
    {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c)
    {
        skip();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    static NodeP make(Expr::Node::Kind k, NodeP a = {}, NodeP b = {})
    {
        auto n = std::make_shared<Expr::Node>();
        n->kind = k;
        n->a = std::move(a);
        n->b = std::move(b);
        return n;
    }

    NodeP expr()
    {
        NodeP l = term();
        for (;;) {
            if (eat('+')) l = make(Expr::Node::Add, l, term());
            else if (eat('-')) l = make(Expr::Node::Sub, l, term());
            else return l;
        }
    }
    NodeP term()
    {
        NodeP l = unary();
        for (;;) {
            if (eat('*')) l = make(Expr::Node::Mul, l, unary());
            else if (eat('/')) l = make(Expr::Node::Div, l, unary());
            else return l;
        }
    }
    NodeP unary()
    {
        if (eat('-')) return make(Expr::Node::Neg, unary());
        if (eat('+')) return unary();
        return power();
    }
    NodeP power()
    {
        NodeP base = primary();
        if (eat('^')) return make(Expr::Node::Pow, base, unary());
        return base;
    }
    NodeP primary()
    {
        skip();
        if (pos >= s.size()) fail("unexpected end");
        char c = s[pos];
        if (c == '(') {
            ++pos;
            NodeP e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s.c_str() + pos;
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            if (end == begin) fail("bad number");
            pos += static_cast<std::size_t>(end - begin);
            auto n = std::make_shared<Expr::Node>();
            n->kind = Expr::Node::Num;
            n->value = v;
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t b = pos;
            while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
            std::string name = s.substr(b, pos - b);
            for (std::size_t i = 0; i < vars.size(); ++i)
                if (vars[i] == name) {
                    auto n = std::make_shared<Expr::Node>();
                    n->kind = Expr::Node::Var;
                    n->var = static_cast<int>(i);
                    return n;
                }
            if (name == "pi") {
                auto n = std::make_shared<Expr::Node>();
                n->kind = Expr::Node::Num;
                n->value = M_PI;
                return n;
            }
            double (*fn)(double) = nullptr;
            if (name == "sin") fn = [](double x) { return std::sin(x); };
            else if (name == "cos") fn = [](double x) { return std::cos(x); };
            else if (name == "tan") fn = [](double x) { return std::tan(x); };
            else if (name == "exp") fn = [](double x) { return std::exp(x); };
            else if (name == "ln") fn = [](double x) { return std::log(x); };
            else if (name == "sqrt") fn = [](double x) { return std::sqrt(x); };
            else fail("unknown name '" + name + "'");
            if (!eat('(')) fail("expected '(' after " + name);
            auto n = std::make_shared<Expr::Node>();
            n->kind = Expr::Node::Call;
            n->fn = fn;
            n->a = expr();
            if (!eat(')')) fail("expected ')'");
            return n;
        }
        fail(std::string("unexpected '") + c + "'");
    }
};

}  // namespace

Expr Expr::parse(const std::string& text, const std::vector<std::string>& vars)
{
    Parser p{text, vars};
    Expr e;
    e.root_ = p.expr();
    p.skip();
    if (p.pos != text.size()) p.fail("trailing input");
    e.text_ = text;
    e.nvars_ = vars.size();
    return e;
}

double Expr::operator()(const std::vector<double>& values) const
{
    if (!root_) throw ConfigError("empty expression");
    if (values.size() != nvars_) throw ConfigError("expression '" + text_ + "' expects " + std::to_string(nvars_) + " values");
    return root_->eval(values.data());
}

}  // namespace skyrme
