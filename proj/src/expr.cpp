#include "geoball/expr.hpp"

#include "geoball/errors.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace geoball {

namespace {

struct Parser {
    std::string_view s;
    std::size_t pos = 0;

    void skip()
    {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    [[noreturn]] void fail(const std::string& what) const
    {
        throw DomainError("expression: " + what + " at offset " + std::to_string(pos));
    }

    std::string_view atom()
    {
        skip();
        std::size_t start = pos;
        while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) && s[pos] != '(' &&
               s[pos] != ')')
            ++pos;
        if (start == pos) fail("expected a token");
        return s.substr(start, pos - start);
    }

    double number()
    {
        auto tok = atom();
        double v = 0;
        auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
            fail("expected a number, got '" + std::string(tok) + "'");
        return v;
    }

    int integer()
    {
        auto tok = atom();
        int v = 0;
        auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
            fail("expected an integer, got '" + std::string(tok) + "'");
        return v;
    }

    void expect(char c)
    {
        skip();
        if (pos >= s.size() || s[pos] != c) fail(std::string("expected '") + c + "'");
        ++pos;
    }

    bool peek(char c)
    {
        skip();
        return pos < s.size() && s[pos] == c;
    }

    ExprPtr expr()
    {
        skip();
        if (pos >= s.size()) fail("unexpected end of input");
        if (s[pos] != '(') {
            auto tok = atom();
            if (tok == "t") return Expr::variable();
            double v = 0;
            auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
                fail("unknown symbol '" + std::string(tok) + "'");
            return Expr::constant(v);
        }
        ++pos;
        auto head = atom();
        ExprPtr out;
        if (head == "sin" || head == "sinh") {
            double a = number();
            out = head == "sin" ? Expr::sin(a) : Expr::sinh(a);
        } else if (head == "+" || head == "*") {
            std::vector<ExprPtr> args;
            while (!peek(')')) args.push_back(expr());
            if (args.empty()) fail("empty argument list");
            out = head == "+" ? Expr::sum(std::move(args)) : Expr::product(std::move(args));
        } else if (head == "scale") {
            double c = number();
            out = Expr::scale(c, expr());
        } else if (head == "pow") {
            auto base = expr();
            out = Expr::power(std::move(base), integer());
        } else {
            fail("unknown operator '" + std::string(head) + "'");
        }
        expect(')');
        return out;
    }
};

} // namespace

ExprPtr Expr::parse(std::string_view text)
{
    Parser p{text};
    auto e = p.expr();
    p.skip();
    if (p.pos != text.size()) p.fail("trailing input");
    return e;
}

ExprPtr Expr::variable() { return ExprPtr(new Expr(Op::var, 0, 0, {})); }
ExprPtr Expr::constant(double v) { return ExprPtr(new Expr(Op::constant, v, 0, {})); }
ExprPtr Expr::sin(double a) { return ExprPtr(new Expr(Op::sin, a, 0, {})); }
ExprPtr Expr::sinh(double a) { return ExprPtr(new Expr(Op::sinh, a, 0, {})); }
ExprPtr Expr::sum(std::vector<ExprPtr> terms) { return ExprPtr(new Expr(Op::sum, 0, 0, std::move(terms))); }
ExprPtr Expr::product(std::vector<ExprPtr> factors)
{
    return ExprPtr(new Expr(Op::product, 0, 0, std::move(factors)));
}
ExprPtr Expr::scale(double c, ExprPtr e) { return ExprPtr(new Expr(Op::scale, c, 0, {std::move(e)})); }
ExprPtr Expr::power(ExprPtr e, int k) { return ExprPtr(new Expr(Op::power, 0, k, {std::move(e)})); }

std::string Expr::str() const
{
    std::ostringstream os;
    os.precision(17);
    switch (op_) {
    case Op::var: os << "t"; break;
    case Op::constant: os << a_; break;
    case Op::sin: os << "(sin " << a_ << ")"; break;
    case Op::sinh: os << "(sinh " << a_ << ")"; break;
    case Op::sum:
    case Op::product:
        os << (op_ == Op::sum ? "(+" : "(*");
        for (const auto& e : args_) os << " " << e->str();
        os << ")";
        break;
    case Op::scale: os << "(scale " << a_ << " " << args_[0]->str() << ")"; break;
    case Op::power: os << "(pow " << args_[0]->str() << " " << k_ << ")"; break;
    }
    return os.str();
}

} // namespace geoball
