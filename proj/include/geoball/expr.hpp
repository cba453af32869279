#pragma once

#include "geoball/jet.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace geoball {

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Expression tree for custom warping functions, written in prefix notation:
//
//   t                 the radial variable
//   2.5               a constant
//   (sin a)           sin(a t)
//   (sinh a)          sinh(a t)
//   (+ e1 e2 ...)     sum
//   (* e1 e2 ...)     product
//   (scale c e)       c e
//   (pow e k)         e^k, integer k
//
// Example: (+ t (scale 0.16666666666666666 (pow t 3)))
class Expr {
public:
    enum class Op { var, constant, sin, sinh, sum, product, scale, power };

    static ExprPtr parse(std::string_view text);

    static ExprPtr variable();
    static ExprPtr constant(double v);
    static ExprPtr sin(double a);
    static ExprPtr sinh(double a);
    static ExprPtr sum(std::vector<ExprPtr> terms);
    static ExprPtr product(std::vector<ExprPtr> factors);
    static ExprPtr scale(double c, ExprPtr e);
    static ExprPtr power(ExprPtr e, int k);

    Op op() const { return op_; }
    std::string str() const;

    template <class T, int N>
    Jet<T, N> jet(T t) const;

private:
    Expr(Op op, double a, int k, std::vector<ExprPtr> args)
        : op_(op), a_(a), k_(k), args_(std::move(args))
    {}

    Op op_;
    double a_;
    int k_;
    std::vector<ExprPtr> args_;
};

template <class T, int N>
Jet<T, N> Expr::jet(T t) const
{
    switch (op_) {
    case Op::var:
        return Jet<T, N>::variable(t);
    case Op::constant:
        return Jet<T, N>(T(a_));
    case Op::sin: {
        Jet<T, N> s, c;
        sincos_linear(T(a_) * t, T(a_), s, c);
        return s;
    }
    case Op::sinh: {
        Jet<T, N> s, c;
        sinhcosh_linear(T(a_) * t, T(a_), s, c);
        return s;
    }
    case Op::sum: {
        Jet<T, N> r;
        for (const auto& e : args_) r += e->jet<T, N>(t);
        return r;
    }
    case Op::product: {
        Jet<T, N> r(T(1));
        for (const auto& e : args_) r = r * e->jet<T, N>(t);
        return r;
    }
    case Op::scale:
        return args_[0]->jet<T, N>(t) * T(a_);
    case Op::power:
        return pow(args_[0]->jet<T, N>(t), k_);
    }
    return Jet<T, N>();
}

} // namespace geoball
