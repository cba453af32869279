#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace geoball {

// Truncated Taylor series c[0] + c[1] h + ... + c[N] h^N about a base point.
// Derivatives are recovered as k! c[k].
template <class T, int N = 6>
struct Jet {
    static constexpr int order = N;
    std::array<T, N + 1> c{};

    Jet() = default;
    Jet(T v) { c[0] = v; }

    static Jet variable(T t0)
    {
        Jet j(t0);
        if constexpr (N >= 1) j.c[1] = T(1);
        return j;
    }

    T value() const { return c[0]; }

    T derivative(int k) const
    {
        T fact = 1;
        for (int i = 2; i <= k; ++i) fact *= T(i);
        return c[k] * fact;
    }

    Jet& operator+=(const Jet& o)
    {
        for (int i = 0; i <= N; ++i) c[i] += o.c[i];
        return *this;
    }
    Jet& operator-=(const Jet& o)
    {
        for (int i = 0; i <= N; ++i) c[i] -= o.c[i];
        return *this;
    }
    Jet& operator*=(T s)
    {
        for (auto& x : c) x *= s;
        return *this;
    }
};

template <class T, int N>
Jet<T, N> operator+(Jet<T, N> a, const Jet<T, N>& b) { return a += b; }
template <class T, int N>
Jet<T, N> operator-(Jet<T, N> a, const Jet<T, N>& b) { return a -= b; }
template <class T, int N>
Jet<T, N> operator-(Jet<T, N> a) { return a *= T(-1); }
template <class T, int N>
Jet<T, N> operator*(Jet<T, N> a, T s) { return a *= s; }
template <class T, int N>
Jet<T, N> operator*(T s, Jet<T, N> a) { return a *= s; }

template <class T, int N>
Jet<T, N> operator*(const Jet<T, N>& a, const Jet<T, N>& b)
{
    Jet<T, N> r;
    for (int i = 0; i <= N; ++i)
        for (int k = 0; k <= i; ++k) r.c[i] += a.c[k] * b.c[i - k];
    return r;
}

template <class T, int N>
Jet<T, N> operator/(const Jet<T, N>& a, const Jet<T, N>& b)
{
    Jet<T, N> q;
    for (int i = 0; i <= N; ++i) {
        T s = a.c[i];
        for (int k = 1; k <= i; ++k) s -= b.c[k] * q.c[i - k];
        q.c[i] = s / b.c[0];
    }
    return q;
}

// d/dh of the series, truncated to the same order.
template <class T, int N>
Jet<T, N> differentiate(const Jet<T, N>& a)
{
    Jet<T, N> r;
    for (int i = 0; i < N; ++i) r.c[i] = T(i + 1) * a.c[i + 1];
    return r;
}

template <class T, int N>
Jet<T, N> pow(const Jet<T, N>& a, int k)
{
    Jet<T, N> r(T(1));
    Jet<T, N> base = a;
    if (k < 0) {
        base = Jet<T, N>(T(1)) / a;
        k = -k;
    }
    while (k > 0) {
        if (k & 1) r = r * base;
        base = base * base;
        k >>= 1;
    }
    return r;
}

// sin and cos of a t + b h: closed-form coefficients a^k sin(x + k pi/2) / k!.
template <class T, int N>
void sincos_linear(T x, T a, Jet<T, N>& s, Jet<T, N>& co)
{
    using std::cos;
    using std::sin;
    T sx = sin(x), cx = cos(x);
    T p = 1;
    for (int k = 0; k <= N; ++k) {
        if (k > 0) p *= a / T(k);
        switch (k % 4) {
        case 0: s.c[k] = p * sx; co.c[k] = p * cx; break;
        case 1: s.c[k] = p * cx; co.c[k] = -p * sx; break;
        case 2: s.c[k] = -p * sx; co.c[k] = -p * cx; break;
        default: s.c[k] = -p * cx; co.c[k] = p * sx; break;
        }
    }
}

template <class T, int N>
void sinhcosh_linear(T x, T a, Jet<T, N>& s, Jet<T, N>& co)
{
    using std::cosh;
    using std::sinh;
    T sx = sinh(x), cx = cosh(x);
    T p = 1;
    for (int k = 0; k <= N; ++k) {
        if (k > 0) p *= a / T(k);
        s.c[k] = p * (k % 2 == 0 ? sx : cx);
        co.c[k] = p * (k % 2 == 0 ? cx : sx);
    }
}

} // namespace geoball
