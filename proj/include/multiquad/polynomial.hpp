#pragma once

#include <utility>
#include <vector>

#include "multiquad/scalar.hpp"

namespace multiquad {

// Dense univariate polynomial, coefficients ascending. The zero polynomial is
// the empty coefficient list and has degree -1.
template <class S>
struct Poly {
    std::vector<S> c;

    Poly() = default;
    explicit Poly(std::vector<S> coeffs) : c(std::move(coeffs)) { trim(); }

    static Poly zero() { return Poly(); }
    static Poly constant(S v) { return Poly(std::vector<S>{std::move(v)}); }
    static Poly identity() { return Poly(std::vector<S>{S(0), S(1)}); } // x

    long degree() const { return static_cast<long>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }

    const S& coeff(long k) const { return c[static_cast<std::size_t>(k)]; }
    S coeff_or_zero(long k) const {
        if (k < 0 || k > degree()) return S(0);
        return c[static_cast<std::size_t>(k)];
    }
    S leading() const { return c.back(); }

    void trim() {
        while (!c.empty() && exactly_zero(c.back())) c.pop_back();
    }

    S operator()(const S& x) const {
        S acc(0);
        for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
        return acc;
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<S> out(std::max(a.c.size(), b.c.size()), S(0));
        for (std::size_t i = 0; i < a.c.size(); ++i) out[i] = out[i] + a.c[i];
        for (std::size_t i = 0; i < b.c.size(); ++i) out[i] = out[i] + b.c[i];
        return Poly(std::move(out));
    }
    friend Poly operator-(const Poly& a, const Poly& b) {
        std::vector<S> out(std::max(a.c.size(), b.c.size()), S(0));
        for (std::size_t i = 0; i < a.c.size(); ++i) out[i] = out[i] + a.c[i];
        for (std::size_t i = 0; i < b.c.size(); ++i) out[i] = out[i] - b.c[i];
        return Poly(std::move(out));
    }
    friend Poly operator-(const Poly& a) { return Poly<S>() - a; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<S> out(a.c.size() + b.c.size() - 1, S(0));
        for (std::size_t i = 0; i < a.c.size(); ++i)
            for (std::size_t j = 0; j < b.c.size(); ++j) out[i + j] = out[i + j] + a.c[i] * b.c[j];
        return Poly(std::move(out));
    }
    friend Poly operator*(const S& s, const Poly& p) {
        std::vector<S> out = p.c;
        for (auto& v : out) v = s * v;
        return Poly(std::move(out));
    }
    friend bool operator==(const Poly& a, const Poly& b) {
        if (a.c.size() != b.c.size()) return false;
        for (std::size_t i = 0; i < a.c.size(); ++i)
            if (!(a.c[i] == b.c[i])) return false;
        return true;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    Poly shifted_up() const { // multiply by x
        if (is_zero()) return Poly();
        std::vector<S> out;
        out.reserve(c.size() + 1);
        out.push_back(S(0));
        out.insert(out.end(), c.begin(), c.end());
        return Poly(std::move(out));
    }
};

template <class S>
Poly<S> derivative(const Poly<S>& p) {
    if (p.degree() < 1) return Poly<S>();
    std::vector<S> out(p.c.size() - 1, S(0));
    for (std::size_t i = 1; i < p.c.size(); ++i) out[i - 1] = S(static_cast<long>(i)) * p.c[i];
    return Poly<S>(std::move(out));
}

// quotient and remainder of p by a general divisor (field coefficients)
template <class S>
std::pair<Poly<S>, Poly<S>> divmod(const Poly<S>& p, const Poly<S>& d) {
    if (d.is_zero()) throw Error("poly divmod: zero divisor");
    std::vector<S> rem = p.c;
    long dd = d.degree();
    long pd = p.degree();
    if (pd < dd) return {Poly<S>(), p};
    std::vector<S> quot(static_cast<std::size_t>(pd - dd + 1), S(0));
    for (long k = pd; k >= dd; --k) {
        S f = rem[static_cast<std::size_t>(k)] / d.c[static_cast<std::size_t>(dd)];
        quot[static_cast<std::size_t>(k - dd)] = f;
        if (!exactly_zero(f))
            for (long i = 0; i <= dd; ++i)
                rem[static_cast<std::size_t>(k - dd + i)] =
                    rem[static_cast<std::size_t>(k - dd + i)] - f * d.c[static_cast<std::size_t>(i)];
    }
    rem.resize(static_cast<std::size_t>(dd));
    return {Poly<S>(std::move(quot)), Poly<S>(std::move(rem))};
}

// evaluate with a possibly different scalar type for the point; embed maps a
// coefficient into the point's type
template <class S, class T, class Embed>
T eval_poly(const Poly<S>& p, const T& x, Embed embed) {
    T acc = make_zero(x);
    for (std::size_t i = p.c.size(); i-- > 0;) acc = acc * x + embed(p.c[i]);
    return acc;
}

template <class S>
Poly<S> make_zero(const Poly<S>&) {
    return Poly<S>();
}
template <class S>
Poly<S> make_one(const Poly<S>&) {
    return Poly<S>::constant(S(1));
}

template <class To, class From, class F>
Poly<To> poly_cast(const Poly<From>& p, F f) {
    std::vector<To> out;
    out.reserve(p.c.size());
    for (const auto& v : p.c) out.push_back(f(v));
    return Poly<To>(std::move(out));
}

// vector polynomial: one component per measure
template <class S>
using VectorPoly = std::vector<Poly<S>>;

} // namespace multiquad
