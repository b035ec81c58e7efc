#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>

#include "multiquad/errors.hpp"

namespace multiquad {

// Exact rational scalar. Thin value wrapper around GMP's mpq_class that keeps
// everything canonicalized and adds the conversions the rest of the library
// needs (exact lift from double, "p/q" parsing, decimal parsing).
class Rat {
  public:
    Rat() : v_(0) {}
    Rat(long n) : v_(static_cast<signed long>(n)) {}
    Rat(int n) : v_(n) {}
    Rat(long num, long den) : v_(static_cast<signed long>(num), static_cast<signed long>(den)) {
        if (den == 0) throw Error("Rat: zero denominator");
        v_.canonicalize();
    }
    explicit Rat(const mpq_class& v) : v_(v) { v_.canonicalize(); }

    // exact dyadic lift; every finite double is a rational
    static Rat from_double(double x) {
        if (!std::isfinite(x)) throw Error("Rat: non-finite double");
        return Rat(mpq_class(x));
    }

    // accepts "p/q", "p", "-p/q", decimals like "1.25" or "-0.5e-3"
    static Rat parse(const std::string& s);

    double to_double() const { return v_.get_d(); }
    bool is_zero() const { return sgn(v_) == 0; }
    int sign() const { return sgn(v_); }
    Rat abs() const { return Rat(mpq_class(::abs(v_))); }
    double abs_double() const { return std::fabs(v_.get_d()); }

    std::string str() const {
        if (v_.get_den() == 1) return v_.get_num().get_str();
        return v_.get_num().get_str() + "/" + v_.get_den().get_str();
    }

    const mpq_class& raw() const { return v_; }

    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
    Rat& operator/=(const Rat& o) {
        if (o.is_zero()) throw Error("Rat: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rat operator+(Rat a, const Rat& b) { a += b; return a; }
    friend Rat operator-(Rat a, const Rat& b) { a -= b; return a; }
    friend Rat operator*(Rat a, const Rat& b) { a *= b; return a; }
    friend Rat operator/(Rat a, const Rat& b) { a /= b; return a; }
    friend Rat operator-(const Rat& a) { return Rat(mpq_class(-a.v_)); }
    friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rat& a, const Rat& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rat& a, const Rat& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rat& a, const Rat& b) { return a.v_ >= b.v_; }

    // integer power, negative exponents allowed for nonzero base
    Rat pow(long e) const {
        if (e < 0) {
            if (is_zero()) throw Error("Rat: 0^negative");
            return (Rat(1) / *this).pow(-e);
        }
        Rat base = *this, acc = 1;
        while (e > 0) {
            if (e & 1) acc *= base;
            base *= base;
            e >>= 1;
        }
        return acc;
    }

  private:
    mpq_class v_;
};

inline Rat Rat::parse(const std::string& s) {
    std::string t;
    t.reserve(s.size());
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
    if (t.empty()) throw BadInput("empty rational literal");

    auto is_int = [](const std::string& u) {
        if (u.empty()) return false;
        std::size_t i = (u[0] == '+' || u[0] == '-') ? 1 : 0;
        if (i == u.size()) return false;
        for (; i < u.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(u[i]))) return false;
        return true;
    };

    auto slash = t.find('/');
    if (slash != std::string::npos) {
        std::string num = t.substr(0, slash), den = t.substr(slash + 1);
        if (!is_int(num) || !is_int(den)) throw BadInput("bad rational literal: " + s);
        mpq_class v;
        if (v.set_str(num + "/" + den, 10) != 0) throw BadInput("bad rational literal: " + s);
        if (v.get_den() == 0) throw BadInput("zero denominator: " + s);
        v.canonicalize();
        return Rat(v);
    }
    if (is_int(t)) {
        mpq_class v;
        if (v.set_str(t, 10) != 0) throw BadInput("bad rational literal: " + s);
        return Rat(v);
    }

    // decimal with optional exponent: sign? digits [. digits] ([eE] sign? digits)?
    std::string mant = t;
    long expo = 0;
    auto epos = t.find_first_of("eE");
    if (epos != std::string::npos) {
        mant = t.substr(0, epos);
        std::string es = t.substr(epos + 1);
        if (!is_int(es)) throw BadInput("bad rational literal: " + s);
        expo = std::stol(es);
    }
    bool neg = false;
    std::size_t i = 0;
    if (!mant.empty() && (mant[0] == '+' || mant[0] == '-')) {
        neg = mant[0] == '-';
        i = 1;
    }
    std::string digits;
    long frac_digits = 0;
    bool seen_dot = false, seen_digit = false;
    for (; i < mant.size(); ++i) {
        char c = mant[i];
        if (c == '.') {
            if (seen_dot) throw BadInput("bad rational literal: " + s);
            seen_dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            seen_digit = true;
            if (seen_dot) ++frac_digits;
        } else {
            throw BadInput("bad rational literal: " + s);
        }
    }
    if (!seen_digit) throw BadInput("bad rational literal: " + s);
    mpz_class n(digits.empty() ? "0" : digits, 10); // explicit base: "025" must not read as octal
    if (neg) n = -n;
    mpq_class v(n);
    long net = expo - frac_digits;
    mpz_class p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(net < 0 ? -net : net));
    if (net >= 0)
        v *= mpq_class(p10);
    else
        v /= mpq_class(p10);
    v.canonicalize();
    return Rat(v);
}

// ---- scalar protocol used by the templated numerics ----

inline double approx_abs(double x) { return std::fabs(x); }
inline double approx_abs(const Rat& x) { return x.abs_double(); }
inline double approx_abs(const std::complex<double>& x) { return std::abs(x); }

template <class S>
inline constexpr bool scalar_is_exact_v = false;
template <>
inline constexpr bool scalar_is_exact_v<Rat> = true;

inline bool exactly_zero(double x) { return x == 0.0; }
inline bool exactly_zero(const Rat& x) { return x.is_zero(); }
inline bool exactly_zero(const std::complex<double>& x) { return x == std::complex<double>(0.0); }

// zero/one "like" a given value; overloaded by scalar-like types that carry
// context (e.g. residue-ring elements)
template <class T>
T make_zero(const T&) {
    return T(0);
}
template <class T>
T make_one(const T&) {
    return T(1);
}

// backend conversion from the exact providers
template <class S>
S to_scalar(const Rat& x);
template <>
inline Rat to_scalar<Rat>(const Rat& x) {
    return x;
}
template <>
inline double to_scalar<double>(const Rat& x) {
    return x.to_double();
}
template <>
inline std::complex<double> to_scalar<std::complex<double>>(const Rat& x) {
    return {x.to_double(), 0.0};
}

enum class Backend { rational, float64 };

inline std::string backend_name(Backend b) {
    return b == Backend::rational ? "rational" : "float64";
}

} // namespace multiquad
