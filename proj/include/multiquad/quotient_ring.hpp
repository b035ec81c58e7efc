#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "multiquad/polynomial.hpp"
#include "multiquad/scalar.hpp"

namespace multiquad {

// monic gcd over the rationals; zero polynomial when both inputs vanish
inline Poly<Rat> poly_gcd(Poly<Rat> a, Poly<Rat> b) {
    while (!b.is_zero()) {
        Poly<Rat> r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero()) return a;
    return (Rat(1) / a.leading()) * a;
}

struct PolyEgcd {
    Poly<Rat> g, u, v; // u*a + v*b = g
};

inline PolyEgcd poly_egcd(const Poly<Rat>& a, const Poly<Rat>& b) {
    Poly<Rat> r0 = a, r1 = b;
    Poly<Rat> u0 = Poly<Rat>::constant(Rat(1)), u1;
    Poly<Rat> v0, v1 = Poly<Rat>::constant(Rat(1));
    while (!r1.is_zero()) {
        auto [q, r2] = divmod(r0, r1);
        Poly<Rat> u2 = u0 - q * u1;
        Poly<Rat> v2 = v0 - q * v1;
        r0 = std::move(r1);
        r1 = std::move(r2);
        u0 = std::move(u1);
        u1 = std::move(u2);
        v0 = std::move(v1);
        v1 = std::move(v2);
    }
    return {std::move(r0), std::move(u0), std::move(v0)};
}

class NodeAlgebra;

// Element of the residue class ring of rational polynomials modulo the node
// polynomial. An element without an algebra pointer is a plain rational
// constant; it promotes on contact with a bound element, which lets the type
// satisfy the generic scalar interface (literals like S(0) and S(1) work).
struct RingElem {
    const NodeAlgebra* alg = nullptr;
    std::vector<Rat> c;

    RingElem() = default;
    RingElem(int v) : c(v == 0 ? std::vector<Rat>{} : std::vector<Rat>{Rat(v)}) {}
    RingElem(long v) : c(v == 0 ? std::vector<Rat>{} : std::vector<Rat>{Rat(v)}) {}
    explicit RingElem(const Rat& v) : c(v.is_zero() ? std::vector<Rat>{} : std::vector<Rat>{v}) {}
    RingElem(const NodeAlgebra* a, std::vector<Rat> cc) : alg(a), c(std::move(cc)) { trim(); }

    void trim() {
        while (!c.empty() && c.back().is_zero()) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    bool is_constant() const { return c.size() <= 1; }
    Rat constant_value() const { return c.empty() ? Rat(0) : c[0]; }
    Poly<Rat> as_poly() const { return c.empty() ? Poly<Rat>() : Poly<Rat>(c); }
};

inline const NodeAlgebra* merged_algebra(const RingElem& a, const RingElem& b) {
    if (a.alg && b.alg && a.alg != b.alg)
        throw Error("mixing elements of different node algebras");
    return a.alg ? a.alg : b.alg;
}

class NodeAlgebra {
  public:
    explicit NodeAlgebra(Poly<Rat> modulus) : mod_(std::move(modulus)) {
        if (mod_.degree() < 1) throw Error("node polynomial must have degree >= 1");
        if (!(mod_.leading() == Rat(1))) throw Error("node polynomial must be monic");
        const long d = mod_.degree();
        // Newton identities give s_0..s_{d-1} (all the trace needs) and then
        // extend past d through the recurrence the modulus imposes
        ps_.resize(static_cast<std::size_t>(2 * d + 1));
        ps_[0] = Rat(d);
        for (long k = 1; k <= 2 * d; ++k) {
            Rat s = (k <= d) ? Rat(-k) * mod_.coeff(d - k) : Rat(0);
            for (long i = 1; i <= std::min(k - 1, d); ++i)
                s = s - mod_.coeff(d - i) * ps_[static_cast<std::size_t>(k - i)];
            ps_[static_cast<std::size_t>(k)] = s;
        }
    }

    long degree() const { return mod_.degree(); }
    const Poly<Rat>& modulus() const { return mod_; }
    const std::vector<Rat>& power_sums() const { return ps_; }

    RingElem reduce(const Poly<Rat>& p) const {
        Poly<Rat> rem = (p.degree() < mod_.degree()) ? p : divmod(p, mod_).second;
        std::vector<Rat> cc(rem.c.begin(), rem.c.end());
        return RingElem(this, std::move(cc));
    }

    RingElem constant(const Rat& v) const {
        RingElem e(v);
        e.alg = this;
        return e;
    }
    RingElem zero() const { return constant(Rat(0)); }
    RingElem one() const { return constant(Rat(1)); }
    RingElem generator() const { return reduce(Poly<Rat>::identity()); }

    // sum of the element's values over all roots of the node polynomial
    Rat trace(const RingElem& e) const {
        if (e.alg && e.alg != this) throw Error("element belongs to a different node algebra");
        Rat acc(0);
        for (std::size_t t = 0; t < e.c.size(); ++t) acc = acc + e.c[t] * ps_[t];
        return acc;
    }

    RingElem inverse(const RingElem& e) const {
        if (e.alg && e.alg != this) throw Error("element belongs to a different node algebra");
        if (e.is_zero()) throw SingularSystem("zero is not invertible in the node algebra");
        if (e.is_constant()) return constant(Rat(1) / e.constant_value());
        auto eg = poly_egcd(e.as_poly(), mod_);
        if (eg.g.degree() != 0)
            throw SingularSystem("element is a zero divisor modulo the node polynomial");
        Poly<Rat> inv = (Rat(1) / eg.g.coeff(0)) * eg.u;
        return reduce(inv);
    }

  private:
    Poly<Rat> mod_;
    std::vector<Rat> ps_;
};

inline RingElem operator+(const RingElem& a, const RingElem& b) {
    const NodeAlgebra* alg = merged_algebra(a, b);
    std::vector<Rat> c(std::max(a.c.size(), b.c.size()), Rat(0));
    for (std::size_t i = 0; i < a.c.size(); ++i) c[i] = c[i] + a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) c[i] = c[i] + b.c[i];
    return RingElem(alg, std::move(c));
}

inline RingElem operator-(const RingElem& a, const RingElem& b) {
    const NodeAlgebra* alg = merged_algebra(a, b);
    std::vector<Rat> c(std::max(a.c.size(), b.c.size()), Rat(0));
    for (std::size_t i = 0; i < a.c.size(); ++i) c[i] = c[i] + a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) c[i] = c[i] - b.c[i];
    return RingElem(alg, std::move(c));
}

inline RingElem operator*(const RingElem& a, const RingElem& b) {
    const NodeAlgebra* alg = merged_algebra(a, b);
    if (a.is_zero() || b.is_zero()) return RingElem(alg, {});
    std::vector<Rat> c(a.c.size() + b.c.size() - 1, Rat(0));
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j) c[i + j] = c[i + j] + a.c[i] * b.c[j];
    if (alg && static_cast<long>(c.size()) > alg->degree())
        return alg->reduce(Poly<Rat>(std::move(c)));
    return RingElem(alg, std::move(c));
}

inline RingElem operator/(const RingElem& a, const RingElem& b) {
    const NodeAlgebra* alg = merged_algebra(a, b);
    if (b.is_constant()) {
        if (b.constant_value().is_zero()) throw ZeroPivot("division by zero in the node algebra");
        const Rat inv = Rat(1) / b.constant_value();
        std::vector<Rat> c = a.c;
        for (auto& v : c) v = v * inv;
        return RingElem(alg, std::move(c));
    }
    if (!alg) throw Error("non-constant ring element without an algebra");
    return a * alg->inverse(b);
}

inline bool operator==(const RingElem& a, const RingElem& b) {
    if (a.alg && b.alg && a.alg != b.alg) return false;
    if (a.c.size() != b.c.size()) return false;
    for (std::size_t i = 0; i < a.c.size(); ++i)
        if (!(a.c[i] == b.c[i])) return false;
    return true;
}
inline bool operator!=(const RingElem& a, const RingElem& b) { return !(a == b); }

template <>
inline constexpr bool scalar_is_exact_v<RingElem> = true;

inline bool exactly_zero(const RingElem& e) { return e.is_zero(); }

inline double approx_abs(const RingElem& e) {
    double m = 0;
    for (const auto& v : e.c) m = std::max(m, v.abs_double());
    return m;
}

inline RingElem make_zero(const RingElem& proto) { return RingElem(proto.alg, {}); }
inline RingElem make_one(const RingElem& proto) { return RingElem(proto.alg, {Rat(1)}); }

// value of the residue class representative at a floating point
inline double eval_double(const RingElem& e, double x) {
    double acc = 0;
    for (std::size_t i = e.c.size(); i-- > 0;) acc = acc * x + e.c[i].to_double();
    return acc;
}

} // namespace multiquad
