#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "multiquad/log.hpp"
#include "multiquad/quotient_ring.hpp"
#include "multiquad/spectral.hpp"

namespace multiquad {

struct QuadOptions {
    BuildTolerances build;
    SpectralOptions spectral;
    double tau_w = 1e-9;      // weight route agreement, relative to the largest weight per measure
    double tau_ex_rel = 1e-9; // exactness certificate, relative part
    double tau_ex_abs = 1e-12;
    double warn_inner = 1e-8; // type I normalizer warning threshold
    long cert_extra = 2;      // certificate degrees past the guarantee
};

// C_{j,k}: the integral of P_{k-1} against measure j, for 1 <= k <= j <= r.
// Lower triangular with nonzero diagonal. Computed twice: moment sums of the
// solved polynomials, and the moment determinant expansion with the size-(k-1)
// principal determinant as denominator.
template <class S>
Mat<S> c_constants(const MeasureSystem& sys, const std::vector<Poly<S>>& p,
                   const QuadOptions& opt = {}) {
    const int r = sys.r;
    if (static_cast<long>(p.size()) < r)
        throw Error("c_constants needs the polynomials P_0..P_{r-1}");
    Mat<S> out(r, r);
    S den_prev(1); // det of the size-(k-1) moment matrix
    std::vector<S> dets(static_cast<std::size_t>(r + 1), S(1));
    for (int k = 1; k <= r; ++k)
        dets[static_cast<std::size_t>(k)] = det_elimination(moment_matrix<S>(sys, k).m);
    double scale = 0;
    for (int j = 1; j <= r; ++j)
        for (int k = 1; k <= j; ++k) {
            S direct(0);
            const Poly<S>& pk = p[static_cast<std::size_t>(k - 1)];
            for (long t = 0; t <= pk.degree(); ++t)
                direct = direct + pk.coeff(t) * sys.moment<S>(j, t);
            // determinant route
            const Mat<S> dk = moment_matrix<S>(sys, k).m;
            den_prev = dets[static_cast<std::size_t>(k - 1)];
            if (exactly_zero(den_prev))
                throw NotNormal("index " + std::to_string(k - 1) + " is not normal");
            S expansion(0);
            for (int i = 1; i <= k; ++i) {
                Mat<S> minor(k - 1, k - 1);
                for (long rr = 0, mr = 0; rr < k; ++rr) {
                    if (rr == k - 1) continue;
                    for (long cc = 0, mc = 0; cc < k; ++cc) {
                        if (cc == i - 1) continue;
                        minor.at(mr, mc) = dk.at(rr, cc);
                        ++mc;
                    }
                    ++mr;
                }
                S term = sys.moment<S>(j, i - 1) * det_elimination(minor) / den_prev;
                if ((k + i) % 2 != 0) term = S(0) - term;
                expansion = expansion + term;
            }
            scale = std::max({scale, approx_abs(direct), 1.0});
            S diff = direct - expansion;
            bool bad;
            if constexpr (scalar_is_exact_v<S>)
                bad = !exactly_zero(diff);
            else
                bad = approx_abs(diff) > opt.build.tau_consist * scale;
            if (bad)
                throw FormulaMismatch("pairing constant (" + std::to_string(j) + "," +
                                      std::to_string(k) + ") differs between routes");
            out.at(j - 1, k - 1) = direct;
        }
    for (int j = 1; j <= r; ++j)
        if (exactly_zero(out.at(j - 1, j - 1)))
            throw DegenerateInnerProduct("diagonal pairing constant " + std::to_string(j) + " vanishes");
    return out;
}

// starting values from the pairing constants: back substitution of the
// triangular system with rows (0,..,0,C_{k,k},..,C_{i,k}) and unit right side
template <class S>
Mat<S> a_from_c(const Mat<S>& c) {
    const int r = static_cast<int>(c.rows);
    Mat<S> a(r, r);
    for (int i = 1; i <= r; ++i) {
        if (exactly_zero(c.at(i - 1, i - 1)))
            throw SingularTriangular("diagonal pairing constant " + std::to_string(i) + " vanishes");
        a.at(i - 1, i - 1) = S(1) / c.at(i - 1, i - 1);
        for (int k = i - 1; k >= 1; --k) {
            S acc(0);
            for (int j = k + 1; j <= i; ++j) acc = acc + c.at(j - 1, k - 1) * a.at(i - 1, j - 1);
            if (exactly_zero(c.at(k - 1, k - 1)))
                throw SingularTriangular("diagonal pairing constant " + std::to_string(k) + " vanishes");
            a.at(i - 1, k - 1) = (S(0) - acc) / c.at(k - 1, k - 1);
        }
    }
    return a;
}

// pairing constants from the starting values: forward substitution of the
// biorthogonality relations sum_{c=i}^t A_{t,c} C_{c,i} = delta_{t,i}
template <class S>
Mat<S> c_from_a(const Mat<S>& a) {
    const int r = static_cast<int>(a.rows);
    Mat<S> c(r, r);
    for (int i = 1; i <= r; ++i) {
        if (exactly_zero(a.at(i - 1, i - 1)))
            throw SingularTriangular("diagonal starting value " + std::to_string(i) + " vanishes");
        c.at(i - 1, i - 1) = S(1) / a.at(i - 1, i - 1);
        for (int t = i + 1; t <= r; ++t) {
            S acc(0);
            for (int cc = i; cc < t; ++cc) acc = acc + a.at(t - 1, cc - 1) * c.at(cc - 1, i - 1);
            if (exactly_zero(a.at(t - 1, t - 1)))
                throw SingularTriangular("diagonal starting value " + std::to_string(t) + " vanishes");
            c.at(t - 1, i - 1) = (S(0) - acc) / a.at(t - 1, t - 1);
        }
    }
    return c;
}

struct CertificateCell {
    int j = 0;
    long degree = 0;
    double quad = 0;
    double exact = 0;
    double residual = 0;
    bool within = false;
    bool beyond_guarantee = false;
};

struct Certificate {
    std::vector<long> guaranteed; // per measure: n-1+nu_n(j)
    std::vector<long> observed;   // longest contiguous run of passing degrees
    std::vector<CertificateCell> cells;
    bool order_ok = false;
    bool witness_available = false;
    double witness_quad = 0;
    double witness_integral = 0;
    double witness_gap = 0;
};

struct Rule {
    long n = 0;
    int r = 0;
    Backend backend = Backend::float64;
    NodeSet nodes;
    std::vector<std::vector<Cplx>> weights_c; // [measure][node]
    std::vector<std::vector<double>> weights; // real parts
    std::vector<double> weight_sums;
    std::vector<long> k_index; // per node: leading nonzero left component, 1-based
    std::vector<long> i_index; // per node: kernel shift used
    Certificate cert;
};

namespace detail {

inline RecurrenceTable<double> table_to_double(const RecurrenceTable<Rat>& t) {
    return t.cast<double>([](const Rat& v) { return v.to_double(); });
}
inline Mat<double> mat_to_double(const Mat<Rat>& m) {
    return m.cast<double>([](const Rat& v) { return v.to_double(); });
}

// Interpolatory weights at the rule's nodes: each Lagrange basis polynomial is
// the node polynomial deflated by its node, integrated by moment sums. Real
// nodes lift to exact rationals, so those sums carry no rounding at all; the
// occasional complex node set falls back to complex double arithmetic.
inline std::vector<std::vector<Cplx>> interpolatory_weights(const MeasureSystem& sys,
                                                            const Poly<Rat>& pn,
                                                            const std::vector<Cplx>& x) {
    const int r = sys.r;
    const long n = pn.degree();
    std::vector<std::vector<Cplx>> w(static_cast<std::size_t>(r),
                                     std::vector<Cplx>(static_cast<std::size_t>(n)));
    for (long l = 0; l < n; ++l)
        for (long m = l + 1; m < n; ++m)
            if (x[static_cast<std::size_t>(l)] == x[static_cast<std::size_t>(m)])
                throw DuplicateNodes("coincident nodes, interpolation undefined");
    for (long l = 0; l < n; ++l) {
        const Cplx xl = x[static_cast<std::size_t>(l)];
        if (xl.imag() == 0.0) {
            const Rat xh = Rat::from_double(xl.real());
            std::vector<Rat> q(static_cast<std::size_t>(n), Rat(0));
            q[static_cast<std::size_t>(n - 1)] = pn.coeff(n);
            for (long k = n - 1; k >= 1; --k)
                q[static_cast<std::size_t>(k - 1)] = pn.coeff(k) + xh * q[static_cast<std::size_t>(k)];
            Rat denom(0);
            for (long t = n - 1; t >= 0; --t) denom = denom * xh + q[static_cast<std::size_t>(t)];
            if (denom.is_zero()) throw DuplicateNodes("deflated polynomial vanishes at its own node");
            for (int j = 1; j <= r; ++j) {
                Rat acc(0);
                for (long t = 0; t < n; ++t)
                    acc += q[static_cast<std::size_t>(t)] * sys.moment_rat(j, t);
                w[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(l)] =
                    Cplx((acc / denom).to_double(), 0.0);
            }
        } else {
            std::vector<Cplx> q(static_cast<std::size_t>(n));
            q[static_cast<std::size_t>(n - 1)] = pn.coeff(n).to_double();
            for (long k = n - 1; k >= 1; --k)
                q[static_cast<std::size_t>(k - 1)] =
                    Cplx(pn.coeff(k).to_double(), 0) + xl * q[static_cast<std::size_t>(k)];
            Cplx denom = 0;
            for (long t = n - 1; t >= 0; --t) denom = denom * xl + q[static_cast<std::size_t>(t)];
            if (std::abs(denom) == 0.0)
                throw DuplicateNodes("deflated polynomial vanishes at its own node");
            for (int j = 1; j <= r; ++j) {
                Cplx acc = 0;
                for (long t = 0; t < n; ++t)
                    acc += q[static_cast<std::size_t>(t)] * sys.moment<double>(j, t);
                w[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(l)] = acc / denom;
            }
        }
    }
    return w;
}

inline Rule build_rule_impl(const MeasureSystem& sys, long n, const QuadOptions& opt) {
    if (n < 1) throw BadInput("quadrature rule needs n >= 1");
    const int r = sys.r;
    // the ladder is built exactly and rounded once; the literal float ladder
    // stays available separately but is not used to place nodes
    LadderData<Rat> lad = build_ladder<Rat>(sys, std::max<long>(n, r) - 1, opt.build);
    RecurrenceTable<double> tbl = table_to_double(lad.table);
    Mat<double> initials = mat_to_double(lad.initials);
    Mat<Rat> c_exact = c_constants<Rat>(sys, lad.p, opt);
    {
        // starting values and pairing constants must be mutually inverse
        Mat<Rat> c_round = c_from_a(lad.initials);
        for (int j = 1; j <= r; ++j)
            for (int k = 1; k <= j; ++k)
                if (!exactly_zero(c_round.at(j - 1, k - 1) - c_exact.at(j - 1, k - 1)))
                    throw FormulaMismatch("pairing constants disagree with the starting values");
    }
    Mat<double> cmat = mat_to_double(c_exact);

    Rule rule;
    rule.n = n;
    rule.r = r;
    rule.backend = Backend::float64;
    SpectralDecomposition dec = spectral_decomposition(tbl, initials, n, opt.spectral);
    rule.nodes = dec.nodes;
    rule.weights_c.assign(static_cast<std::size_t>(r),
                          std::vector<Cplx>(static_cast<std::size_t>(n)));
    for (long l = 0; l < n; ++l) {
        const EigenPair& pr = dec.pairs[static_cast<std::size_t>(l)];
        rule.k_index.push_back(pr.k);
        rule.i_index.push_back(pr.i);
        double umax = 0, vmax = 0;
        for (const auto& c : pr.left) umax = std::max(umax, std::abs(c));
        for (const auto& c : pr.right) vmax = std::max(vmax, std::abs(c));
        const double inner_scale = std::max(umax * vmax, 1e-300);
        if (std::abs(pr.inner) == 0)
            throw DegenerateInnerProduct("left/right eigenvector pairing vanishes at node " +
                                         std::to_string(l));
        if (std::abs(pr.inner) < opt.warn_inner * inner_scale)
            log_warning("type I normalizer is small at node " + std::to_string(l) + ": " +
                        std::to_string(std::abs(pr.inner)));
        for (int j = 1; j <= r; ++j) {
            Cplx acc = 0;
            for (long k = 1; k <= std::min<long>(j, n); ++k)
                acc += cmat.at(j - 1, k - 1) * pr.left[static_cast<std::size_t>(k - 1)];
            rule.weights_c[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(l)] =
                acc / pr.inner;
        }
    }

    {
        auto wi = interpolatory_weights(sys, lad.p[static_cast<std::size_t>(n)], rule.nodes.x);
        for (int j = 1; j <= r; ++j) {
            double wmax = 0;
            for (long l = 0; l < n; ++l)
                wmax = std::max(wmax,
                                std::abs(rule.weights_c[static_cast<std::size_t>(j - 1)]
                                                       [static_cast<std::size_t>(l)]));
            const double tol = opt.tau_w * std::max(wmax, 1e-300);
            for (long l = 0; l < n; ++l) {
                const Cplx d = rule.weights_c[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(l)] -
                               wi[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(l)];
                if (std::abs(d) > tol)
                    throw WeightMismatch("weight routes disagree for measure " + std::to_string(j) +
                                         " at node " + std::to_string(l));
            }
        }
    }

    rule.weights.assign(static_cast<std::size_t>(r), std::vector<double>(static_cast<std::size_t>(n)));
    rule.weight_sums.assign(static_cast<std::size_t>(r), 0.0);
    for (int j = 0; j < r; ++j) {
        double s = 0;
        for (long l = 0; l < n; ++l) {
            rule.weights[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)] =
                rule.weights_c[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)].real();
            s += rule.weights[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)];
        }
        rule.weight_sums[static_cast<std::size_t>(j)] = s;
    }

    // exactness certificate across the guaranteed grid plus a margin
    const MultiIndex nu = MultiIndex::proper(n, r);
    Certificate& cert = rule.cert;
    cert.order_ok = true;
    for (int j = 1; j <= r; ++j) {
        const long guaranteed = n - 1 + nu(j);
        cert.guaranteed.push_back(guaranteed);
        long observed = -1;
        bool run_alive = true;
        for (long d = 0; d <= guaranteed + opt.cert_extra; ++d) {
            CertificateCell cell;
            cell.j = j;
            cell.degree = d;
            cell.beyond_guarantee = d > guaranteed;
            Cplx acc = 0;
            for (long l = 0; l < n; ++l) {
                Cplx p = 1;
                for (long t = 0; t < d; ++t) p *= rule.nodes.x[static_cast<std::size_t>(l)];
                acc += rule.weights_c[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(l)] * p;
            }
            cell.quad = acc.real();
            const Rat mexact = sys.moment_rat(j, d);
            cell.exact = mexact.to_double();
            cell.residual = std::abs(acc - Cplx(cell.exact, 0));
            cell.within = cell.residual <= opt.tau_ex_rel * std::abs(cell.exact) + opt.tau_ex_abs;
            if (!cell.beyond_guarantee && !cell.within) cert.order_ok = false;
            if (run_alive && cell.within)
                observed = d;
            else
                run_alive = false;
            cert.cells.push_back(cell);
        }
        cert.observed.push_back(observed);
    }

    // witness that the guarantee is sharp: the next type I vector pairs to 1
    // against P_n in the integral but to ~0 in the quadrature sum
    if (normality_check<Rat>(sys, n + 1, opt.build.tau_rank).normal) {
        VectorPoly<Rat> an1 = type1_polynomial<Rat>(sys, n + 1, opt.build);
        cert.witness_available = true;
        cert.witness_integral = pair_integral(sys, lad.p[static_cast<std::size_t>(n)], an1).to_double();
        Cplx quad = 0;
        for (long l = 0; l < n; ++l) {
            const Cplx x = rule.nodes.x[static_cast<std::size_t>(l)];
            auto [pv, pd] = eval_recurrence(tbl, n, x, embed_cplx);
            (void)pd;
            for (int j = 1; j <= r; ++j) {
                const Poly<Rat>& aj = an1[static_cast<std::size_t>(j - 1)];
                Cplx aval = 0;
                for (long t = aj.degree(); t >= 0; --t)
                    aval = aval * x + Cplx(aj.coeff(t).to_double(), 0);
                quad += rule.weights_c[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(l)] *
                        pv[static_cast<std::size_t>(n)] * aval;
            }
        }
        cert.witness_quad = quad.real();
        cert.witness_gap = std::abs(cert.witness_integral - cert.witness_quad);
    }

    if (!cert.order_ok)
        throw ResidualTooLarge("quadrature misses a guaranteed exactness degree");
    return rule;
}

} // namespace detail

inline Rule build_rule(const MeasureSystem& sys, long n, const QuadOptions& opt = {}) {
    return detail::build_rule_impl(sys, n, opt);
}

struct ExactCertCell {
    int j = 0;
    long degree = 0;
    Rat quad;
    Rat exact;
    bool match = false;
    bool beyond_guarantee = false;
};

// Quadrature rule with the nodes kept as the residue class of x modulo P_n.
// Weights are ring elements; any symmetric function of the nodes (weight sums,
// quadrature sums of polynomials) comes out as an exact rational trace.
struct ExactRule {
    long n = 0;
    int r = 0;
    Poly<Rat> node_poly; // P_n
    std::shared_ptr<NodeAlgebra> algebra;
    std::vector<double> node_approx;   // zeros of P_n rounded to double, for display
    std::vector<RingElem> weights;     // w^{(j)} as functions of the node class
    std::vector<Rat> weight_sums;
    bool simple = false;       // gcd(P_n, P_n') is constant
    bool shifts_valid = false; // gcd(P_n, P_{n-1}, .., P_{n-min(r,n)}) is constant
    std::vector<long> guaranteed;
    std::vector<ExactCertCell> cells;
    bool order_ok = false;
    bool witness_available = false;
    Rat witness_integral;
    Rat witness_quad;
};

inline ExactRule build_rule_exact(const MeasureSystem& sys, long n, const QuadOptions& opt = {}) {
    if (n < 1) throw BadInput("quadrature rule needs n >= 1");
    const int r = sys.r;
    LadderData<Rat> lad = build_ladder<Rat>(sys, std::max<long>(n, r) - 1, opt.build);
    ExactRule rule;
    rule.n = n;
    rule.r = r;
    rule.node_poly = lad.p[static_cast<std::size_t>(n)];
    rule.algebra = std::make_shared<NodeAlgebra>(rule.node_poly);
    const NodeAlgebra& alg = *rule.algebra;

    Poly<Rat> dp = derivative(rule.node_poly);
    if (poly_gcd(rule.node_poly, dp).degree() != 0)
        throw DuplicateNodes("node polynomial has a repeated zero");
    rule.simple = true;
    {
        NodeSet ns = spectral_nodes(detail::table_to_double(lad.table), n, opt.spectral);
        for (const Cplx& x : ns.x) rule.node_approx.push_back(x.real());
    }
    {
        Poly<Rat> g = rule.node_poly;
        for (long i = 1; i <= std::min<long>(r, n); ++i)
            g = poly_gcd(g, lad.p[static_cast<std::size_t>(n - i)]);
        if (g.degree() != 0)
            throw NoValidIndex("every trailing polynomial shares a zero with the node polynomial");
        rule.shifts_valid = true;
    }

    // divided difference (P_n(y) - P_n(X))/(y - X): its coefficients against y
    // give the Lagrange numerators; weights follow after dividing by P_n'(X)
    const long deg = n;
    std::vector<RingElem> qc(static_cast<std::size_t>(deg), alg.zero());
    const RingElem X = alg.generator();
    qc[static_cast<std::size_t>(deg - 1)] = alg.one();
    for (long k = deg - 1; k >= 1; --k)
        qc[static_cast<std::size_t>(k - 1)] =
            alg.constant(rule.node_poly.coeff(k)) + X * qc[static_cast<std::size_t>(k)];
    RingElem rem = alg.constant(rule.node_poly.coeff(0)) + X * qc[0];
    if (!rem.is_zero()) throw FormulaMismatch("node polynomial does not annihilate its own class");
    const RingElem inv_dp = alg.inverse(alg.reduce(dp));

    Mat<Rat> c_exact = c_constants<Rat>(sys, lad.p, opt);
    for (int j = 1; j <= r; ++j) {
        RingElem acc = alg.zero();
        for (long t = 0; t < deg; ++t)
            acc = acc + alg.constant(sys.moment_rat(j, t)) * qc[static_cast<std::size_t>(t)];
        rule.weights.push_back(acc * inv_dp);
        rule.weight_sums.push_back(alg.trace(rule.weights.back()));
    }

    // spectral route, checked as a congruence: for every kernel shift i the
    // left vector is genuine, so w_j * (u^T v) = sum_k C_{j,k} u_k mod P_n
    {
        auto embed = [&alg](const Rat& v) { return alg.constant(v); };
        auto [pv, pd] = eval_recurrence(lad.table, n, X, embed);
        (void)pd;
        for (int i = 1; i <= std::min<long>(r, n); ++i) {
            std::vector<RingElem> u = q_vector(lad.table, lad.initials, n, i, X, embed);
            RingElem denom = alg.zero();
            for (long k = 1; k <= n; ++k)
                denom = denom + u[static_cast<std::size_t>(k - 1)] * pv[static_cast<std::size_t>(k - 1)];
            for (int j = 1; j <= r; ++j) {
                RingElem rhs = alg.zero();
                for (long k = 1; k <= std::min<long>(j, n); ++k)
                    rhs = rhs + alg.constant(c_exact.at(j - 1, k - 1)) * u[static_cast<std::size_t>(k - 1)];
                if (!(rule.weights[static_cast<std::size_t>(j - 1)] * denom == rhs))
                    throw FormulaMismatch("spectral and interpolatory weights disagree (measure " +
                                          std::to_string(j) + ", shift " + std::to_string(i) + ")");
            }
        }
    }

    // exactness certificate via traces
    const MultiIndex nu = MultiIndex::proper(n, r);
    rule.order_ok = true;
    std::vector<RingElem> xpow;
    xpow.push_back(alg.one());
    for (int j = 1; j <= r; ++j) {
        const long guaranteed = n - 1 + nu(j);
        rule.guaranteed.push_back(guaranteed);
        for (long d = 0; d <= guaranteed + opt.cert_extra; ++d) {
            while (static_cast<long>(xpow.size()) <= d) xpow.push_back(xpow.back() * X);
            ExactCertCell cell;
            cell.j = j;
            cell.degree = d;
            cell.beyond_guarantee = d > guaranteed;
            cell.quad = alg.trace(rule.weights[static_cast<std::size_t>(j - 1)] *
                                  xpow[static_cast<std::size_t>(d)]);
            cell.exact = sys.moment_rat(j, d);
            cell.match = cell.quad == cell.exact;
            if (!cell.beyond_guarantee && !cell.match) rule.order_ok = false;
            rule.cells.push_back(cell);
        }
    }
    if (!rule.order_ok) throw ResidualTooLarge("quadrature misses a guaranteed exactness degree");

    if (normality_check<Rat>(sys, n + 1, opt.build.tau_rank).normal) {
        VectorPoly<Rat> an1 = type1_polynomial<Rat>(sys, n + 1, opt.build);
        rule.witness_available = true;
        rule.witness_integral = pair_integral(sys, rule.node_poly, an1);
        Rat quad(0);
        for (int j = 1; j <= r; ++j) {
            RingElem pa = alg.reduce(rule.node_poly * an1[static_cast<std::size_t>(j - 1)]);
            quad = quad + alg.trace(rule.weights[static_cast<std::size_t>(j - 1)] * pa);
        }
        rule.witness_quad = quad;
    }
    return rule;
}

// quadrature sum of an arbitrary rational polynomial against one measure
inline Rat exact_quad_sum(const ExactRule& rule, int j, const Poly<Rat>& f) {
    const NodeAlgebra& alg = *rule.algebra;
    return alg.trace(rule.weights[static_cast<std::size_t>(j - 1)] * alg.reduce(f));
}

// the discrete system carried by a float rule: point masses at the nodes
inline MeasureSystem discrete_reconstruction(const Rule& rule) {
    if (!rule.nodes.real) throw ComplexNodes("discrete reconstruction needs real nodes");
    std::vector<Measure> ms;
    for (int j = 0; j < rule.r; ++j) {
        std::vector<Rat> pts, mass;
        for (long l = 0; l < rule.n; ++l) {
            pts.push_back(Rat::from_double(rule.nodes.x[static_cast<std::size_t>(l)].real()));
            mass.push_back(Rat::from_double(rule.weights[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)]));
        }
        ms.push_back(Measure::from_points(std::move(pts), std::move(mass)));
    }
    return MeasureSystem(std::move(ms), Backend::float64);
}

// Recurrence rows of the discrete system carried by a rule, recovered through
// biorthogonal pairings at the nodes in the manner of the discretized
// Stieltjes procedure. Rounding nodes and weights to double perturbs exact
// moment solves past recovery in the deep rows, while the pairing sums stay
// well scaled: each row needs only values of the polynomials already built.
inline RecurrenceTable<double> stieltjes_table(const Rule& rule, long row_max) {
    if (!rule.nodes.real) throw ComplexNodes("pairing recovery needs real nodes");
    const int r = rule.r;
    const long n = rule.n;
    if (row_max < 0 || row_max >= n)
        throw BadInput("an n-point rule carries rows 0..n-1 only");
    Mat<double> initials = type1_initials<double>(discrete_reconstruction(rule));
    const std::size_t nn = static_cast<std::size_t>(n);
    std::vector<double> x(nn);
    for (long l = 0; l < n; ++l) x[static_cast<std::size_t>(l)] = rule.nodes.x[static_cast<std::size_t>(l)].real();

    RecurrenceTable<double> tbl;
    tbl.r = r;
    // node values of P_k, the type I components A_{m,j}, and the paired
    // type I densities s_m(l) = sum_j A_{m,j}(x_l) w^{(j)}_l
    std::vector<std::vector<double>> p{std::vector<double>(nn, 1.0)};
    std::vector<std::vector<std::vector<double>>> av(
        1, std::vector<std::vector<double>>(static_cast<std::size_t>(r), std::vector<double>(nn, 0.0)));
    std::vector<std::vector<double>> s{std::vector<double>(nn, 0.0)};
    auto push_type1 = [&](const std::vector<std::vector<double>>& comps) {
        std::vector<double> sm(nn, 0.0);
        for (int j = 0; j < r; ++j)
            for (std::size_t l = 0; l < nn; ++l)
                sm[l] += comps[static_cast<std::size_t>(j)][l] *
                         rule.weights[static_cast<std::size_t>(j)][l];
        av.push_back(comps);
        s.push_back(std::move(sm));
    };
    for (int m = 1; m <= std::min<long>(r, row_max + 1); ++m) {
        std::vector<std::vector<double>> comps(static_cast<std::size_t>(r),
                                               std::vector<double>(nn, 0.0));
        for (int j = 1; j <= m; ++j)
            comps[static_cast<std::size_t>(j - 1)].assign(nn, initials.at(m - 1, j - 1));
        push_type1(comps);
    }

    auto pair_xq = [&](const std::vector<double>& q, const std::vector<double>& sm) {
        double acc = 0;
        for (std::size_t l = 0; l < nn; ++l) acc += x[l] * q[l] * sm[l];
        return acc;
    };

    for (long k = 0; k <= row_max; ++k) {
        const int tmin = static_cast<int>(std::min<long>(r, k));
        std::vector<double> row(static_cast<std::size_t>(tmin + 1), 0.0);
        for (int t = 1; t <= tmin; ++t)
            row[static_cast<std::size_t>(t)] =
                pair_xq(p[static_cast<std::size_t>(k)], s[static_cast<std::size_t>(k + 1 - t)]);
        if (k + 1 <= r) {
            row[0] = pair_xq(p[static_cast<std::size_t>(k)], s[static_cast<std::size_t>(k + 1)]);
        } else {
            // the next type I vector, unnormalized: its trailing recurrence
            // coefficient is exactly the pairing already in row[r]
            const long c = k + 1 - r;
            std::vector<std::vector<double>> w(static_cast<std::size_t>(r),
                                               std::vector<double>(nn, 0.0));
            for (int j = 0; j < r; ++j)
                for (std::size_t l = 0; l < nn; ++l) {
                    double acc = x[l] * av[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)][l] -
                                 av[static_cast<std::size_t>(c - 1)][static_cast<std::size_t>(j)][l];
                    for (int j2 = 0; j2 < r; ++j2)
                        acc -= tbl.coeff(c + j2 - 1, j2) *
                               av[static_cast<std::size_t>(c + j2)][static_cast<std::size_t>(j)][l];
                    w[static_cast<std::size_t>(j)][l] = acc;
                }
            std::vector<double> sw(nn, 0.0);
            for (int j = 0; j < r; ++j)
                for (std::size_t l = 0; l < nn; ++l)
                    sw[l] += w[static_cast<std::size_t>(j)][l] * rule.weights[static_cast<std::size_t>(j)][l];
            const double pivot = row[static_cast<std::size_t>(r)];
            if (pivot == 0.0)
                throw ZeroPivot("trailing recurrence coefficient vanishes at row " + std::to_string(k));
            row[0] = pair_xq(p[static_cast<std::size_t>(k)], sw) / pivot;
            for (int j = 0; j < r; ++j)
                for (std::size_t l = 0; l < nn; ++l) w[static_cast<std::size_t>(j)][l] /= pivot;
            push_type1(w);
        }
        std::vector<double> pn(nn);
        for (std::size_t l = 0; l < nn; ++l) {
            double acc = (x[l] - row[0]) * p[static_cast<std::size_t>(k)][l];
            for (int t = 1; t <= tmin; ++t)
                acc -= row[static_cast<std::size_t>(t)] * p[static_cast<std::size_t>(k - t)][l];
            pn[l] = acc;
        }
        p.push_back(std::move(pn));
        tbl.rows.push_back(std::move(row));
    }
    return tbl;
}

// the discrete system carried by an exact rule: moment tables from traces
// (enough moments to rebuild ladder rows 0..n-1)
inline MeasureSystem discrete_reconstruction(const ExactRule& rule) {
    const NodeAlgebra& alg = *rule.algebra;
    const RingElem X = alg.generator();
    std::vector<Measure> ms;
    for (int j = 0; j < rule.r; ++j) {
        std::vector<Rat> table;
        RingElem p = alg.one();
        for (long t = 0; t <= 2 * rule.n + 1; ++t) {
            table.push_back(alg.trace(rule.weights[static_cast<std::size_t>(j)] * p));
            p = p * X;
        }
        ms.push_back(Measure::from_table(std::move(table)));
    }
    return MeasureSystem(std::move(ms), Backend::rational);
}

} // namespace multiquad
