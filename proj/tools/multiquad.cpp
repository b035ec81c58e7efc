#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "multiquad/cdk.hpp"
#include "multiquad/io.hpp"
#include "multiquad/log.hpp"

using namespace multiquad;

namespace {

struct Options {
    std::string input;
    long n = 0;
    std::string backend;
    std::string output;
    std::string format = "json";
    double tol_eig = 0;
    double tol_w = 0;
    long seed_ladder = 0;
};

Backend parse_backend(const std::string& s) {
    if (s == "rational") return Backend::rational;
    if (s == "float64") return Backend::float64;
    throw BadInput("unknown backend: '" + s + "'");
}

QuadOptions quad_options(const Options& o) {
    QuadOptions q;
    if (o.tol_eig > 0) q.spectral.tau_eig = o.tol_eig;
    if (o.tol_w > 0) q.tau_w = o.tol_w;
    return q;
}

MeasureSystem load_input(const Options& o) {
    MeasureSystem sys = load_system(o.input);
    if (!o.backend.empty()) sys.backend = parse_backend(o.backend);
    return sys;
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw BadInput("cannot open output file: " + path);
    out << text;
}

// deterministic rational sample points, denominators growing slowly; start
// skips that many entries of the sequence
std::vector<Rat> sample_ladder(std::size_t count, long start) {
    if (start < 0) throw BadInput("--seed-ladder must be >= 0");
    const std::size_t want = count + static_cast<std::size_t>(start);
    std::vector<Rat> pts{Rat(0), Rat(1, 2), Rat(-1, 2), Rat(1), Rat(-1)};
    long q = 3;
    long p = 1;
    while (pts.size() < want) {
        if (std::gcd(p, q) == 1) {
            pts.push_back(Rat(p, q));
            pts.push_back(Rat(-p, q));
        }
        ++p;
        if (p >= q) {
            ++q;
            p = 1;
        }
    }
    pts.erase(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(start));
    pts.resize(count);
    return pts;
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

std::string pad(const std::string& s, std::size_t width) {
    if (s.size() >= width) return s;
    return s + std::string(width - s.size(), ' ');
}

// ---- rule ----

int cmd_rule(const Options& o) {
    MeasureSystem sys = load_input(o);
    if (o.n < 1) throw BadInput("rule needs -n >= 1");
    const QuadOptions qo = quad_options(o);
    std::string text;
    if (sys.backend == Backend::rational) {
        const ExactRule rule = build_rule_exact(sys, o.n, qo);
        text = o.format == "csv" ? exact_rule_to_csv(rule) : exact_rule_to_json(rule) + "\n";
    } else {
        const Rule rule = build_rule(sys, o.n, qo);
        text = o.format == "csv" ? rule_to_csv(rule) : rule_to_json(rule) + "\n";
    }
    emit(text, o.output);
    return 0;
}

// ---- moments ----

int cmd_moments(const Options& o) {
    MeasureSystem sys = load_input(o);
    if (o.n < 1) throw BadInput("moments needs -n >= 1");
    emit(moments_to_json(sys, o.n) + "\n", o.output);
    return 0;
}

// ---- verify ----

struct CheckRow {
    std::string name;
    int state = 0; // 1 pass, 0 fail, -1 skipped
    std::string detail;
};

template <class S>
S at_point(const Rat& v) {
    if constexpr (scalar_is_exact_v<S>)
        return v;
    else
        return v.to_double();
}

template <class S>
void identity_checks(const LadderData<Rat>& exact, long n, const std::vector<Rat>& pts,
                     std::vector<CheckRow>& rows) {
    RecurrenceTable<S> tbl;
    Mat<S> initials;
    if constexpr (scalar_is_exact_v<S>) {
        tbl = exact.table;
        initials = exact.initials;
    } else {
        tbl = detail::table_to_double(exact.table);
        initials = detail::mat_to_double(exact.initials);
    }
    const int r = tbl.r;
    const int imax = static_cast<int>(std::min<long>(r, n));
    const S g = gamma_factor(tbl, initials, n);
    const std::size_t kcount = std::min<std::size_t>(pts.size(), 5);
    const double tau = 1e-9;

    auto report = [&rows, tau](const std::string& name, bool exact_ok, double worst,
                               const std::string& where) {
        if constexpr (scalar_is_exact_v<S>)
            rows.push_back({name, exact_ok ? 1 : 0, "exact " + where});
        else
            rows.push_back(
                {name, worst <= tau ? 1 : 0, "max relative residual " + sci(worst) + " " + where});
    };

    // all-column determinant against the scaled node polynomial
    {
        bool ok = true;
        double worst = 0;
        for (const Rat& q : pts) {
            const S x = at_point<S>(q);
            const S b = big_b_value(tbl, initials, n, x);
            const auto pv = eval_recurrence(tbl, n, x).first;
            const S want = g * pv[static_cast<std::size_t>(n)];
            const S diff = b - want;
            if constexpr (scalar_is_exact_v<S>) {
                if (!exactly_zero(diff)) ok = false;
            } else {
                const double scale = std::max(
                    {approx_abs(want), big_b_scale(tbl, initials, n, x), 1e-300});
                worst = std::max(worst, approx_abs(diff) / scale);
            }
        }
        report("determinant identity", ok, worst, "at " + std::to_string(pts.size()) + " points");
    }

    // kernel identity at pairs of distinct points, every shift
    {
        bool ok = true;
        double worst = 0;
        for (int i = 1; i <= imax; ++i)
            for (std::size_t ax = 0; ax < kcount; ++ax)
                for (std::size_t ay = 0; ay < kcount; ++ay) {
                    if (ax == ay) continue;
                    const S x = at_point<S>(pts[ax]);
                    const S y = at_point<S>(pts[ay]);
                    const S res = cd_residual(tbl, initials, n, i, x, y);
                    if constexpr (scalar_is_exact_v<S>) {
                        if (!exactly_zero(res)) ok = false;
                    } else {
                        const double scale = cd_scale(tbl, initials, n, i, x, y);
                        worst = std::max(worst, approx_abs(res) / std::max(scale, 1e-300));
                    }
                }
        report("kernel identity", ok, worst,
               "over " + std::to_string(kcount * (kcount - 1)) + " point pairs, " +
                   std::to_string(imax) + " shifts");
    }

    // confluent form on the diagonal
    {
        bool ok = true;
        double worst = 0;
        for (int i = 1; i <= imax; ++i)
            for (std::size_t ax = 0; ax < kcount; ++ax) {
                const S x = at_point<S>(pts[ax]);
                const S res = cd_residual_confluent(tbl, initials, n, i, x);
                if constexpr (scalar_is_exact_v<S>) {
                    if (!exactly_zero(res)) ok = false;
                } else {
                    const double scale = cd_scale_confluent(tbl, initials, n, i, x);
                    worst = std::max(worst, approx_abs(res) / std::max(scale, 1e-300));
                }
            }
        report("kernel confluent", ok, worst, "at " + std::to_string(kcount) + " points");
    }

    // top kernel entry reduces to the scaled trailing polynomial
    {
        bool ok = true;
        double worst = 0;
        for (int i = 1; i <= imax; ++i)
            for (std::size_t ay = 0; ay < kcount; ++ay) {
                const S y = at_point<S>(pts[ay]);
                const auto qv = q_vector(tbl, initials, n, i, y);
                const auto pv = eval_recurrence(tbl, n, y).first;
                const S want = g * pv[static_cast<std::size_t>(n - i)];
                const S diff = qv[static_cast<std::size_t>(n - 1)] - want;
                if constexpr (scalar_is_exact_v<S>) {
                    if (!exactly_zero(diff)) ok = false;
                } else {
                    const auto qb = q_term_bounds(tbl, initials, n, i, y);
                    const double scale = std::max(
                        {qb[static_cast<std::size_t>(n - 1)], approx_abs(want), 1e-300});
                    worst = std::max(worst, approx_abs(diff) / scale);
                }
            }
        report("kernel top row", ok, worst, "at " + std::to_string(kcount) + " points");
    }
}

// structural matrix identities, always certified on the exact table
void row_identity_checks(const LadderData<Rat>& exact, long n, std::vector<CheckRow>& rows) {
    const int r = exact.table.r;
    const int imax = static_cast<int>(std::min<long>(r, n));
    bool ok = true;
    for (const auto& vec : row_relation_residual(exact.table, exact.initials, n))
        for (const auto& poly : vec)
            for (const auto& cv : poly.c)
                if (!exactly_zero(cv)) ok = false;
    rows.push_back({"recurrence rows", ok ? 1 : 0, "exact as polynomial coefficients"});
    ok = true;
    for (int i = 1; i <= imax; ++i)
        for (const auto& poly : q_relation_residual(exact.table, exact.initials, n, i))
            for (const auto& cv : poly.c)
                if (!exactly_zero(cv)) ok = false;
    rows.push_back({"kernel rows", ok ? 1 : 0,
                    "exact as polynomial coefficients, " + std::to_string(imax) + " shifts"});
}

void biorthogonality_check(const RecurrenceTable<double>& tbl, const Mat<double>& initials, long n,
                           const QuadOptions& qo, std::vector<CheckRow>& rows) {
    const SpectralDecomposition sd = spectral_decomposition(tbl, initials, n, qo.spectral);
    const double rel = sd.nodes.diameter > 0 ? sd.nodes.diameter : 1.0;
    double worst = 0;
    long pairs = 0;
    for (std::size_t a = 0; a < sd.pairs.size(); ++a)
        for (std::size_t b = 0; b < sd.pairs.size(); ++b) {
            if (a == b) continue;
            if (std::abs(sd.pairs[a].x - sd.pairs[b].x) <= qo.spectral.tau_sep * rel) continue;
            Cplx dot(0, 0);
            double na = 0, nb = 0;
            for (long t = 0; t < n; ++t) {
                dot += sd.pairs[a].left[static_cast<std::size_t>(t)] *
                       sd.pairs[b].right[static_cast<std::size_t>(t)];
                na += std::norm(sd.pairs[a].left[static_cast<std::size_t>(t)]);
                nb += std::norm(sd.pairs[b].right[static_cast<std::size_t>(t)]);
            }
            worst = std::max(worst, std::abs(dot) / std::max(std::sqrt(na * nb), 1e-300));
            ++pairs;
        }
    rows.push_back({"biorthogonality", worst <= qo.spectral.tau_eig ? 1 : 0,
                    "max normalized cross pairing " + sci(worst) + " over " +
                        std::to_string(pairs) + " eigenvector pairs"});
}

template <class Cells>
long observed_degree(const Cells& cells, int j) {
    long observed = -1;
    for (const auto& cell : cells) {
        if (cell.j != j) continue;
        bool match;
        if constexpr (requires { cell.match; })
            match = cell.match;
        else
            match = cell.within;
        if (!match) break;
        observed = cell.degree;
    }
    return observed;
}

template <class RuleT>
void certificate_rows(const RuleT& rule, long cert_extra, std::vector<CheckRow>& rows) {
    const auto& cells = [&]() -> const auto& {
        if constexpr (requires { rule.cert; })
            return rule.cert.cells;
        else
            return rule.cells;
    }();
    const auto& guaranteed = [&]() -> const auto& {
        if constexpr (requires { rule.cert; })
            return rule.cert.guaranteed;
        else
            return rule.guaranteed;
    }();
    bool order_ok;
    if constexpr (requires { rule.cert; })
        order_ok = rule.cert.order_ok;
    else
        order_ok = rule.order_ok;

    std::ostringstream det, scan;
    for (int j = 1; j <= rule.r; ++j) {
        const long obs = observed_degree(cells, j);
        if (j > 1) det << ", ";
        det << "j=" << j << " exact through degree " << obs << " (guaranteed "
            << guaranteed[static_cast<std::size_t>(j - 1)] << ")";
        if (j > 1) scan << ", ";
        if (obs >= guaranteed[static_cast<std::size_t>(j - 1)] + cert_extra)
            scan << "j=" << j << " no failure through degree " << obs;
        else
            scan << "j=" << j << " first failure at degree " << obs + 1;
    }
    rows.push_back({"exactness certificate", order_ok ? 1 : 0, det.str()});
    rows.push_back({"degree scan", 1, scan.str()});
}

void rule_checks_float(const MeasureSystem& sys, long n, const QuadOptions& qo,
                       std::vector<CheckRow>& rows) {
    Rule rule;
    try {
        rule = build_rule(sys, n, qo);
    } catch (const Error& e) {
        rows.push_back({"weight routes", 0, e.what()});
        rows.push_back({"exactness certificate", -1, "skipped"});
        rows.push_back({"degree scan", -1, "skipped"});
        rows.push_back({"order witness", -1, "skipped"});
        return;
    }
    rows.push_back({"weight routes", 1,
                    "spectral and interpolatory weights agree within " + sci(qo.tau_w)});
    certificate_rows(rule, qo.cert_extra, rows);
    if (rule.cert.witness_available)
        rows.push_back({"order witness", std::abs(rule.cert.witness_gap - 1.0) <= 1e-6 ? 1 : 0,
                        "next-degree pairing gap " + json_double(rule.cert.witness_gap)});
    else
        rows.push_back({"order witness", 1, "not available (next index is not normal)"});
}

void rule_checks_exact(const MeasureSystem& sys, long n, const QuadOptions& qo,
                       std::vector<CheckRow>& rows) {
    ExactRule rule;
    try {
        rule = build_rule_exact(sys, n, qo);
    } catch (const Error& e) {
        rows.push_back({"node certificates", 0, e.what()});
        rows.push_back({"weight routes", -1, "skipped"});
        rows.push_back({"exactness certificate", -1, "skipped"});
        rows.push_back({"degree scan", -1, "skipped"});
        rows.push_back({"order witness", -1, "skipped"});
        return;
    }
    rows.push_back({"node certificates", rule.simple && rule.shifts_valid ? 1 : 0,
                    "node polynomial square-free, trailing polynomials share no zero"});
    rows.push_back(
        {"weight routes", 1, "spectral congruence matches interpolatory weights exactly"});
    certificate_rows(rule, qo.cert_extra, rows);
    if (rule.witness_available) {
        const Rat gap = rule.witness_integral - rule.witness_quad;
        rows.push_back({"order witness", exactly_zero(gap - Rat(1)) ? 1 : 0,
                        "next-degree pairing gap " + gap.str()});
    } else {
        rows.push_back({"order witness", 1, "not available (next index is not normal)"});
    }
}

int cmd_verify(const Options& o) {
    MeasureSystem sys = load_input(o);
    if (o.n < 1) throw BadInput("verify needs -n >= 1");
    const long n = o.n;
    const int r = sys.r;
    const QuadOptions qo = quad_options(o);
    const bool exact = sys.backend == Backend::rational;
    const long depth = std::max<long>(n, r);
    std::vector<CheckRow> rows;

    bool normal = true;
    {
        std::string det;
        for (long k = 1; k <= depth && normal; ++k) {
            const auto rep = normality_check<Rat>(sys, k, qo.build.tau_rank);
            if (!rep.normal) {
                normal = false;
                det = "index " + std::to_string(k) + " is not normal (moment matrix rank " +
                      std::to_string(rep.rank) + " of " + std::to_string(k) + ")";
            }
        }
        if (normal) det = "all proper indices through " + std::to_string(depth) + " are normal";
        rows.push_back({"normality", normal ? 1 : 0, det});
    }

    if (normal) {
        const LadderData<Rat> lad = build_ladder<Rat>(sys, depth - 1, qo.build);
        const auto pts = sample_ladder(static_cast<std::size_t>(2 * n + 1), o.seed_ladder);
        if (exact) {
            identity_checks<Rat>(lad, n, pts, rows);
            row_identity_checks(lad, n, rows);
            rule_checks_exact(sys, n, qo, rows);
        } else {
            identity_checks<double>(lad, n, pts, rows);
            row_identity_checks(lad, n, rows);
            biorthogonality_check(detail::table_to_double(lad.table),
                                  detail::mat_to_double(lad.initials), n, qo, rows);
            rule_checks_float(sys, n, qo, rows);
        }
    } else {
        const std::vector<std::string> names = {
            "determinant identity", "kernel identity",
            "kernel confluent",     "kernel top row",
            "recurrence rows",      "kernel rows",
            exact ? "node certificates" : "biorthogonality",
            "weight routes",        "exactness certificate",
            "degree scan",          "order witness"};
        for (const auto& nm : names) rows.push_back({nm, -1, "skipped, system is not normal"});
    }

    std::ostringstream out;
    out << "input: " << o.input << "\n";
    out << "backend: " << backend_name(sys.backend) << "  n: " << n << "  r: " << r << "\n\n";
    std::size_t width = 0;
    for (const auto& row : rows) width = std::max(width, row.name.size());
    int failed = 0;
    for (const auto& row : rows) {
        const char* tag = row.state == 1 ? "pass" : row.state == 0 ? "FAIL" : "skip";
        if (row.state == 0) ++failed;
        out << tag << "  " << pad(row.name, width + 2) << row.detail << "\n";
    }
    out << "\n";
    if (failed == 0)
        out << "all checks passed\n";
    else
        out << failed << " check(s) failed\n";
    emit(out.str(), o.output);
    return failed == 0 ? 0 : 2;
}

// ---- compare ----

int cmd_compare(const Options& o) {
    MeasureSystem sys = load_input(o);
    sys.backend = Backend::float64; // a numeric experiment, always on the float pipeline
    if (o.n < 1) throw BadInput("compare needs -n >= 1");
    const long n = o.n;
    const int r = sys.r;
    const QuadOptions qo = quad_options(o);
    const long ref_n = 40;

    const Rule shared = build_rule(sys, n, qo);
    std::vector<Rule> separate, reference;
    for (int j = 1; j <= r; ++j) {
        const MeasureSystem single = sys.sub(j);
        separate.push_back(build_rule(single, n, qo));
        reference.push_back(build_rule(single, ref_n, qo));
    }

    const std::vector<std::pair<std::string, std::function<double(double)>>> integrands = {
        {"x^2", [](double x) { return x * x; }},
        {"x^7", [](double x) { return std::pow(x, 7); }},
        {"exp(x)", [](double x) { return std::exp(x); }},
        {"1/(1+x^2)", [](double x) { return 1.0 / (1.0 + x * x); }},
    };

    auto apply = [](const Rule& rule, int j, const std::function<double(double)>& f) {
        double acc = 0;
        for (long l = 0; l < rule.n; ++l)
            acc += rule.weights[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)] *
                   f(rule.nodes.x[static_cast<std::size_t>(l)].real());
        return acc;
    };

    std::ostringstream out;
    out << "input: " << o.input << "  n: " << n << "  r: " << r << "\n";
    out << "shared rule: " << n << " nodes, " << n << " integrand evaluations\n";
    out << "separate rules: " << r << " x " << n << " nodes, " << r * n
        << " integrand evaluations\n";
    out << "reference: single-measure rules at n=" << ref_n << "\n\n";
    out << pad("integrand", 12) << "j  " << pad("shared", 24) << pad("separate", 24)
        << pad("shared err", 12) << "separate err\n";
    for (const auto& [name, f] : integrands) {
        for (int j = 1; j <= r; ++j) {
            const double ref = apply(reference[static_cast<std::size_t>(j - 1)], 0, f);
            const double sv = apply(shared, j - 1, f);
            const double pv = apply(separate[static_cast<std::size_t>(j - 1)], 0, f);
            out << pad(name, 12) << j << "  " << pad(json_double(sv), 24)
                << pad(json_double(pv), 24) << pad(sci(std::abs(sv - ref)), 12)
                << sci(std::abs(pv - ref)) << "\n";
        }
    }
    emit(out.str(), o.output);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"shared-node Gaussian quadrature for systems of measures"};
    app.require_subcommand(1);

    Options o;
    CLI::App* rule = app.add_subcommand("rule", "build a quadrature rule and print it");
    CLI::App* verify = app.add_subcommand("verify", "run the invariant checks and report pass/fail");
    CLI::App* compare =
        app.add_subcommand("compare", "shared-node rule against per-measure rules");
    CLI::App* moments = app.add_subcommand("moments", "dump the moment table");

    for (CLI::App* cmd : {rule, verify, compare, moments}) {
        cmd->add_option("-i,--input", o.input, "measure system config (JSON)")->required();
        cmd->add_option("-o,--output", o.output, "output file (default stdout)");
    }
    for (CLI::App* cmd : {rule, verify, compare})
        cmd->add_option("-n", o.n, "rule size")->required();
    moments->add_option("-n", o.n, "moments per measure")->default_val(8);
    for (CLI::App* cmd : {rule, verify, moments})
        cmd->add_option("--backend", o.backend, "rational or float64 (overrides the config)");
    for (CLI::App* cmd : {rule, verify, compare}) {
        cmd->add_option("--tol-eig", o.tol_eig, "eigenpair residual tolerance");
        cmd->add_option("--tol-w", o.tol_w, "weight route agreement tolerance");
    }
    rule->add_option("--format", o.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    verify->add_option("--seed-ladder", o.seed_ladder, "sample ladder start offset");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (rule->parsed()) return cmd_rule(o);
        if (verify->parsed()) return cmd_verify(o);
        if (compare->parsed()) return cmd_compare(o);
        return cmd_moments(o);
    } catch (const BadInput& e) {
        std::fprintf(stderr, "multiquad: %s\n", e.what());
        return 1;
    } catch (const OutOfTable& e) {
        std::fprintf(stderr, "multiquad: %s\n", e.what());
        return 1;
    } catch (const UnknownFormula& e) {
        std::fprintf(stderr, "multiquad: %s\n", e.what());
        return 1;
    } catch (const Error& e) {
        std::fprintf(stderr, "multiquad: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "multiquad: %s\n", e.what());
        return 2;
    }
}
