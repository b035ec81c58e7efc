#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "multiquad/quadrature.hpp"

namespace multiquad {

// ---- config input ----

inline Rat rat_from_json(const nlohmann::json& v) {
    if (v.is_string()) return Rat::parse(v.get<std::string>());
    if (v.is_number_integer()) return Rat(static_cast<long>(v.get<long long>()));
    if (v.is_number_unsigned()) return Rat(static_cast<long>(v.get<unsigned long long>()));
    if (v.is_number_float()) return Rat::from_double(v.get<double>());
    throw BadInput("expected a number or a rational string, got: " + v.dump());
}

inline Measure measure_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw BadInput("measure entry must be an object");
    const std::string kind = j.value("kind", std::string());
    if (kind == "analytic") {
        Measure m;
        m.kind = Measure::Kind::analytic;
        if (!j.contains("name") || !j["name"].is_string())
            throw BadInput("analytic measure needs a formula name");
        m.name = j["name"].get<std::string>();
        if (j.contains("params")) {
            if (!j["params"].is_object()) throw BadInput("measure params must be an object");
            for (auto it = j["params"].begin(); it != j["params"].end(); ++it)
                m.params[it.key()] = rat_from_json(it.value());
        }
        m.moment(0); // validate the formula and its parameters up front
        return m;
    }
    if (kind == "table") {
        if (!j.contains("moments") || !j["moments"].is_array())
            throw BadInput("table measure needs a moments array");
        std::vector<Rat> mo;
        for (const auto& v : j["moments"]) mo.push_back(rat_from_json(v));
        if (mo.empty()) throw BadInput("table measure needs at least one moment");
        return Measure::from_table(std::move(mo));
    }
    if (kind == "discrete") {
        if (!j.contains("points") || !j["points"].is_array() || !j.contains("masses") ||
            !j["masses"].is_array())
            throw BadInput("discrete measure needs points and masses arrays");
        std::vector<Rat> pts, ms;
        for (const auto& v : j["points"]) pts.push_back(rat_from_json(v));
        for (const auto& v : j["masses"]) ms.push_back(rat_from_json(v));
        return Measure::from_points(std::move(pts), std::move(ms));
    }
    throw BadInput("unknown measure kind: '" + kind + "'");
}

inline MeasureSystem parse_system(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw BadInput(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw BadInput("config root must be an object");
    if (!j.contains("measures") || !j["measures"].is_array())
        throw BadInput("config needs a measures array");
    std::vector<Measure> ms;
    for (const auto& mj : j["measures"]) ms.push_back(measure_from_json(mj));
    if (ms.empty()) throw BadInput("config needs at least one measure");
    Backend be = Backend::float64;
    if (j.contains("backend")) {
        const std::string b = j["backend"].get<std::string>();
        if (b == "rational")
            be = Backend::rational;
        else if (b == "float64")
            be = Backend::float64;
        else
            throw BadInput("unknown backend: '" + b + "'");
    }
    MeasureSystem sys(std::move(ms), be);
    if (j.contains("r")) {
        const long r = j["r"].get<long>();
        if (r != sys.r)
            throw BadInput("config r = " + std::to_string(r) + " but " + std::to_string(sys.r) +
                           " measures given");
    }
    return sys;
}

inline MeasureSystem load_system(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw BadInput("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_system(ss.str());
}

// ---- deterministic output ----

inline std::string json_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string json_string(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
    return out;
}

namespace detail {

template <class It, class F>
std::string json_list(It begin, It end, F f) {
    std::string out = "[";
    bool first = true;
    for (It it = begin; it != end; ++it) {
        if (!first) out += ",";
        first = false;
        out += f(*it);
    }
    out += "]";
    return out;
}

inline std::string certificate_json(const Certificate& c) {
    std::ostringstream os;
    os << "{\"vector_order\":"
       << json_list(c.guaranteed.begin(), c.guaranteed.end(),
                    [](long v) { return std::to_string(v); })
       << ",\"observed_order\":"
       << json_list(c.observed.begin(), c.observed.end(), [](long v) { return std::to_string(v); })
       << ",\"order_ok\":" << (c.order_ok ? "true" : "false") << ",\"residuals\":{";
    // cells are emitted grouped by measure, ascending degree
    int last_j = 0;
    bool first_cell = true;
    for (const auto& cell : c.cells) {
        if (cell.j != last_j) {
            if (last_j != 0) os << "],";
            os << json_string(std::to_string(cell.j)) << ":[";
            last_j = cell.j;
            first_cell = true;
        }
        if (!first_cell) os << ",";
        first_cell = false;
        os << json_double(cell.residual);
    }
    if (last_j != 0) os << "]";
    os << "},\"witness\":{\"available\":" << (c.witness_available ? "true" : "false");
    if (c.witness_available)
        os << ",\"integral\":" << json_double(c.witness_integral)
           << ",\"quadrature\":" << json_double(c.witness_quad)
           << ",\"gap\":" << json_double(c.witness_gap);
    os << "}}";
    return os.str();
}

} // namespace detail

inline std::string rule_to_json(const Rule& rule) {
    std::ostringstream os;
    os << "{\"n\":" << rule.n << ",\"r\":" << rule.r << ",\"backend\":\"float64\"";
    os << ",\"nodes\":"
       << detail::json_list(rule.nodes.x.begin(), rule.nodes.x.end(),
                            [](const Cplx& x) { return json_double(x.real()); });
    os << ",\"nodes_imag\":"
       << detail::json_list(rule.nodes.x.begin(), rule.nodes.x.end(),
                            [](const Cplx& x) { return json_double(x.imag()); });
    os << ",\"real\":" << (rule.nodes.real ? "true" : "false")
       << ",\"simple\":" << (rule.nodes.simple ? "true" : "false");
    os << ",\"weights\":"
       << detail::json_list(rule.weights.begin(), rule.weights.end(),
                            [](const std::vector<double>& row) {
                                return detail::json_list(row.begin(), row.end(), [](double v) {
                                    return json_double(v);
                                });
                            });
    os << ",\"weight_sums\":"
       << detail::json_list(rule.weight_sums.begin(), rule.weight_sums.end(),
                            [](double v) { return json_double(v); });
    os << ",\"k_index\":"
       << detail::json_list(rule.k_index.begin(), rule.k_index.end(),
                            [](long v) { return std::to_string(v); });
    os << ",\"i_index\":"
       << detail::json_list(rule.i_index.begin(), rule.i_index.end(),
                            [](long v) { return std::to_string(v); });
    os << ",\"certificate\":" << detail::certificate_json(rule.cert) << "}";
    return os.str();
}

inline std::string rule_to_csv(const Rule& rule) {
    std::ostringstream os;
    os << "node";
    for (int j = 1; j <= rule.r; ++j) os << ",w" << j;
    os << "\n";
    for (long l = 0; l < rule.n; ++l) {
        os << json_double(rule.nodes.x[static_cast<std::size_t>(l)].real());
        for (int j = 0; j < rule.r; ++j)
            os << "," << json_double(rule.weights[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)]);
        os << "\n";
    }
    return os.str();
}

inline std::string exact_rule_to_json(const ExactRule& rule) {
    std::ostringstream os;
    os << "{\"n\":" << rule.n << ",\"r\":" << rule.r << ",\"backend\":\"rational\"";
    os << ",\"node_polynomial\":"
       << detail::json_list(rule.node_poly.c.begin(), rule.node_poly.c.end(),
                            [](const Rat& v) { return json_string(v.str()); });
    os << ",\"nodes\":"
       << detail::json_list(rule.node_approx.begin(), rule.node_approx.end(),
                            [](double v) { return json_double(v); });
    os << ",\"simple\":" << (rule.simple ? "true" : "false")
       << ",\"shifts_valid\":" << (rule.shifts_valid ? "true" : "false");
    os << ",\"weights\":" << detail::json_list(rule.weights.begin(), rule.weights.end(), [](const RingElem& w) {
        return detail::json_list(w.c.begin(), w.c.end(),
                                 [](const Rat& v) { return json_string(v.str()); });
    });
    os << ",\"weight_sums\":"
       << detail::json_list(rule.weight_sums.begin(), rule.weight_sums.end(),
                            [](const Rat& v) { return json_string(v.str()); });
    os << ",\"certificate\":{\"vector_order\":"
       << detail::json_list(rule.guaranteed.begin(), rule.guaranteed.end(),
                            [](long v) { return std::to_string(v); })
       << ",\"order_ok\":" << (rule.order_ok ? "true" : "false") << ",\"residuals\":{";
    int last_j = 0;
    bool first_cell = true;
    for (const auto& cell : rule.cells) {
        if (cell.j != last_j) {
            if (last_j != 0) os << "],";
            os << json_string(std::to_string(cell.j)) << ":[";
            last_j = cell.j;
            first_cell = true;
        }
        if (!first_cell) os << ",";
        first_cell = false;
        os << json_string((cell.quad - cell.exact).str());
    }
    if (last_j != 0) os << "]";
    os << "},\"witness\":{\"available\":" << (rule.witness_available ? "true" : "false");
    if (rule.witness_available)
        os << ",\"integral\":" << json_string(rule.witness_integral.str())
           << ",\"quadrature\":" << json_string(rule.witness_quad.str())
           << ",\"gap\":" << json_string((rule.witness_integral - rule.witness_quad).str());
    os << "}}}";
    return os.str();
}

inline std::string exact_rule_to_csv(const ExactRule& rule) {
    std::ostringstream os;
    os << "node";
    for (int j = 1; j <= rule.r; ++j) os << ",w" << j;
    os << "\n";
    for (long l = 0; l < rule.n; ++l) {
        const double x = rule.node_approx[static_cast<std::size_t>(l)];
        os << json_double(x);
        for (int j = 0; j < rule.r; ++j)
            os << "," << json_double(eval_double(rule.weights[static_cast<std::size_t>(j)], x));
        os << "\n";
    }
    return os.str();
}

inline std::string moments_to_json(const MeasureSystem& sys, long count) {
    std::ostringstream os;
    os << "{\"r\":" << sys.r << ",\"backend\":" << json_string(backend_name(sys.backend))
       << ",\"count\":" << count << ",\"moments\":[";
    for (int j = 1; j <= sys.r; ++j) {
        if (j > 1) os << ",";
        os << "[";
        for (long t = 0; t < count; ++t) {
            if (t > 0) os << ",";
            if (sys.backend == Backend::rational)
                os << json_string(sys.moment_rat(j, t).str());
            else
                os << json_double(sys.moment_rat(j, t).to_double());
        }
        os << "]";
    }
    os << "]}";
    return os.str();
}

} // namespace multiquad
