#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "kelvin/verify.hpp"

namespace kelvin {

/// Frozen CSV header; one row per ResidualRecord, probe coordinates joined
/// with ';' so the column count stays fixed.
inline constexpr const char* kCsvHeader = "suite_id,equation_id,probe,lhs,rhs,abs_err,rel_err";

namespace detail {

inline std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 8);
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
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

inline std::string probe_string(const Point& p) {
    std::string out = fmt17(p[0]);
    for (int i = 1; i < p.dim(); ++i) out += ";" + fmt17(p[i]);
    return out;
}

}  // namespace detail

/// JSON emission is hand-rolled so every number prints with 17 significant
/// digits and the byte stream is deterministic; parsing goes through
/// nlohmann::json.
inline std::string report_to_json(const VerificationReport& rep) {
    std::ostringstream os;
    os << "{\n  \"suite_id\": \"" << detail::json_escape(rep.suite_id) << "\",\n";
    os << "  \"passed\": " << (rep.passed ? "true" : "false") << ",\n";
    os << "  \"config_echo\": \"" << detail::json_escape(rep.config_echo) << "\",\n";
    os << "  \"equation_tolerances\": {";
    for (std::size_t i = 0; i < rep.equation_tolerances.size(); ++i) {
        const auto& [eq, tol] = rep.equation_tolerances[i];
        os << (i ? ", " : "") << "\"" << detail::json_escape(eq) << "\": " << detail::fmt17(tol);
    }
    os << "},\n  \"records\": [";
    for (std::size_t i = 0; i < rep.records.size(); ++i) {
        const auto& r = rep.records[i];
        os << (i ? ",\n    " : "\n    ");
        os << "{\"equation_id\": \"" << detail::json_escape(r.equation_id) << "\", \"probe\": [";
        for (int d = 0; d < r.probe.dim(); ++d)
            os << (d ? ", " : "") << detail::fmt17(r.probe[d]);
        os << "], \"lhs\": " << detail::fmt17(r.lhs) << ", \"rhs\": " << detail::fmt17(r.rhs)
           << ", \"abs_err\": " << detail::fmt17(r.abs_err)
           << ", \"rel_err\": " << detail::fmt17(r.rel_err) << "}";
    }
    os << (rep.records.empty() ? "]" : "\n  ]") << ",\n  \"integrals\": {";
    for (std::size_t i = 0; i < rep.integrals.size(); ++i) {
        const auto& [name, c] = rep.integrals[i];
        os << (i ? ",\n    " : "\n    ");
        os << "\"" << detail::json_escape(name) << "\": {\"computed\": " << detail::fmt17(c.computed)
           << ", \"expected\": " << detail::fmt17(c.expected)
           << ", \"tolerance\": " << detail::fmt17(c.tolerance)
           << ", \"passed\": " << (integral_within_tolerance(c) ? "true" : "false") << "}";
    }
    os << (rep.integrals.empty() ? "}" : "\n  }") << ",\n  \"failures\": [";
    for (std::size_t i = 0; i < rep.failures.size(); ++i)
        os << (i ? ", " : "") << "\"" << detail::json_escape(rep.failures[i]) << "\"";
    os << "]\n}\n";
    return os.str();
}

inline std::string reports_to_json(const std::vector<VerificationReport>& reps) {
    if (reps.size() == 1) return report_to_json(reps.front());
    std::string out = "[\n";
    for (std::size_t i = 0; i < reps.size(); ++i) {
        std::string one = report_to_json(reps[i]);
        if (!one.empty() && one.back() == '\n') one.pop_back();
        out += one;
        out += (i + 1 < reps.size()) ? ",\n" : "\n";
    }
    out += "]\n";
    return out;
}

inline VerificationReport report_from_json(const std::string& text) {
    const nlohmann::ordered_json j = nlohmann::ordered_json::parse(text);
    VerificationReport rep;
    rep.suite_id = j.at("suite_id").get<std::string>();
    rep.passed = j.at("passed").get<bool>();
    rep.config_echo = j.at("config_echo").get<std::string>();
    for (const auto& [eq, tol] : j.at("equation_tolerances").items())
        rep.equation_tolerances.push_back({eq, tol.get<double>()});
    for (const auto& r : j.at("records")) {
        ResidualRecord rec;
        rec.equation_id = r.at("equation_id").get<std::string>();
        const auto& pr = r.at("probe");
        rec.probe = pr.size() == 2 ? Point(pr[0].get<double>(), pr[1].get<double>())
                                   : Point(pr[0].get<double>(), pr[1].get<double>(), pr[2].get<double>());
        rec.lhs = r.at("lhs").get<double>();
        rec.rhs = r.at("rhs").get<double>();
        rec.abs_err = r.at("abs_err").get<double>();
        rec.rel_err = r.at("rel_err").get<double>();
        rep.records.push_back(rec);
    }
    for (const auto& [name, c] : j.at("integrals").items()) {
        IntegralCheck chk;
        chk.computed = c.at("computed").get<double>();
        chk.expected = c.at("expected").get<double>();
        chk.tolerance = c.at("tolerance").get<double>();
        rep.integrals.push_back({name, chk});
    }
    for (const auto& f : j.at("failures")) rep.failures.push_back(f.get<std::string>());
    return rep;
}

inline std::string report_to_csv(const VerificationReport& rep) {
    std::string out = std::string(kCsvHeader) + "\n";
    for (const auto& r : rep.records) {
        out += rep.suite_id + "," + r.equation_id + "," + detail::probe_string(r.probe) + "," +
               detail::fmt17(r.lhs) + "," + detail::fmt17(r.rhs) + "," + detail::fmt17(r.abs_err) +
               "," + detail::fmt17(r.rel_err) + "\n";
    }
    return out;
}

inline std::string reports_to_csv(const std::vector<VerificationReport>& reps) {
    std::string out = std::string(kCsvHeader) + "\n";
    for (const auto& rep : reps) {
        std::string one = report_to_csv(rep);
        out += one.substr(one.find('\n') + 1);
    }
    return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace kelvin
