#pragma once

// Serialization boundary: JSON for structured results (reports, solution
// sets, sampled configurations) and CSV for plottable grids. Doubles are
// written with 17 significant digits so every value round-trips bit-exact;
// an infinite coupling serializes as the string "inf" because JSON has no
// infinity literal. File writes go through a temp-and-rename so a crash
// never leaves a half-written artifact.

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "zipper/boundary_law.hpp"
#include "zipper/model.hpp"
#include "zipper/oracle.hpp"
#include "zipper/thermo.hpp"
#include "zipper/tree.hpp"

namespace zipper {

using nlohmann::json;

inline std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp);
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("atomic_write: short write to " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("atomic_write: rename to " + path + " failed: " +
                                 std::strerror(errno));
}

inline json coupling_to_json(double J) {
    if (std::isinf(J)) return "inf";
    return J;
}

inline double coupling_from_json(const json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return j_infinite_coupling;
        throw std::invalid_argument("coupling_from_json: expected a number or \"inf\"");
    }
    return j.get<double>();
}

inline void to_json(json& j, const ModelParams& p) {
    j = json{{"k", p.k},         {"q", p.q},         {"epsilon", p.epsilon},
             {"J", coupling_to_json(p.J)},           {"beta", p.beta},
             {"T", p.T()},       {"theta", p.theta()}, {"eta", p.eta()}};
}

inline void from_json(const json& j, ModelParams& p) {
    p.k = j.at("k").get<int>();
    p.q = j.at("q").get<int>();
    p.epsilon = j.at("epsilon").get<double>();
    p.J = coupling_from_json(j.at("J"));
    if (j.contains("beta"))
        p.beta = j.at("beta").get<double>();
    else
        p.beta = 1.0 / j.at("T").get<double>();
    p.validate();
}

inline void to_json(json& j, const SolutionSet& s) {
    j = json{{"k", s.k},     {"theta", s.theta},          {"eta", s.eta},
             {"eta_c", s.eta_c}, {"count", s.count},      {"roots", s.roots},
             {"regime", regime_name(s.regime)}};
}

inline void to_json(json& j, const EtaCriticalComparison& c) {
    j = json{{"k", c.k},
             {"theta", c.theta},
             {"eta_c_general", c.general},
             {"eta_c_k2_form", c.k2_form},
             {"eta_c_numeric", c.numeric},
             {"verdict", verdict_name(c.verdict)}};
}

inline const char* tcr_reason_name(TcrReason r) {
    switch (r) {
        case TcrReason::ok: return "ok";
        case TcrReason::nonpositive: return "nonpositive";
        case TcrReason::zero_denominator: return "zero_denominator";
    }
    return "unknown";
}

inline void to_json(json& j, const CriticalTemperature& t) {
    j = json{{"raw", t.raw},
             {"reason", tcr_reason_name(t.reason)},
             {"in_set_A", t.in_set_A}};
    j["value"] = t.value ? json(*t.value) : json(nullptr);
}

inline void to_json(json& j, const LevelFreeEnergy& f) {
    j = json{{"partial", f.partial}, {"limit", f.limit}};
}

inline void to_json(json& j, const Align1dReport& r) {
    j = json{{"q", r.q},
             {"beta", r.beta},
             {"epsilon", r.epsilon},
             {"N", r.N},
             {"a", r.a},
             {"Z_closed_form", r.z_closed_form},
             {"Z_chain_enum", r.z_chain_enum},
             {"Z_tree_aligned", r.z_tree_aligned},
             {"Z_tree_literal", r.z_tree_literal},
             {"max_rel_error", r.max_rel_error},
             {"convention", r.convention}};
}

inline void to_json(json& j, const CaseReport& r) {
    j = json{{"id", r.id},
             {"params", r.params},
             {"n", r.n},
             {"law", r.law_kind},
             {"omega_count", r.omega_count},
             {"exhaustive", r.exhaustive},
             {"max_residual", r.max_residual},
             {"compatibility_error", r.compatibility},
             {"Z_recursion_error", r.recursion_error},
             {"dp_vs_exhaustive", r.dp_error},
             {"exhaustive_compatibility", r.exhaustive_compatibility},
             {"sampling_sigmas", r.sample_sigmas},
             {"log_Z_dp", r.log_z_dp},
             {"wall_ms", r.wall_ms},
             {"pass", r.pass},
             {"failures", r.failures}};
}

inline void to_json(json& j, const VerifyReport& r) {
    j = json{{"all_pass", r.all_pass},
             {"perturb_delta", r.perturb_delta},
             {"total_ms", r.total_ms},
             {"cases", r.rows}};
}

inline json configuration_to_json(const Configuration& c) {
    json j = json::object();
    for (const auto& [v, spin] : c.to_map()) j[v.to_string()] = spin;
    return j;
}

inline Configuration configuration_from_json(const json& j, int k, int n) {
    std::map<VertexId, int> m;
    for (const auto& [key, value] : j.items()) m[VertexId::parse(key)] = value.get<int>();
    return Configuration::from_map(k, n, m);
}

inline const std::string kScanHeader =
    "T,beta,theta,eta,eta_c,n_tigm,z_minus,z_plus,f_minus,f_plus,t_cr_flag";

inline std::string scan_csv(const ScanSpec& spec, const std::vector<PhasePoint>& rows) {
    std::ostringstream out;
    out << "# molecular zipper phase scan\n";
    out << "# k=" << spec.k << " q=" << spec.q << " epsilon=" << format_g17(spec.epsilon)
        << " J=" << (std::isinf(spec.J) ? std::string("inf") : format_g17(spec.J)) << "\n";
    out << kScanHeader << "\n";
    for (const PhasePoint& r : rows) {
        out << format_g17(r.T) << ',' << format_g17(r.beta) << ',' << format_g17(r.theta) << ','
            << format_g17(r.eta) << ',' << format_g17(r.eta_c) << ',' << r.n_tigm << ','
            << format_g17(r.z_minus) << ',' << format_g17(r.z_plus) << ','
            << format_g17(r.f_minus) << ',' << format_g17(r.f_plus) << ',' << r.t_cr_flag << '\n';
    }
    return out.str();
}

inline std::vector<PhasePoint> parse_scan_csv(const std::string& text) {
    std::vector<PhasePoint> rows;
    std::istringstream in(text);
    std::string line;
    bool seen_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!seen_header) {
            if (line != kScanHeader)
                throw std::invalid_argument("parse_scan_csv: unexpected header '" + line + "'");
            seen_header = true;
            continue;
        }
        std::istringstream fields(line);
        std::string tok;
        std::vector<std::string> cols;
        while (std::getline(fields, tok, ',')) cols.push_back(tok);
        if (cols.size() != 11)
            throw std::invalid_argument("parse_scan_csv: expected 11 columns, got line '" + line +
                                        "'");
        PhasePoint p;
        p.T = std::strtod(cols[0].c_str(), nullptr);
        p.beta = std::strtod(cols[1].c_str(), nullptr);
        p.theta = std::strtod(cols[2].c_str(), nullptr);
        p.eta = std::strtod(cols[3].c_str(), nullptr);
        p.eta_c = std::strtod(cols[4].c_str(), nullptr);
        p.n_tigm = std::stoi(cols[5]);
        p.z_minus = std::strtod(cols[6].c_str(), nullptr);
        p.z_plus = std::strtod(cols[7].c_str(), nullptr);
        p.f_minus = std::strtod(cols[8].c_str(), nullptr);
        p.f_plus = std::strtod(cols[9].c_str(), nullptr);
        p.t_cr_flag = std::stoi(cols[10]);
        rows.push_back(p);
    }
    if (!seen_header) throw std::invalid_argument("parse_scan_csv: no header line");
    return rows;
}

inline std::string fig3_csv(const std::vector<CurvePoint>& rows) {
    std::ostringstream out;
    out << "# fixed-point gap (theta z + eta)^k - z for k=4, theta=2\n";
    out << "# eta = 1.25*eta_c (above), eta_c (critical), 0.75*eta_c (below); eta_c = 3/8\n";
    out << "z,f_above,f_critical,f_below\n";
    for (const CurvePoint& r : rows)
        out << format_g17(r.z) << ',' << format_g17(r.f_above) << ',' << format_g17(r.f_critical)
            << ',' << format_g17(r.f_below) << '\n';
    return out.str();
}

}  // namespace zipper
