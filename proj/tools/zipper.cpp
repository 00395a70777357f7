// Command-line front end.
//
//   zipper solve   count and locate constant boundary laws at one point
//   zipper scan    sweep a temperature range into a plottable CSV
//   zipper verify  run the self-verification battery (exit 1 on failure)
//   zipper sample  draw exact configurations under a chosen law
//
// Exit codes: 0 success, 1 verification failure, 2 usage error. JSON goes
// to stdout (or --out), one-line progress notes go to stderr.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zipper/zipper.hpp"

namespace {

using zipper::json;

double parse_coupling_arg(const std::string& s) {
    std::string t;
    for (char c : s) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (t == "inf" || t == "+inf" || t == "infinity") return zipper::j_infinite_coupling;
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != s.size()) throw std::invalid_argument("--J: expected a number or 'inf'");
    return v;
}

struct ModelOpts {
    int k = 2;
    int q = 1;
    double epsilon = 0;
    std::string J = "0";
    double beta = 1;
    double T = 1;
    CLI::Option* beta_opt = nullptr;
    CLI::Option* t_opt = nullptr;
};

void add_model_options(CLI::App& sub, ModelOpts& m) {
    sub.add_option("--k", m.k, "branching order of the tree");
    sub.add_option("--q", m.q, "number of open spin values");
    sub.add_option("--epsilon", m.epsilon, "energy per open vertex");
    sub.add_option("--J", m.J, "front coupling, a number or 'inf'");
    m.beta_opt = sub.add_option("--beta", m.beta, "inverse temperature");
    m.t_opt = sub.add_option("--T", m.T, "temperature");
    m.beta_opt->excludes(m.t_opt);
    m.t_opt->excludes(m.beta_opt);
}

zipper::ModelParams make_params(const ModelOpts& m) {
    double beta = 1.0;
    if (m.beta_opt->count()) {
        beta = m.beta;
    } else if (m.t_opt->count()) {
        if (!(m.T > 0)) throw std::invalid_argument("--T must be positive");
        beta = 1.0 / m.T;
    }
    zipper::ModelParams p{m.k, m.q, m.epsilon, parse_coupling_arg(m.J), beta};
    p.validate();
    return p;
}

struct LawOpts {
    double z = 0;
    double alpha1 = 0;
    double z1 = 0;
    std::string branch = "minus";
    CLI::Option* z_opt = nullptr;
    CLI::Option* alpha1_opt = nullptr;
    CLI::Option* z1_opt = nullptr;
};

void add_law_options(CLI::App& sub, LawOpts& l) {
    l.z_opt = sub.add_option("--z", l.z, "use the constant law with this value");
    l.alpha1_opt =
        sub.add_option("--alpha1", l.alpha1, "use the level family with this free parameter");
    l.z1_opt = sub.add_option("--z1", l.z1, "use the k = 1 geometric family with this value");
    sub.add_option("--branch", l.branch, "which constant root to take, minus or plus")
        ->check(CLI::IsMember({"minus", "plus"}));
    l.z_opt->excludes(l.alpha1_opt)->excludes(l.z1_opt);
    l.alpha1_opt->excludes(l.z1_opt);
}

zipper::LawSpec law_from(const LawOpts& l) {
    using Kind = zipper::LawSpec::Kind;
    if (l.z_opt->count()) return {Kind::constant_value, l.z};
    if (l.alpha1_opt->count()) return {Kind::level_family, l.alpha1};
    if (l.z1_opt->count()) return {Kind::geometric_family, l.z1};
    return {l.branch == "plus" ? Kind::root_plus : Kind::root_minus, 0};
}

void emit(const std::string& payload, const std::string& out_path) {
    if (out_path.empty())
        std::cout << payload;
    else
        zipper::atomic_write(out_path, payload);
}

json solve_report(int k, double theta, double eta, double tol) {
    const zipper::SolutionSet s = zipper::solve_constant(k, theta, eta, tol);
    json j;
    j["solution"] = s;
    if (k >= 2) j["eta_critical"] = zipper::compare_eta_critical(k, theta);
    json branches = json::array();
    for (double z : s.roots)
        branches.push_back({{"z", z}, {"f", zipper::b_of(z, theta, eta)}});
    j["free_energy"] = branches;
    std::cerr << "solve: " << s.count << " constant law(s), regime "
              << zipper::regime_name(s.regime) << "\n";
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"molecular zipper model on rooted Cayley trees"};
    app.require_subcommand(1);
    int status = 0;

    // solve
    auto* solve = app.add_subcommand("solve", "count and locate constant boundary laws");
    ModelOpts solve_model;
    add_model_options(*solve, solve_model);
    double solve_theta = 0, solve_eta = 0, solve_tol = 1e-12;
    auto* theta_opt = solve->add_option("--theta", solve_theta, "transfer weight of an open child");
    auto* eta_opt = solve->add_option("--eta", solve_eta, "transfer weight of a front");
    theta_opt->needs(eta_opt);
    eta_opt->needs(theta_opt);
    solve->add_option("--tol", solve_tol, "root refinement tolerance");
    std::string solve_out, solve_format = "json";
    solve->add_option("--out", solve_out, "write the report here instead of stdout");
    solve->add_option("--format", solve_format, "output format")->check(CLI::IsMember({"json"}));
    solve->callback([&] {
        json j;
        if (theta_opt->count()) {
            j = solve_report(solve_model.k, solve_theta, solve_eta, solve_tol);
        } else {
            const zipper::ModelParams p = make_params(solve_model);
            j = solve_report(p.k, p.theta(), p.eta(), solve_tol);
            j["params"] = p;
            const auto tc = zipper::critical_temperature(p.k, p.q, p.epsilon, p.J);
            j["T_cr"] = tc;
            if (p.k >= 2 && !p.j_infinite()) {
                const auto numeric =
                    zipper::critical_temperature_numeric(p.k, p.q, p.epsilon, p.J);
                j["T_cr"]["numeric"] = numeric ? json(*numeric) : json(nullptr);
            }
        }
        emit(j.dump(2) + "\n", solve_out);
    });

    // scan
    auto* scan = app.add_subcommand("scan", "sweep a temperature range into a CSV");
    ModelOpts scan_model;
    add_model_options(*scan, scan_model);
    double t_min = 0, t_max = 0;
    int scan_points = 0;
    std::string figure, scan_out, scan_format = "csv";
    auto* tmin_opt = scan->add_option("--t-min", t_min, "lowest temperature");
    auto* tmax_opt = scan->add_option("--t-max", t_max, "highest temperature");
    auto* points_opt = scan->add_option("--points", scan_points, "number of grid points");
    scan->add_option("--figure", figure, "preset grid, fig3 or fig4")
        ->check(CLI::IsMember({"fig3", "fig4"}));
    scan->add_option("--out", scan_out, "write the CSV here instead of stdout");
    scan->add_option("--format", scan_format, "output format")->check(CLI::IsMember({"csv"}));
    scan->callback([&] {
        if (figure == "fig3") {
            emit(zipper::fig3_csv(zipper::fig3_curve()), scan_out);
            std::cerr << "scan: fixed-point gap curves written\n";
            return;
        }
        zipper::ScanSpec spec;
        if (figure == "fig4") {
            spec = zipper::fig4_spec();
        } else {
            if (!tmin_opt->count() || !tmax_opt->count() || !points_opt->count())
                throw std::invalid_argument(
                    "scan: need --t-min, --t-max and --points (or a --figure preset)");
            const zipper::ModelParams p = make_params(scan_model);
            spec = {p.k, p.q, p.epsilon, p.J, t_min, t_max, scan_points};
        }
        const auto rows = zipper::phase_scan(spec);
        emit(zipper::scan_csv(spec, rows), scan_out);
        std::cerr << "scan: " << rows.size() << " rows\n";
    });

    // verify
    auto* verify = app.add_subcommand("verify", "run the self-verification battery");
    ModelOpts verify_model;
    add_model_options(*verify, verify_model);
    LawOpts verify_law;
    add_law_options(*verify, verify_law);
    int verify_n = 3;
    double perturb = 0;
    std::uint64_t verify_seed = 0x5a1ad2026ULL;
    bool battery = false;
    std::string verify_out;
    auto* n_opt = verify->add_option("--n", verify_n, "tree depth for a single case");
    verify->add_flag("--battery", battery, "run the full standard battery");
    verify->add_option("--perturb", perturb,
                       "shift every law value by this amount (negative control)");
    verify->add_option("--seed", verify_seed, "sampling seed");
    verify->add_option("--out", verify_out, "write the JSON report here instead of stdout");
    verify->callback([&] {
        std::vector<zipper::OracleCase> cases;
        const bool single = n_opt->count() || verify_law.z_opt->count() ||
                            verify_law.alpha1_opt->count() || verify_law.z1_opt->count();
        if (battery || !single) {
            cases = zipper::default_battery();
        } else {
            cases.push_back(
                {"cli_case", make_params(verify_model), verify_n, law_from(verify_law)});
        }
        const zipper::VerifyReport report =
            zipper::verify_all(cases, zipper::VerifyTolerances{}, perturb, verify_seed);

        json j;
        j["verify"] = report;
        bool align_ok = true;
        json aligns = json::array();
        for (const auto& [q, a] : {std::pair<int, double>{2, 0.5}, {4, 2.0}}) {
            try {
                aligns.push_back(zipper::align_1d(q, 1.0, std::log(q / a), 6));
            } catch (const std::exception& e) {
                aligns.push_back({{"error", e.what()}});
                align_ok = false;
            }
        }
        j["align_1d"] = aligns;
        emit(j.dump(2) + "\n", verify_out);

        int passed = 0;
        for (const auto& row : report.rows) passed += row.pass;
        std::cerr << "verify: " << passed << "/" << report.rows.size() << " cases passed";
        if (perturb != 0) std::cerr << " (perturbed by " << perturb << ")";
        std::cerr << "\n";
        if (!report.all_pass || !align_ok) status = 1;
    });

    // sample
    auto* sample_cmd = app.add_subcommand("sample", "draw exact configurations under a law");
    ModelOpts sample_model;
    add_model_options(*sample_cmd, sample_model);
    LawOpts sample_law;
    add_law_options(*sample_cmd, sample_law);
    int sample_n = 3, sample_count = 1;
    std::uint64_t sample_seed = 1;
    std::string sample_out;
    sample_cmd->add_option("--n", sample_n, "tree depth");
    sample_cmd->add_option("--count", sample_count, "number of configurations");
    sample_cmd->add_option("--seed", sample_seed, "random seed");
    sample_cmd->add_option("--out", sample_out, "write the JSON here instead of stdout");
    sample_cmd->callback([&] {
        const zipper::ModelParams p = make_params(sample_model);
        const zipper::OracleCase c{"sample", p, sample_n, law_from(sample_law)};
        const zipper::BoundaryLaw law = zipper::build_law(c);
        const auto configs = zipper::sample_many(p, law, sample_n, sample_seed, sample_count);

        std::vector<double> mean_open(static_cast<std::size_t>(sample_n) + 1, 0.0);
        json samples = json::array();
        for (const auto& cfg : configs) {
            samples.push_back(zipper::configuration_to_json(cfg));
            const auto frac = zipper::open_fraction_by_depth(cfg);
            for (std::size_t d = 0; d < frac.size(); ++d) mean_open[d] += frac[d] / configs.size();
        }
        json j;
        j["params"] = p;
        j["n"] = sample_n;
        j["seed"] = sample_seed;
        j["count"] = sample_count;
        j["samples"] = samples;
        j["mean_open_fraction_by_depth"] = mean_open;
        emit(j.dump(2) + "\n", sample_out);
        std::cerr << "sample: " << configs.size() << " configuration(s)\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return status;
}
