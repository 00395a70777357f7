#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "zipper/io.hpp"

using zipper::json;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(ZIPPER_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t got = 0;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    const int rc = pclose(pipe);
    CliResult r;
    if (WIFEXITED(rc)) r.exit_code = WEXITSTATUS(rc);
    r.out = out;
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const std::string kLn4 = "1.3862943611198906";

}  // namespace

TEST_CASE("solve reports roots and the critical-coupling comparison") {
    const CliResult r = run_cli("solve --k 2 --theta 0.5 --eta 0.25");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    REQUIRE(j.at("solution").at("count") == 2);
    const auto roots = j.at("solution").at("roots");
    REQUIRE(roots.size() == 2);
    REQUIRE(roots[0].get<double>() < roots[1].get<double>());
    REQUIRE(j.at("solution").at("regime") == "below_critical");
    REQUIRE(j.at("eta_critical").at("verdict") == "both");
    REQUIRE(j.at("free_energy").size() == 2);
}

TEST_CASE("solve accepts model parameters and adds the temperature structure") {
    const CliResult r =
        run_cli("solve --k 2 --q 2 --epsilon 0 --J " + kLn4 + " --T 1.0");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    REQUIRE(j.at("params").at("k") == 2);
    REQUIRE(j.at("solution").at("count") == 2);
    REQUIRE(j.at("T_cr").at("in_set_A") == true);
    REQUIRE_THAT(j.at("T_cr").at("value").get<double>(),
                 Catch::Matchers::WithinRel(2.0, 1e-9));
}

TEST_CASE("solve usage errors exit with 2") {
    REQUIRE(run_cli("solve --theta 0.5").exit_code == 2);               // --theta needs --eta
    REQUIRE(run_cli("solve --k 2 --theta 0.5 --eta 0.25 --beta 1 --T 1").exit_code == 2);
    REQUIRE(run_cli("solve --k 0 --theta 0.5 --eta 0.25").exit_code == 2);
    REQUIRE(run_cli("solve --k 2 --q 2 --epsilon 0 --J frozen").exit_code == 2);
}

TEST_CASE("scan preset matches the in-process sweep") {
    const std::string path = "cli_test_fig4.csv";
    const CliResult r = run_cli("scan --figure fig4 --out " + path);
    REQUIRE(r.exit_code == 0);
    const auto parsed = zipper::parse_scan_csv(slurp(path));
    std::remove(path.c_str());

    const auto direct = zipper::phase_scan(zipper::fig4_spec());
    REQUIRE(parsed.size() == direct.size());
    REQUIRE(parsed.size() == 201);
    REQUIRE(parsed.front().T == 1.0);
    REQUIRE(parsed.front().t_cr_flag == 1);
    for (std::size_t i : {std::size_t{0}, std::size_t{100}, std::size_t{200}}) {
        REQUIRE(parsed[i].T == direct[i].T);
        REQUIRE(parsed[i].eta == direct[i].eta);
        REQUIRE(parsed[i].n_tigm == direct[i].n_tigm);
        if (direct[i].n_tigm > 0) {
            REQUIRE(parsed[i].z_minus == direct[i].z_minus);
            REQUIRE(parsed[i].f_plus == direct[i].f_plus);
        }
    }
}

TEST_CASE("scan emits the fixed-point gap preset") {
    const CliResult r = run_cli("scan --figure fig3");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out.rfind("#", 0) == 0);
    REQUIRE(r.out.find("z,f_above,f_critical,f_below") != std::string::npos);
    int data_rows = 0;
    std::istringstream in(r.out);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#' && line[0] != 'z') ++data_rows;
    REQUIRE(data_rows == 201);
}

TEST_CASE("scan without a preset needs an explicit range") {
    REQUIRE(run_cli("scan --k 2 --q 2 --epsilon 0 --J 0.1").exit_code == 2);
    const CliResult r = run_cli(
        "scan --k 1 --q 2 --epsilon 0.5 --J 0.25 --t-min 0.5 --t-max 1.5 --points 5");
    REQUIRE(r.exit_code == 0);
    REQUIRE(zipper::parse_scan_csv(r.out).size() == 5);
}

TEST_CASE("verify passes on a consistent case and flags a perturbed one") {
    const std::string args = "verify --k 2 --q 2 --epsilon 0 --J " + kLn4 + " --n 2";
    const CliResult clean = run_cli(args);
    REQUIRE(clean.exit_code == 0);
    const json j = json::parse(clean.out);
    REQUIRE(j.at("verify").at("all_pass") == true);
    REQUIRE(j.at("verify").at("cases").size() == 1);
    REQUIRE(j.at("align_1d").size() == 2);
    for (const auto& a : j.at("align_1d")) REQUIRE_FALSE(a.contains("error"));

    const CliResult off = run_cli(args + " --perturb 1e-3");
    REQUIRE(off.exit_code == 1);
    REQUIRE(json::parse(off.out).at("verify").at("all_pass") == false);
}

TEST_CASE("sampling is reproducible and respects the frozen constraint") {
    const std::string args =
        "sample --k 2 --q 2 --epsilon 0 --J inf --alpha1 1 --n 3 --count 5 --seed 7";
    const CliResult first = run_cli(args);
    REQUIRE(first.exit_code == 0);
    REQUIRE(run_cli(args).out == first.out);

    const json j = json::parse(first.out);
    REQUIRE(j.at("count") == 5);
    REQUIRE(j.at("samples").size() == 5);
    for (const auto& s : j.at("samples")) {
        REQUIRE(s.at("ε") == 0);
        const auto c = zipper::configuration_from_json(s, 2, 3);
        REQUIRE(zipper::is_admissible(c));
    }
    REQUIRE(j.at("mean_open_fraction_by_depth").size() == 4);
}

TEST_CASE("sample draws from the order-1 geometric family") {
    const CliResult r = run_cli(
        "sample --k 1 --q 2 --epsilon 0 --J inf --z1 1.0 --n 4 --count 3 --seed 11");
    REQUIRE(r.exit_code == 0);
    REQUIRE(json::parse(r.out).at("samples").size() == 3);
}

TEST_CASE("top-level usage errors exit with 2 and help exits clean") {
    REQUIRE(run_cli("").exit_code == 2);
    REQUIRE(run_cli("frobnicate").exit_code == 2);
    REQUIRE(run_cli("solve --no-such-flag 1").exit_code == 2);
    REQUIRE(run_cli("--help").exit_code == 0);
    REQUIRE(run_cli("solve --help").exit_code == 0);
}
