#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "zipper/oracle.hpp"

using namespace zipper;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("exhaustive partition sum on a trivially countable case") {
    // Zero energies and zero fields make every admissible configuration
    // weigh one, so Z is the configuration count.
    const ModelParams p{1, 1, 0.0, 0.0, 1.0};
    const BoundaryFields f = fields_from_law(constant_law(1.0), 2, 1);
    REQUIRE_THAT(std::exp(log_z_exhaustive(p, f, 2)), WithinRel(3.0, 1e-13));

    const ModelParams wide{2, 2, 0.0, 0.0, 1.0};
    const BoundaryFields wf = fields_from_law(constant_law(1.0), 2, 2);
    REQUIRE_THAT(std::exp(log_z_exhaustive(wide, wf, 2)),
                 WithinRel(admissible_count(2, 2, 2), 1e-12));
}

TEST_CASE("sign-change scan counts fixed points") {
    REQUIRE(sign_change_scan(2, 0.5, 0.25) == 2);
    REQUIRE(sign_change_scan(2, 0.5, 0.6) == 0);
    REQUIRE(sign_change_scan(2, 0.5, 0.0) == 1);
    REQUIRE(sign_change_scan(3, 2.0, 0.1) == 2);
    REQUIRE(sign_change_scan(1, 0.5, 0.25) == 1);
    for (int k : {2, 3}) {
        for (double theta : {0.3, 1.7}) {
            const double eta_c = eta_critical(k, theta);
            for (double r : {0.5, 1.5})
                REQUIRE(sign_change_scan(k, theta, r * eta_c) ==
                        count_solutions(k, theta, r * eta_c));
        }
    }
}

TEST_CASE("chain alignment reconciles the three computations") {
    const Align1dReport r = align_1d(2, 1.0, std::log(4.0), 6);  // a = 1/2
    REQUIRE_THAT(r.a, WithinRel(0.5, 1e-14));
    REQUIRE_FALSE(std::isnan(r.z_chain_enum));
    REQUIRE(r.max_rel_error <= 1e-10);
    REQUIRE_THAT(r.z_chain_enum, WithinRel(r.z_closed_form, 1e-12));
    REQUIRE_THAT(r.z_tree_aligned, WithinRel(r.z_closed_form, 1e-12));
    // The literal frozen tree keeps only the fully closed and fully open
    // configurations: a different quantity, reported for the record.
    REQUIRE_THAT(r.z_tree_literal, WithinRel(1.0 + std::pow(0.5, 5), 1e-12));
    REQUIRE_FALSE(r.convention.empty());
}

TEST_CASE("chain alignment skips enumeration past the guard") {
    const Align1dReport r = align_1d(8, 1.0, std::log(4.0), 12);  // 9^11 assignments
    REQUIRE(std::isnan(r.z_chain_enum));
    REQUIRE(r.max_rel_error <= 1e-10);
    REQUIRE_THROWS_AS(align_1d(2, 1.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("standard battery shape") {
    const auto battery = default_battery();
    REQUIRE(battery.size() == 74);
    std::set<std::string> ids;
    int frozen = 0, n1 = 0;
    for (const auto& c : battery) {
        ids.insert(c.id);
        REQUIRE_NOTHROW(c.params.validate());
        frozen += c.params.j_infinite();
        n1 += c.n == 1;
        if (c.params.k == 1)
            REQUIRE(c.law.kind != LawSpec::Kind::level_family);
        else
            REQUIRE(c.law.kind != LawSpec::Kind::geometric_family);
        REQUIRE_THAT(c.params.theta(), WithinRel(0.5, 1e-13));
    }
    REQUIRE(ids.size() == battery.size());
    REQUIRE(frozen == 27);  // one frozen row per (k, q, n)
    REQUIRE(n1 == 2);
}

TEST_CASE("battery rows verify clean and fail when perturbed") {
    std::vector<OracleCase> slice;
    for (const auto& c : default_battery()) {
        if (c.id == "k1_q2_n3_root" || c.id == "k2_q2_n2_root" || c.id == "k2_q2_n2_plus" ||
            c.id == "k2_q1_n3_level" || c.id == "k3_q2_n2_root" || c.id == "k1_q8_n2_geo")
            slice.push_back(c);
    }
    REQUIRE(slice.size() == 6);

    const VerifyReport clean = verify_all(slice);
    REQUIRE(clean.all_pass);
    for (const auto& row : clean.rows) {
        REQUIRE(row.pass);
        REQUIRE(row.failures.empty());
        REQUIRE(row.exhaustive);
        REQUIRE(row.max_residual <= 1e-12);
        REQUIRE(row.compatibility <= 1e-10);
        REQUIRE(row.recursion_error <= 1e-10);
        REQUIRE(row.dp_error <= 1e-12);
        REQUIRE(row.exhaustive_compatibility <= 1e-10);
        REQUIRE(row.sample_sigmas < 4.0);
        REQUIRE(std::isfinite(row.log_z_dp));
    }

    const VerifyReport off = verify_all(slice, VerifyTolerances{}, 1e-3);
    REQUIRE_FALSE(off.all_pass);
    for (const auto& row : off.rows) {
        REQUIRE_FALSE(row.pass);
        REQUIRE(row.compatibility >= 1e-6);  // perturbation is loud, not marginal
    }
}

TEST_CASE("depth-1 rows skip the undefined checks") {
    OracleCase c{"n1", ModelParams{2, 8, std::log(4.0), std::log(4.0), 1.0}, 1,
                 {LawSpec::Kind::root_minus, 0}};
    const CaseReport r = run_case(c, VerifyTolerances{}, 0.0, 1);
    REQUIRE(r.pass);
    REQUIRE(std::isnan(r.compatibility));
    REQUIRE(std::isnan(r.recursion_error));
    REQUIRE(r.exhaustive);
    REQUIRE(r.dp_error <= 1e-12);
}

TEST_CASE("infeasible enumerations throw loudly") {
    const ModelParams p{3, 8, std::log(4.0), std::log(4.0), 1.0};
    const BoundaryLaw law = constant_law(solve_constant(p).roots[0]);
    REQUIRE_THROWS_AS(dp_vs_exhaustive(p, law, 3), std::length_error);
    REQUIRE_THROWS_AS(compatibility_exhaustive(p, law, 3), std::length_error);
}

TEST_CASE("build_law covers every recipe") {
    const ModelParams finite{2, 2, 0.0, std::log(4.0), 1.0};
    const ModelParams frozen{2, 2, 0.0, j_infinite_coupling, 1.0};
    const OracleCase minus{"m", finite, 2, {LawSpec::Kind::root_minus, 0}};
    const OracleCase plus{"p", finite, 2, {LawSpec::Kind::root_plus, 0}};
    REQUIRE(build_law(minus).constant_z < build_law(plus).constant_z);

    const OracleCase fixed{"f", finite, 2, {LawSpec::Kind::constant_value, 0.7}};
    REQUIRE(build_law(fixed).constant_z == 0.7);

    const OracleCase level{"l", frozen, 3, {LawSpec::Kind::level_family, 1.0}};
    REQUIRE(build_law(level).kind == LawKind::LevelDependent);

    const OracleCase deep{"x", ModelParams{2, 2, 0.0, std::log(16.0), 1.0}, 2,
                          {LawSpec::Kind::root_minus, 0}};  // eta = 1/16, well below critical
    REQUIRE_NOTHROW(build_law(deep));
    const OracleCase above{"a", ModelParams{2, 2, 2.0, 0.05, 1.0}, 2,
                           {LawSpec::Kind::root_minus, 0}};
    REQUIRE_THROWS_AS(build_law(above), std::runtime_error);

    const OracleCase bad_geo{"g", finite, 2, {LawSpec::Kind::geometric_family, 1.0}};
    REQUIRE_THROWS_AS(build_law(bad_geo), std::invalid_argument);
}
