#pragma once

// Brute-force ground truth for small volumes, and the verification battery
// built on it. Everything here recomputes quantities the library derives
// analytically, by direct enumeration of admissible configurations, so the
// two paths share no code beyond the Hamiltonian and the field values.
//
// The enumeration cost is bounded by admissible_count(k, q, n) against an
// explicit guard; cases past the guard skip the exhaustive checks and keep
// the analytic ones (residual, recursion, class-level compatibility,
// sampling frequencies), which is recorded per row.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "zipper/boundary_law.hpp"
#include "zipper/gibbs.hpp"
#include "zipper/model.hpp"
#include "zipper/numeric.hpp"
#include "zipper/thermo.hpp"
#include "zipper/tree.hpp"

namespace zipper {

// ln Z_n by summing Boltzmann factors over every admissible configuration.
inline double log_z_exhaustive(const ModelParams& p, const BoundaryFields& fields, int n,
                               double guard = kEnumerationGuard) {
    if (n < 1) throw std::invalid_argument("log_z_exhaustive: n must be >= 1");
    if (fields.n != n) throw std::invalid_argument("log_z_exhaustive: field depth mismatch");
    const std::int64_t boundary_offset = volume(p.k, n - 1);
    const std::int64_t total = volume(p.k, n);
    std::vector<double> lws;
    for_each_admissible(
        p.k, p.q, n,
        [&](const Configuration& c) {
            double lw = -p.beta * hamiltonian(c, p);
            for (std::int64_t i = boundary_offset; i < total; ++i) {
                const double h0 = fields.h0_at(static_cast<std::size_t>(i - boundary_offset));
                lw += c.at_index(i) == 0 ? h0 : -h0;
            }
            lws.push_back(lw);
        },
        guard);
    return log_sum_exp(lws);
}

// Relative disagreement between the transfer recursion and the enumeration,
// |Z_dp/Z_exhaustive - 1| evaluated in the log domain.
inline double dp_vs_exhaustive(const ModelParams& p, const BoundaryLaw& law, int n,
                               double guard = kEnumerationGuard) {
    const BoundaryFields fields = fields_from_law(law, n, p.k);
    const double lz_dp = log_partition_dp(p, fields, n);
    const double lz_ex = log_z_exhaustive(p, fields, n, guard);
    return std::abs(std::expm1(lz_dp - lz_ex));
}

// Marginalizes the depth-n measure onto the depth-(n-1) volume by direct
// summation and compares against the depth-(n-1) measure, configuration by
// configuration. Independent of the class-level shortcut in gibbs.hpp.
inline double compatibility_exhaustive(const ModelParams& p, const BoundaryLaw& law, int n,
                                       double guard = kEnumerationGuard) {
    if (n < 2) throw std::invalid_argument("compatibility_exhaustive: n must be >= 2");
    const BoundaryFields fields_n = fields_from_law(law, n, p.k);
    const BoundaryFields fields_m = fields_from_law(law, n - 1, p.k);
    const double lzn = log_z_exhaustive(p, fields_n, n, guard);
    const double lzm = log_z_exhaustive(p, fields_m, n - 1, guard);

    const std::int64_t vol_m = volume(p.k, n - 1);
    std::map<std::vector<std::int32_t>, double> marginal;
    const std::int64_t boundary_offset = vol_m;
    const std::int64_t total = volume(p.k, n);
    for_each_admissible(
        p.k, p.q, n,
        [&](const Configuration& c) {
            double lw = -p.beta * hamiltonian(c, p);
            for (std::int64_t i = boundary_offset; i < total; ++i) {
                const double h0 = fields_n.h0_at(static_cast<std::size_t>(i - boundary_offset));
                lw += c.at_index(i) == 0 ? h0 : -h0;
            }
            std::vector<std::int32_t> prefix(static_cast<std::size_t>(vol_m));
            for (std::int64_t i = 0; i < vol_m; ++i)
                prefix[static_cast<std::size_t>(i)] = c.at_index(i);
            marginal[prefix] += std::exp(lw - lzn);
        },
        guard);

    const std::int64_t inner_offset = volume(p.k, n - 2);
    double worst = 0.0;
    for_each_admissible(
        p.k, p.q, n - 1,
        [&](const Configuration& c) {
            double lw = -p.beta * hamiltonian(c, p);
            for (std::int64_t i = inner_offset; i < vol_m; ++i) {
                const double h0 = fields_m.h0_at(static_cast<std::size_t>(i - inner_offset));
                lw += c.at_index(i) == 0 ? h0 : -h0;
            }
            std::vector<std::int32_t> key(static_cast<std::size_t>(vol_m));
            for (std::int64_t i = 0; i < vol_m; ++i)
                key[static_cast<std::size_t>(i)] = c.at_index(i);
            const auto it = marginal.find(key);
            const double lhs = it == marginal.end() ? 0.0 : it->second;
            worst = std::max(worst, std::abs(lhs - std::exp(lw - lzm)));
        },
        guard);
    return worst;
}

// Counts sign changes of f(z) = (theta z + eta)^k - z over a geometric grid
// z in [1e-8, B], with B doubled until f provably stays positive beyond it:
// (theta B + eta)^k >= 2B together with theta B >= eta forces f increasing
// and positive past B. A grid point landing exactly on a root counts once.
inline int sign_change_scan(int k, double theta, double eta, int points = 4096) {
    if (k < 1 || !(theta > 0) || !(eta >= 0))
        throw std::invalid_argument("sign_change_scan: need k >= 1, theta > 0, eta >= 0");
    if (points < 2) throw std::invalid_argument("sign_change_scan: need at least two points");
    double upper = 1.0;
    for (int i = 0; i < 200; ++i) {
        if (std::pow(theta * upper + eta, k) >= 2 * upper && theta * upper >= eta) break;
        upper *= 2;
    }
    const double lo = 1e-8;
    const double ratio = std::pow(upper / lo, 1.0 / (points - 1));
    int count = 0;
    double prev = constant_equation(k, theta, eta, lo);
    bool fresh = prev == 0;
    if (fresh) ++count;
    double z = lo;
    for (int i = 1; i < points; ++i) {
        z = i + 1 == points ? upper : z * ratio;
        const double cur = constant_equation(k, theta, eta, z);
        if (cur == 0) {
            ++count;
            fresh = true;
            continue;
        }
        if (!fresh && (prev < 0) != (cur < 0)) ++count;
        prev = cur;
        fresh = false;
    }
    return count;
}

// Reconciliation of the 1D chain with the k = 1 tree. The chain's hard
// constraint (an open link never follows a closed one) is exactly the
// tree's admissibility, so the chain corresponds to the k = 1 tree with no
// front penalty: chain length N maps to tree depth N - 1 and chain J = inf
// maps to tree J = 0. The literal J = inf tree value is reported alongside
// to document that it is a different quantity (only the fully open and
// fully closed configurations survive).
struct Align1dReport {
    int q = 1;
    double beta = 1;
    double epsilon = 0;
    int N = 2;
    double a = 0;                  // q e^{-beta epsilon}
    double z_closed_form = 0;      // (1 - a^N)/(1 - a)
    double z_chain_enum = std::numeric_limits<double>::quiet_NaN();
    double z_tree_aligned = 0;     // k = 1 tree, J = 0, depth N - 1, zero fields
    double z_tree_literal = 0;     // k = 1 tree, J = inf, same depth
    double max_rel_error = 0;      // worst disagreement among the equivalent three
    std::string convention;
};

inline Align1dReport align_1d(int q, double beta, double epsilon, int N,
                              double guard = kEnumerationGuard) {
    if (N < 2 || q < 1) throw std::invalid_argument("align_1d: need N >= 2, q >= 1");
    Align1dReport r;
    r.q = q;
    r.beta = beta;
    r.epsilon = epsilon;
    r.N = N;
    r.a = q * std::exp(-beta * epsilon);
    r.z_closed_form = kittel_1d_partition(q, beta, epsilon, N);

    // Direct sum over the chain: links 1..N-1 free, link N pinned closed,
    // any open link directly after a closed one is forbidden.
    if (std::pow(q + 1.0, N - 1) <= guard) {
        std::vector<int> s(static_cast<std::size_t>(N) + 1, 0);
        double total = 0.0;
        const auto walk = [&](auto&& self, int link) -> void {
            if (link == N) {
                int open = 0;
                for (int i = 1; i < N; ++i) open += s[static_cast<std::size_t>(i)] != 0;
                total += std::exp(-beta * epsilon * open);
                return;
            }
            for (int spin = 0; spin <= q; ++spin) {
                if (spin != 0 && link >= 2 && s[static_cast<std::size_t>(link) - 1] == 0) continue;
                s[static_cast<std::size_t>(link)] = spin;
                self(self, link + 1);
            }
            s[static_cast<std::size_t>(link)] = 0;
        };
        walk(walk, 1);
        r.z_chain_enum = total;
    }

    BoundaryFields zero_fields;
    zero_fields.n = N - 1;
    zero_fields.uniform = true;
    zero_fields.h0_uniform = 0.0;
    const ModelParams aligned{1, q, epsilon, 0.0, beta};
    const ModelParams literal{1, q, epsilon, j_infinite_coupling, beta};
    r.z_tree_aligned = std::exp(log_partition_dp(aligned, zero_fields, N - 1));
    r.z_tree_literal = std::exp(log_partition_dp(literal, zero_fields, N - 1));

    const auto rel = [&](double v) { return std::abs(v - r.z_closed_form) / r.z_closed_form; };
    r.max_rel_error = rel(r.z_tree_aligned);
    if (!std::isnan(r.z_chain_enum)) r.max_rel_error = std::max(r.max_rel_error, rel(r.z_chain_enum));
    if (r.max_rel_error > 1e-10)
        throw std::runtime_error("align_1d: chain and tree conventions disagree");
    r.convention =
        "chain links 1..N map to tree depths N-1..0; the chain's hard staircase "
        "constraint is the tree's admissibility, so the aligned tree uses J = 0";
    return r;
}

// One verification case: a parameter point, a depth, and a recipe for the
// boundary law under test.
struct LawSpec {
    enum class Kind { root_minus, root_plus, constant_value, level_family, geometric_family };
    Kind kind = Kind::root_minus;
    double value = 0;  // z for constant_value, alpha1 for level, z1 for geometric
};

inline const char* law_spec_name(LawSpec::Kind kind) {
    switch (kind) {
        case LawSpec::Kind::root_minus: return "root_minus";
        case LawSpec::Kind::root_plus: return "root_plus";
        case LawSpec::Kind::constant_value: return "constant_value";
        case LawSpec::Kind::level_family: return "level_family";
        case LawSpec::Kind::geometric_family: return "geometric_family";
    }
    return "unknown";
}

struct OracleCase {
    std::string id;
    ModelParams params;
    int n = 2;
    LawSpec law;
};

inline BoundaryLaw build_law(const OracleCase& c) {
    switch (c.law.kind) {
        case LawSpec::Kind::root_minus:
        case LawSpec::Kind::root_plus: {
            const SolutionSet s = solve_constant(c.params);
            if (s.count == 0)
                throw std::runtime_error("build_law: no constant law at these parameters (" +
                                         c.id + ")");
            return constant_law(c.law.kind == LawSpec::Kind::root_minus ? s.roots.front()
                                                                        : s.roots.back());
        }
        case LawSpec::Kind::constant_value:
            return constant_law(c.law.value);
        case LawSpec::Kind::level_family:
            return j_infinite_level_family(c.params, c.law.value, c.n);
        case LawSpec::Kind::geometric_family:
            if (c.params.k != 1 || !c.params.j_infinite())
                throw std::invalid_argument("build_law: geometric family needs k = 1, J = inf");
            return j_infinite_1d_family(c.params.theta(), c.law.value, c.n);
    }
    throw std::logic_error("build_law: unhandled law kind");
}

// The standard battery: k in {1,2,3}, q in {1,2,8}, n in {2,3,4}, with
// epsilon = ln(q/2) at beta = 1 so theta = 1/2 everywhere. Finite coupling
// J = ln 4 puts eta = 1/4 below critical for k in {2,3} (eta_c = 1/2 and
// about 0.544) and keeps the k = 1 root at 1/2. The J = inf rows exercise
// the level family (k >= 2) and the geometric family (k = 1). Two extra
// n = 1 rows keep (2,8) and (3,8) inside the enumeration guard.
inline std::vector<OracleCase> default_battery() {
    std::vector<OracleCase> cases;
    const double j_finite = std::log(4.0);
    for (int k : {1, 2, 3}) {
        for (int q : {1, 2, 8}) {
            const double epsilon = std::log(q / 2.0);
            const ModelParams finite{k, q, epsilon, j_finite, 1.0};
            const ModelParams frozen{k, q, epsilon, j_infinite_coupling, 1.0};
            for (int n : {2, 3, 4}) {
                const std::string stem =
                    "k" + std::to_string(k) + "_q" + std::to_string(q) + "_n" + std::to_string(n);
                cases.push_back({stem + "_root", finite, n, {LawSpec::Kind::root_minus, 0}});
                if (k == 1) {
                    cases.push_back(
                        {stem + "_geo", frozen, n, {LawSpec::Kind::geometric_family, 1.0}});
                } else {
                    cases.push_back({stem + "_plus", finite, n, {LawSpec::Kind::root_plus, 0}});
                    cases.push_back(
                        {stem + "_level", frozen, n, {LawSpec::Kind::level_family, 1.0}});
                }
            }
        }
    }
    cases.push_back({"k2_q8_n1_root", ModelParams{2, 8, std::log(8 / 2.0), j_finite, 1.0}, 1,
                     {LawSpec::Kind::root_minus, 0}});
    cases.push_back({"k3_q8_n1_root", ModelParams{3, 8, std::log(8 / 2.0), j_finite, 1.0}, 1,
                     {LawSpec::Kind::root_minus, 0}});
    return cases;
}

struct VerifyTolerances {
    double residual = 1e-12;
    double compatibility = 1e-10;
    double recursion = 1e-10;
    double dp_vs_ex = 1e-12;
    double sample_sigmas = 4.0;
    int sample_count = 2000;
    double guard = kEnumerationGuard;
};

struct CaseReport {
    std::string id;
    ModelParams params;
    int n = 0;
    std::string law_kind;
    double omega_count = 0;
    bool exhaustive = false;
    double max_residual = std::numeric_limits<double>::quiet_NaN();
    double compatibility = std::numeric_limits<double>::quiet_NaN();
    double recursion_error = std::numeric_limits<double>::quiet_NaN();
    double dp_error = std::numeric_limits<double>::quiet_NaN();
    double exhaustive_compatibility = std::numeric_limits<double>::quiet_NaN();
    double sample_sigmas = std::numeric_limits<double>::quiet_NaN();
    double log_z_dp = std::numeric_limits<double>::quiet_NaN();
    double wall_ms = 0;
    bool pass = false;
    std::vector<std::string> failures;
};

struct VerifyReport {
    std::vector<CaseReport> rows;
    bool all_pass = false;
    double total_ms = 0;
    double perturb_delta = 0;
};

// Empirical closed-fraction of the first generation over repeated exact
// samples, in units of the binomial standard deviation. The k first-
// generation subtrees are independent given the closed root, so count * k
// draws are independent Bernoulli trials.
inline double sampling_deviation_sigmas(const ModelParams& p, const BoundaryLaw& law, int n,
                                        std::uint64_t seed, int count) {
    const double expected = closed_probabilities(p, law, n).at(1);
    std::int64_t closed = 0;
    for (int i = 0; i < count; ++i) {
        const Configuration c = sample(p, law, n, hash_word(seed, static_cast<std::uint64_t>(i)));
        for (int j = 0; j < p.k; ++j) closed += c.at_index(1 + j) == 0;
    }
    const double trials = static_cast<double>(count) * p.k;
    const double observed = closed / trials;
    const double sigma = std::sqrt(expected * (1 - expected) / trials);
    if (sigma == 0) return observed == expected ? 0.0 : kPosInf;
    return std::abs(observed - expected) / sigma;
}

inline CaseReport run_case(const OracleCase& c, const VerifyTolerances& tol, double perturb_delta,
                           std::uint64_t seed) {
    const auto t0 = std::chrono::steady_clock::now();
    CaseReport r;
    r.id = c.id;
    r.params = c.params;
    r.n = c.n;
    r.law_kind = law_spec_name(c.law.kind);
    const ModelParams& p = c.params;
    BoundaryLaw law = build_law(c);
    if (perturb_delta != 0) law = perturbed(law, perturb_delta);

    const auto check = [&](const char* name, double value, double bound) {
        if (std::isnan(value)) return;
        if (!(value <= bound)) r.failures.push_back(name);
    };

    r.omega_count = admissible_count(p.k, p.q, c.n);
    r.exhaustive = r.omega_count <= tol.guard;
    r.max_residual = max_residual(law, p, c.n);
    r.log_z_dp = log_partition_dp(p, law, c.n);
    if (c.n >= 2) {
        r.compatibility = compatibility_error(p, law, c.n);
        r.recursion_error = z_recursion_error(p, law, c.n);
    }
    if (r.exhaustive) {
        r.dp_error = dp_vs_exhaustive(p, law, c.n, tol.guard);
        if (c.n >= 2) r.exhaustive_compatibility = compatibility_exhaustive(p, law, c.n, tol.guard);
    }
    r.sample_sigmas = sampling_deviation_sigmas(p, law, c.n, seed, tol.sample_count);

    check("residual", r.max_residual, tol.residual);
    check("compatibility", r.compatibility, tol.compatibility);
    check("recursion", r.recursion_error, tol.recursion);
    check("dp_vs_exhaustive", r.dp_error, tol.dp_vs_ex);
    check("exhaustive_compatibility", r.exhaustive_compatibility, tol.compatibility);
    check("sampling", r.sample_sigmas, tol.sample_sigmas);
    r.pass = r.failures.empty();
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
    return r;
}

inline VerifyReport verify_all(const std::vector<OracleCase>& cases,
                               const VerifyTolerances& tol = {}, double perturb_delta = 0,
                               std::uint64_t seed = 0x5a1ad2026ULL) {
    VerifyReport report;
    report.perturb_delta = perturb_delta;
    report.all_pass = true;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < cases.size(); ++i) {
        report.rows.push_back(
            run_case(cases[i], tol, perturb_delta, hash_word(seed, static_cast<std::uint64_t>(i))));
        report.all_pass = report.all_pass && report.rows.back().pass;
    }
    report.total_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace zipper
