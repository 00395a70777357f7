#pragma once

// Boundary laws: positive vertex functions z_x satisfying the consistency
// equation z_x = prod_{y in S(x)} (theta z_y + eta). Each solution induces a
// compatible family of finite-volume Gibbs distributions (gibbs.hpp).
//
// Constant solutions are the positive roots of
//     f(z) = (theta z + eta)^k - z,
// a convex function with at most two of them. Their count drops from two to
// zero as eta crosses eta_c = (k-1) / (k (k theta)^{1/(k-1)}). At eta = 0
// (the J = +inf hard-front regime) the equation also admits depth-dependent
// families: z at depth n equal to theta^{alpha_n} with alpha_{n+1} =
// alpha_n/k - 1 for k >= 2, and the geometric family z_n = theta^{-(n-1)} z_1
// at k = 1. One free real parameter per family is the finite-volume seed of
// the continuum of Gibbs measures.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "zipper/model.hpp"
#include "zipper/numeric.hpp"
#include "zipper/tree.hpp"

namespace zipper {

enum class LawKind { Constant, LevelDependent, Explicit };
enum class Regime { above_critical, critical, below_critical };

inline const char* law_kind_name(LawKind k) {
    switch (k) {
        case LawKind::Constant: return "constant";
        case LawKind::LevelDependent: return "level";
        default: return "explicit";
    }
}

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::above_critical: return "above_critical";
        case Regime::critical: return "critical";
        default: return "below_critical";
    }
}

// z values per vertex. Constant laws hold one value; level-dependent laws
// store one value per depth (index = depth, materialized to `horizon`) and a
// constant tail beyond; explicit laws store a per-vertex map.
struct BoundaryLaw {
    LawKind kind = LawKind::Constant;
    double constant_z = 1.0;
    std::vector<double> levels;  // levels[d] = z at depth d, 0 <= d <= horizon
    double tail_z = 1.0;
    std::unordered_map<VertexId, double, VertexIdHash> by_vertex;
    int horizon = 0;

    bool depth_homogeneous() const { return kind != LawKind::Explicit; }

    double z_at_depth(int d) const {
        if (d < 0) throw std::invalid_argument("BoundaryLaw: negative depth");
        switch (kind) {
            case LawKind::Constant: return constant_z;
            case LawKind::LevelDependent:
                return d <= horizon ? levels[static_cast<std::size_t>(d)] : tail_z;
            default:
                throw std::invalid_argument("BoundaryLaw: explicit laws are not depth-homogeneous");
        }
    }

    double z_at(const VertexId& v) const {
        if (kind != LawKind::Explicit) return z_at_depth(v.depth());
        auto it = by_vertex.find(v);
        if (it == by_vertex.end())
            throw std::out_of_range("BoundaryLaw: no value stored at " + v.to_string());
        return it->second;
    }
};

inline double constant_equation(int k, double theta, double eta, double z) {
    return std::pow(theta * z + eta, k) - z;
}

inline double constant_equation_deriv(int k, double theta, double eta, double z) {
    return k * theta * std::pow(theta * z + eta, k - 1) - 1.0;
}

// Location of the minimum of f on z > 0 (valid when the result is positive).
inline double z_star(int k, double theta, double eta) {
    if (k < 2) throw std::domain_error("z_star: defined for k >= 2");
    return (std::pow(k * theta, -1.0 / (k - 1)) - eta) / theta;
}

inline double eta_critical(int k, double theta) {
    if (k < 2) throw std::domain_error("eta_critical: defined for k >= 2");
    if (!(theta > 0)) throw std::invalid_argument("eta_critical: theta must be positive");
    return (k - 1.0) / (k * std::pow(k * theta, 1.0 / (k - 1)));
}

// The k = 2 closed form 1/(4 theta), the double-root condition of the
// quadratic. Kept callable at any theta so tests can compare it against the
// general formula and the numeric double-root criterion.
inline double eta_critical_k2(double theta) {
    if (!(theta > 0)) throw std::invalid_argument("eta_critical_k2: theta must be positive");
    return 1.0 / (4.0 * theta);
}

struct MinPoint {
    double z = 0;
    double value = 0;
};

// Formula-free minimum of f over z >= 0: golden-section search on a bracket
// grown until f is increasing at the right edge. Falls back to the z = 0
// boundary when f is increasing from the start (large eta).
inline MinPoint constant_equation_min(int k, double theta, double eta) {
    if (k < 2) throw std::domain_error("constant_equation_min: defined for k >= 2");
    auto f = [&](double z) { return constant_equation(k, theta, eta, z); };
    if (constant_equation_deriv(k, theta, eta, 0.0) >= 0) return {0.0, f(0.0)};
    double hi = 1.0;
    while (constant_equation_deriv(k, theta, eta, hi) < 0) hi *= 2;
    const double zm = golden_min(f, 0.0, hi);
    return {zm, f(zm)};
}

// Adjacent pair of doubles straddling the numeric critical eta: min f < 0 at
// .first, >= 0 at .second. Independent of the closed form.
inline std::pair<double, double> eta_critical_bracket(int k, double theta) {
    auto min_of = [&](double eta) { return constant_equation_min(k, theta, eta).value; };
    double lo = 0.0;  // min f = min (theta z)^k - z < 0 for k >= 2
    double hi = 1.0;
    while (min_of(hi) < 0) hi *= 2;
    while (true) {
        const double mid = lo + (hi - lo) / 2;
        if (mid <= lo || mid >= hi) break;
        (min_of(mid) < 0 ? lo : hi) = mid;
    }
    return {lo, hi};
}

inline double eta_critical_numeric(int k, double theta) {
    return eta_critical_bracket(k, theta).first;
}

// Classification band: eta this close to eta_c is reported as critical,
// since exact-equality classification is numerically meaningless.
inline constexpr double kCriticalBand = 1e-10;

struct SolutionSet {
    int k = 0;
    double theta = 0;
    double eta = 0;
    double eta_c = std::numeric_limits<double>::quiet_NaN();  // NaN at k = 1
    int count = 0;
    std::vector<double> roots;  // ascending
    Regime regime = Regime::above_critical;
};

// Both roots in the two-root regime, bracketed by the minimizer: f runs
// eta^k > 0 at z = 0 down to a negative minimum at z* and back up to +inf.
inline std::pair<double, double> solve_two_roots(int k, double theta, double eta,
                                                 double tol = 1e-12) {
    auto f = [&](double z) { return constant_equation(k, theta, eta, z); };
    auto fp = [&](double z) { return constant_equation_deriv(k, theta, eta, z); };
    double zs = z_star(k, theta, eta);
    if (!(zs > 0) || !(f(zs) < 0)) {
        // Within an ulp of the threshold the closed-form stationary point can
        // lose the sign of f to cancellation; fall back to the searched
        // minimum before declaring the regime empty.
        const MinPoint m = constant_equation_min(k, theta, eta);
        if (!(m.z > 0) || !(m.value < 0))
            throw std::invalid_argument("solve_two_roots: not in the two-root regime");
        zs = m.z;
    }
    double hi = std::max(1.0, 2 * zs);
    while (f(hi) <= 0) hi *= 2;
    const double lower = refine_root(f, fp, 0.0, zs, tol);
    const double upper = refine_root(f, fp, zs, hi, tol);
    return {lower, upper};
}

inline SolutionSet solve_constant(int k, double theta, double eta, double tol = 1e-12) {
    if (k < 1) throw std::invalid_argument("solve_constant: k must be >= 1");
    if (!(theta > 0)) throw std::invalid_argument("solve_constant: theta must be positive");
    if (!(eta >= 0)) throw std::invalid_argument("solve_constant: eta must be nonnegative");
    if (!(tol > 0)) throw std::invalid_argument("solve_constant: tol must be positive");
    SolutionSet s;
    s.k = k;
    s.theta = theta;
    s.eta = eta;

    if (k == 1) {
        // Linear fixed point z = theta z + eta: one positive solution iff
        // theta < 1 and eta > 0 (not covered by the k >= 2 classification).
        if (theta < 1 && eta > 0) {
            s.count = 1;
            s.roots = {eta / (1 - theta)};
            s.regime = Regime::below_critical;
        } else {
            s.regime = Regime::above_critical;
        }
        return s;
    }

    s.eta_c = eta_critical(k, theta);
    if (eta == 0) {
        // z = 0 is excluded (laws are positive), leaving the single root.
        s.count = 1;
        s.roots = {std::pow(theta, -static_cast<double>(k) / (k - 1))};
        s.regime = Regime::below_critical;
        return s;
    }
    if (std::abs(eta - s.eta_c) <= kCriticalBand * std::max(1.0, s.eta_c)) {
        s.count = 1;
        s.roots = {z_star(k, theta, eta)};
        s.regime = Regime::critical;
        return s;
    }
    if (eta > s.eta_c) {
        s.regime = Regime::above_critical;
        return s;
    }
    const auto [lower, upper] = solve_two_roots(k, theta, eta, tol);
    s.count = 2;
    s.roots = {lower, upper};
    s.regime = Regime::below_critical;
    for (double z : s.roots)
        if (!(std::abs(constant_equation(k, theta, eta, z)) <= tol * std::max(1.0, z)))
            throw std::runtime_error("solve_constant: root failed the residual check");
    return s;
}

inline SolutionSet solve_constant(const ModelParams& p, double tol = 1e-12) {
    p.validate();
    return solve_constant(p.k, p.theta(), p.eta(), tol);
}

inline int count_solutions(int k, double theta, double eta) {
    if (k < 2) throw std::invalid_argument("count_solutions: defined for k >= 2");
    return solve_constant(k, theta, eta).count;
}

inline BoundaryLaw constant_law(double z) {
    if (!(z > 0)) throw std::invalid_argument("constant_law: z must be positive");
    BoundaryLaw law;
    law.kind = LawKind::Constant;
    law.constant_z = z;
    law.tail_z = z;
    return law;
}

// alpha_n of the depth-dependent J = +inf family, in closed form. alpha1 is
// the family's free parameter; the value at depth 1 is alpha1/k - 1, and
// alpha_n contracts toward the fixed point -k/(k-1) at rate k^{-n}.
inline double level_family_alpha(int k, double alpha1, int n) {
    if (k < 2) throw std::domain_error("level_family_alpha: defined for k >= 2");
    if (n < 0) throw std::invalid_argument("level_family_alpha: negative depth");
    const double kn = std::pow(static_cast<double>(k), n);
    return (alpha1 - k * (kn - 1) / (k - 1)) / kn;
}

inline BoundaryLaw j_infinite_level_family(int k, double theta, double alpha1, int n_max) {
    if (k < 2) throw std::domain_error("j_infinite_level_family: defined for k >= 2");
    if (!(theta > 0)) throw std::invalid_argument("j_infinite_level_family: theta must be positive");
    if (theta == 1)
        throw std::domain_error("j_infinite_level_family: degenerate at theta = 1 (all members coincide)");
    if (n_max < 1) throw std::invalid_argument("j_infinite_level_family: n_max must be >= 1");
    BoundaryLaw law;
    law.kind = LawKind::LevelDependent;
    law.horizon = n_max;
    law.levels.resize(static_cast<std::size_t>(n_max) + 1);
    for (int d = 0; d <= n_max; ++d)
        law.levels[static_cast<std::size_t>(d)] = std::pow(theta, level_family_alpha(k, alpha1, d));
    law.tail_z = std::pow(theta, -static_cast<double>(k) / (k - 1));  // limit of theta^{alpha_n}
    for (int d = 0; d < n_max; ++d) {
        const double zd = law.levels[static_cast<std::size_t>(d)];
        const double r = std::abs(zd - std::pow(theta * law.levels[static_cast<std::size_t>(d) + 1], k));
        if (!(r <= 1e-9 * std::max(1.0, zd)))
            throw std::runtime_error("j_infinite_level_family: construction residual check failed");
    }
    return law;
}

inline BoundaryLaw j_infinite_level_family(const ModelParams& p, double alpha1, int n_max) {
    p.validate();
    if (!p.j_infinite())
        throw std::invalid_argument("j_infinite_level_family: requires J = +inf");
    return j_infinite_level_family(p.k, p.theta(), alpha1, n_max);
}

// General eta = 0 solution at k = 1: z at depth n equal to theta^{-(n-1)} z_1
// for any seed z_1 > 0; depth 0 extends the recursion with z_0 = theta z_1.
inline BoundaryLaw j_infinite_1d_family(double theta, double z1, int n_max) {
    if (!(theta > 0)) throw std::invalid_argument("j_infinite_1d_family: theta must be positive");
    if (!(z1 > 0)) throw std::invalid_argument("j_infinite_1d_family: z1 must be positive");
    if (n_max < 1) throw std::invalid_argument("j_infinite_1d_family: n_max must be >= 1");
    BoundaryLaw law;
    law.kind = LawKind::LevelDependent;
    law.horizon = n_max;
    law.levels.resize(static_cast<std::size_t>(n_max) + 1);
    for (int d = 0; d <= n_max; ++d)
        law.levels[static_cast<std::size_t>(d)] = std::pow(theta, 1 - d) * z1;
    law.tail_z = law.levels.back();
    return law;
}

// |z_d - (theta z_{d+1} + eta)^k| for depth-homogeneous laws.
inline double residual_at_depth(const BoundaryLaw& law, int d, int k, double theta, double eta) {
    const double zd = law.z_at_depth(d);
    const double zc = law.z_at_depth(d + 1);
    return std::abs(zd - std::pow(theta * zc + eta, k));
}

inline double residual_at_depth(const BoundaryLaw& law, int d, const ModelParams& p) {
    return residual_at_depth(law, d, p.k, p.theta(), p.eta());
}

// |z_x - prod_{y in S(x)} (theta z_y + eta)|, for any law kind.
inline double residual(const BoundaryLaw& law, const VertexId& x, const ModelParams& p) {
    if (law.depth_homogeneous()) return residual_at_depth(law, x.depth(), p);
    double prod = 1.0;
    for (const auto& y : children(x, p.k)) prod *= p.theta() * law.z_at(y) + p.eta();
    return std::abs(law.z_at(x) - prod);
}

// Worst consistency violation over depths 0 .. up_to_depth-1 (parent side),
// or over every fully materialized vertex of an explicit law.
inline double max_residual(const BoundaryLaw& law, const ModelParams& p, int up_to_depth) {
    double worst = 0.0;
    if (law.depth_homogeneous()) {
        for (int d = 0; d < up_to_depth; ++d)
            worst = std::max(worst, residual_at_depth(law, d, p));
        return worst;
    }
    for (const auto& [v, z] : law.by_vertex) {
        if (v.depth() >= up_to_depth) continue;
        bool complete = true;
        for (const auto& y : children(v, p.k))
            if (!law.by_vertex.count(y)) { complete = false; break; }
        if (complete) worst = std::max(worst, residual(law, v, p));
    }
    return worst;
}

// Additive shift of every stored value: deliberately breaks the consistency
// equation (except at k = 1, theta = 1) for negative-control tests. The
// result is not a valid law.
inline BoundaryLaw perturbed(const BoundaryLaw& law, double delta) {
    BoundaryLaw out = law;
    out.constant_z += delta;
    for (double& z : out.levels) z += delta;
    out.tail_z += delta;
    for (auto& [v, z] : out.by_vertex) z += delta;
    return out;
}

// Cross-check of the two closed forms for the critical coupling against the
// formula-free bisection: the order-dependent expression and the order-2
// shortcut 1/(4 theta) agree only at k = 2, so the verdict records which of
// them the numeric threshold actually supports at this (k, theta).
struct EtaCriticalComparison {
    int k = 2;
    double theta = 0;
    double general = 0;  // (k-1) / (k (k theta)^{1/(k-1)})
    double k2_form = 0;  // 1 / (4 theta)
    double numeric = 0;  // double-root threshold located by bisection
    enum class Verdict { both, general_only, k2_only, neither } verdict = Verdict::neither;
};

inline const char* verdict_name(EtaCriticalComparison::Verdict v) {
    switch (v) {
        case EtaCriticalComparison::Verdict::both: return "both";
        case EtaCriticalComparison::Verdict::general_only: return "general_only";
        case EtaCriticalComparison::Verdict::k2_only: return "k2_only";
        case EtaCriticalComparison::Verdict::neither: return "neither";
    }
    return "unknown";
}

inline EtaCriticalComparison compare_eta_critical(int k, double theta, double tol = 1e-8) {
    EtaCriticalComparison out;
    out.k = k;
    out.theta = theta;
    out.general = eta_critical(k, theta);
    out.k2_form = eta_critical_k2(theta);
    out.numeric = eta_critical_numeric(k, theta);
    const auto close = [&](double value) {
        return std::abs(value - out.numeric) <= tol * std::max(1.0, std::abs(out.numeric));
    };
    const bool g = close(out.general), two = close(out.k2_form);
    using V = EtaCriticalComparison::Verdict;
    out.verdict = g && two ? V::both : g ? V::general_only : two ? V::k2_only : V::neither;
    return out;
}

}  // namespace zipper
