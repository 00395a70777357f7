#pragma once

// Free energy of a boundary-law state and the temperature structure of the
// model. The per-vertex density is
//     b(z) = (1/2) ln((theta z + eta) / (theta^2 z)),
// whose volume average converges to the reduced free energy; for a constant
// law the limit is b(z) itself. At eta = 0 b is z-independent: every member
// of the J = +inf families has the same free energy, -(1/2) ln theta.
//
// The number of constant-law Gibbs states flips between 2 and 0 where
// eta(T) = eta_c(theta(T)); solving that for T gives
//     T_cr = (epsilon - (k-1) J) / ln(q (k-1)^{k-1} / k^k)
// (k = 1 uses the 0^0 = 1 convention, recovering the 1D chain value
// epsilon / ln q). phase_scan materializes roots and free energies over a
// temperature grid for plotting.

#include <chrono>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "zipper/boundary_law.hpp"
#include "zipper/model.hpp"
#include "zipper/numeric.hpp"
#include "zipper/parallel.hpp"
#include "zipper/tree.hpp"

namespace zipper {

inline double b_of(double z, double theta, double eta) {
    if (!(z > 0) || !(theta > 0) || !(eta >= 0))
        throw std::invalid_argument("b_of: need z > 0, theta > 0, eta >= 0");
    return 0.5 * std::log((theta * z + eta) / (theta * theta * z));
}

// Limit of the volume-averaged b over a constant law (all summands equal).
inline double free_energy_constant(const ModelParams& p, double z) {
    return b_of(z, p.theta(), p.eta());
}

struct LevelFreeEnergy {
    double partial = 0;  // (1/|V_n|) sum_{m<=n} k^m b(z at depth m)
    double limit = 0;    // -(1/2) ln theta, z-independent at eta = 0
};

inline LevelFreeEnergy free_energy_level(const ModelParams& p, const BoundaryLaw& law, int n) {
    p.validate();
    if (!p.j_infinite()) throw std::invalid_argument("free_energy_level: requires J = +inf");
    if (!law.depth_homogeneous())
        throw std::invalid_argument("free_energy_level: needs a depth-indexed law");
    if (n < 1) throw std::invalid_argument("free_energy_level: n must be >= 1");
    const double theta = p.theta();
    double acc = 0.0, layer = 1.0;
    for (int m = 0; m <= n; ++m) {
        acc += layer * b_of(law.z_at_depth(m), theta, 0.0);
        layer *= p.k;
    }
    return {acc / static_cast<double>(volume(p.k, n)), -0.5 * std::log(theta)};
}

// 1D chain partition function Z_N = (1 - a^N)/(1 - a), a = q e^{-beta eps}:
// the zipper opens from one end, the last link stays closed. Evaluated via
// expm1 so a near 1 stays exact; a = 1 gives N.
inline double kittel_1d_log_partition(int q, double beta, double epsilon, int N) {
    if (q < 1 || N < 1) throw std::invalid_argument("kittel_1d_log_partition: need q >= 1, N >= 1");
    const double ln_a = std::log(static_cast<double>(q)) - beta * epsilon;
    if (ln_a == 0) return std::log(static_cast<double>(N));
    return std::log(std::expm1(N * ln_a) / std::expm1(ln_a));
}

inline double kittel_1d_partition(int q, double beta, double epsilon, int N) {
    return std::exp(kittel_1d_log_partition(q, beta, epsilon, N));
}

inline double kittel_1d_free_energy(int q, double beta, double epsilon, int N) {
    return kittel_1d_log_partition(q, beta, epsilon, N) / N;
}

inline double kittel_1d_limit(int q, double beta, double epsilon) {
    return std::max(0.0, std::log(static_cast<double>(q)) - beta * epsilon);
}

enum class TcrReason { ok, nonpositive, zero_denominator };

struct CriticalTemperature {
    std::optional<double> value;  // present iff a positive critical temperature exists
    double raw = std::numeric_limits<double>::quiet_NaN();
    TcrReason reason = TcrReason::ok;
    bool in_set_A = false;  // the parameter set where the transition occurs
};

inline CriticalTemperature critical_temperature(int k, int q, double epsilon, double J) {
    if (k < 1 || q < 1) throw std::invalid_argument("critical_temperature: need k >= 1, q >= 1");
    CriticalTemperature out;
    // (k-1)^{k-1} with the 0^0 = 1 convention so k = 1 degrades to the
    // chain value epsilon / ln q.
    const double pole = k == 1 ? 1.0 : std::pow(k - 1.0, k - 1.0);
    const double den = std::log(q * pole / std::pow(static_cast<double>(k), k));
    if (den == 0) {
        out.reason = TcrReason::zero_denominator;
        return out;
    }
    out.raw = (epsilon - (k - 1.0) * J) / den;
    if (out.raw > 0) {
        out.value = out.raw;
        out.in_set_A = true;
    } else {
        out.reason = TcrReason::nonpositive;
    }
    return out;
}

// Temperature where eta(T) crosses the formula-free double-root criterion,
// by bisection in beta. ln(eta/eta_c) is monotone in beta with slope
// (epsilon - (k-1)J)/(k-1), so there is at most one crossing.
inline std::optional<double> critical_temperature_numeric(int k, int q, double epsilon, double J,
                                                          double beta_lo = 1e-6,
                                                          double beta_hi = 1e4) {
    if (k < 2) throw std::domain_error("critical_temperature_numeric: defined for k >= 2");
    if (std::isinf(J)) throw std::invalid_argument("critical_temperature_numeric: J must be finite");
    auto sign_of = [&](double beta) {
        const double theta = std::exp(beta * epsilon) / q;
        return -beta * J - std::log(eta_critical_numeric(k, theta));
    };
    double lo = beta_lo, hi = beta_hi;
    double slo = sign_of(lo), shi = sign_of(hi);
    if (slo == 0) return 1.0 / lo;
    if (shi == 0) return 1.0 / hi;
    if ((slo < 0) == (shi < 0)) return std::nullopt;
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double sm = sign_of(mid);
        if (sm == 0) return 1.0 / mid;
        ((sm < 0) == (slo < 0) ? lo : hi) = mid;
    }
    return 2.0 / (lo + hi);
}

inline int n_tigm(int k, double theta, double eta) { return count_solutions(k, theta, eta); }

struct PhasePoint {
    double T = 0, beta = 0, theta = 0, eta = 0;
    double eta_c = std::numeric_limits<double>::quiet_NaN();
    int n_tigm = 0;
    double z_minus = std::numeric_limits<double>::quiet_NaN();
    double z_plus = std::numeric_limits<double>::quiet_NaN();
    double f_minus = std::numeric_limits<double>::quiet_NaN();
    double f_plus = std::numeric_limits<double>::quiet_NaN();
    int t_cr_flag = 0;
};

struct ScanSpec {
    int k = 2;
    int q = 1;
    double epsilon = 0;
    double J = 0;
    double t_min = 0;
    double t_max = 0;
    int points = 0;

    void validate() const {
        if (points < 1) throw std::invalid_argument("ScanSpec: empty range (points < 1)");
        if (!(t_min > 0) || !(t_max >= t_min))
            throw std::invalid_argument("ScanSpec: need 0 < t_min <= t_max");
        ModelParams{k, q, epsilon, J, 1.0}.validate();
    }
};

inline PhasePoint phase_point(const ModelParams& p, double t_cr, double half_step) {
    PhasePoint pt;
    pt.T = p.T();
    pt.beta = p.beta;
    pt.theta = p.theta();
    pt.eta = p.eta();
    const SolutionSet s = solve_constant(p);
    pt.eta_c = s.eta_c;
    pt.n_tigm = s.count;
    if (s.count >= 1) {
        pt.z_minus = s.roots.front();
        pt.z_plus = s.roots.back();
        pt.f_minus = b_of(pt.z_minus, pt.theta, pt.eta);
        pt.f_plus = b_of(pt.z_plus, pt.theta, pt.eta);
    }
    if (s.regime == Regime::critical || std::abs(pt.T - t_cr) <= half_step) pt.t_cr_flag = 1;
    return pt;
}

inline std::vector<PhasePoint> phase_scan(const ScanSpec& spec) {
    spec.validate();
    const double step =
        spec.points > 1 ? (spec.t_max - spec.t_min) / (spec.points - 1) : 0.0;
    const auto tc = critical_temperature(spec.k, spec.q, spec.epsilon, spec.J);
    const double t_cr = tc.value.value_or(std::numeric_limits<double>::quiet_NaN());
    std::vector<PhasePoint> out(static_cast<std::size_t>(spec.points));
    parallel_for(spec.points, [&](int i) {
        const double T = spec.t_min + i * step;
        out[static_cast<std::size_t>(i)] =
            phase_point(ModelParams::from_T(spec.k, spec.q, spec.epsilon, spec.J, T), t_cr,
                        step / 2);
    });
    return out;
}

// The two captioned parameter presets. fig4: free-energy branches of the
// order-2 tree with q = 8, epsilon = 2 ln 2, J = ln 2 over T in [1, 3],
// where T_cr = 1 exactly.
inline ScanSpec fig4_spec() {
    const double ln2 = std::log(2.0);
    return {2, 8, 2 * ln2, ln2, 1.0, 3.0, 201};
}

// fig3: the fixed-point gap f(z) = (theta z + eta)^k - z at k = 4, theta = 2
// for eta above, at, and below eta_c = 3/8, sampled on z in [0, 0.2].
struct CurvePoint {
    double z = 0;
    double f_above = 0;
    double f_critical = 0;
    double f_below = 0;
};

inline std::vector<CurvePoint> fig3_curve(int points = 201) {
    if (points < 2) throw std::invalid_argument("fig3_curve: need at least two points");
    const int k = 4;
    const double theta = 2.0;
    const double eta_c = eta_critical(k, theta);
    std::vector<CurvePoint> out(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double z = 0.2 * i / (points - 1);
        out[static_cast<std::size_t>(i)] = {z, constant_equation(k, theta, 1.25 * eta_c, z),
                                            constant_equation(k, theta, eta_c, z),
                                            constant_equation(k, theta, 0.75 * eta_c, z)};
    }
    return out;
}

}  // namespace zipper
