#pragma once

// Shared numeric plumbing: log-domain accumulation that tolerates zero
// weights (-inf), a counter-based uniform generator, and a bracketed
// one-dimensional minimizer. Everything here is deterministic.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace zipper {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

// log(e^a + e^b) with -inf meaning "weight zero".
inline double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double m = a > b ? a : b;
    return m + std::log1p(std::exp(-std::fabs(a - b)));
}

inline double log_sum_exp(const std::vector<double>& xs) {
    double m = kNegInf;
    for (double x : xs)
        if (x > m) m = x;
    if (m == kNegInf) return kNegInf;
    // Kahan-compensated sum: plain accumulation drifts by ~N ulp, which is
    // visible next to the DP result once N reaches a few hundred thousand.
    double s = 0.0, carry = 0.0;
    for (double x : xs) {
        if (x == kNegInf) continue;
        const double term = std::exp(x - m) - carry;
        const double next = s + term;
        carry = (next - s) - term;
        s = next;
    }
    return m + std::log(s);
}

// SplitMix64 finalizer. Used as the mixing step of the counter-based
// sampler RNG: a draw is fully determined by the words fed into the chain.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_word(std::uint64_t h, std::uint64_t w) {
    return mix64(h ^ w);
}

// Uniform double in [0, 1) from a mixed 64-bit state.
inline double u01(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Golden-section minimization on [lo, hi] for a unimodal f. Returns the
// abscissa; the caller re-evaluates f if it needs the value.
template <class F>
double golden_min(F&& f, double lo, double hi, int iters = 180) {
    static const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters && d - c > 0.0; ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return (a + b) / 2;
}

// Bisection on a bracketing interval [lo, hi] with f(lo) and f(hi) of
// opposite sign, followed by Newton polishing that never leaves the
// bracket. `fp` is the derivative.
template <class F, class Fp>
double refine_root(F&& f, Fp&& fp, double lo, double hi, double tol = 1e-12,
                   int max_iter = 200) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0))
        throw std::runtime_error("refine_root: endpoints do not bracket a sign change");
    double a = lo, b = hi, fa = flo;
    for (int i = 0; i < max_iter && b - a > 0.0; ++i) {
        const double mid = a + (b - a) / 2;
        if (mid == a || mid == b) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (fa > 0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    double x = a + (b - a) / 2;
    for (int i = 0; i < 40; ++i) {
        const double fx = f(x);
        if (std::fabs(fx) <= tol && i > 0) break;
        const double d = fp(x);
        if (d == 0.0 || !std::isfinite(d)) break;
        double step = fx / d;
        double nx = x - step;
        if (!(nx > a && nx < b)) break;   // polishing left the bracket; keep the bisection answer
        if (nx == x) break;
        x = nx;
    }
    return x;
}

}  // namespace zipper
