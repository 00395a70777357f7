#pragma once

// Finite-volume Gibbs distributions induced by a boundary law:
//     mu_n(sigma) = Z_n^{-1} exp(-beta H_n(sigma) + sum_{y in W_n} h_{sigma(y),y})
// with boundary fields h_{0,y} = (1/2) ln z_y, h_{i,y} = -(1/2) ln z_y. All
// weight accumulation is log-domain; Z_n overflows doubles already at modest
// n for large q or beta.
//
// The partition function is computed by a bottom-up subtree recursion over
// weights conditioned on the parent's state (closed vertices force nothing,
// open parents force open children). The same recursion drives an exact
// top-down sampler and the compatibility check: marginalizing mu_n over W_n
// multiplies mu_{n-1} by (Z_{n-1}/Z_n) rho0^m rho1^{K-m}, where m counts
// closed vertices on W_{n-1}, so the worst-case marginalization error over
// all of Omega_{n-1} reduces to a small max-plus recursion over m.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "zipper/boundary_law.hpp"
#include "zipper/model.hpp"
#include "zipper/numeric.hpp"
#include "zipper/tree.hpp"

namespace zipper {

// Fields on the boundary generation W_n. h_{i,x} for i >= 1 is always the
// negative of h_{0,x}, so only h0 is stored; interior vertices carry no
// field. Per-vertex values are indexed by generation rank (base-k digits of
// the vertex path).
struct BoundaryFields {
    int n = 0;
    bool uniform = true;
    double h0_uniform = 0.0;
    std::vector<double> h0;

    double h0_at(std::int64_t rank) const {
        return uniform ? h0_uniform : h0[static_cast<std::size_t>(rank)];
    }
};

inline BoundaryFields fields_from_law(const BoundaryLaw& law, int n, int k) {
    if (n < 1) throw std::invalid_argument("fields_from_law: n must be >= 1");
    BoundaryFields f;
    f.n = n;
    if (law.depth_homogeneous()) {
        f.h0_uniform = 0.5 * std::log(law.z_at_depth(n));
        return f;
    }
    f.uniform = false;
    f.h0.resize(static_cast<std::size_t>(generation_size(k, n)));
    std::size_t rank = 0;
    for (const auto& v : vertices_at_depth(k, n)) f.h0[rank++] = 0.5 * std::log(law.z_at(v));
    return f;
}

// Log-weights of the subtree hanging below a vertex, conditioned on the
// parent's state. lw_closed sums both branches (vertex closed, or open and
// paying the front penalty when its depth is >= 2); lw_open forces open.
struct SubtreeWeight {
    double lw_closed = 0.0;
    double lw_open = 0.0;
};

// Per-depth weights for depth-homogeneous fields, indexed 1..n.
inline std::vector<SubtreeWeight> subtree_weights(const ModelParams& p, const BoundaryFields& f,
                                                  int n) {
    p.validate();
    if (n < 1) throw std::invalid_argument("subtree_weights: n = 0 has no configuration space");
    if (!f.uniform) throw std::invalid_argument("subtree_weights: needs uniform fields");
    if (f.n != n) throw std::invalid_argument("subtree_weights: fields materialized at wrong depth");
    const double open_vertex = std::log(static_cast<double>(p.q)) - p.beta * p.epsilon;
    const double lj = p.log_eta();
    std::vector<SubtreeWeight> w(static_cast<std::size_t>(n) + 1);
    w[static_cast<std::size_t>(n)] = {
        log_add(f.h0_uniform, open_vertex + (n >= 2 ? lj : 0.0) - f.h0_uniform),
        open_vertex - f.h0_uniform};
    for (int d = n - 1; d >= 1; --d) {
        const auto& child = w[static_cast<std::size_t>(d) + 1];
        w[static_cast<std::size_t>(d)] = {
            log_add(p.k * child.lw_closed, open_vertex + (d >= 2 ? lj : 0.0) + p.k * child.lw_open),
            open_vertex + p.k * child.lw_open};
    }
    return w;
}

inline double log_partition_dp(const ModelParams& p, const BoundaryFields& f, int n) {
    p.validate();
    if (n < 1) throw std::invalid_argument("log_partition_dp: n = 0 has no configuration space");
    if (f.n != n) throw std::invalid_argument("log_partition_dp: fields materialized at wrong depth");
    if (f.uniform) return p.k * subtree_weights(p, f, n)[1].lw_closed;

    const double open_vertex = std::log(static_cast<double>(p.q)) - p.beta * p.epsilon;
    const double lj = p.log_eta();
    std::vector<double> wc(f.h0.size()), wo(f.h0.size());
    for (std::size_t r = 0; r < f.h0.size(); ++r) {
        wc[r] = log_add(f.h0[r], open_vertex + (n >= 2 ? lj : 0.0) - f.h0[r]);
        wo[r] = open_vertex - f.h0[r];
    }
    for (int d = n - 1; d >= 1; --d) {
        const auto width = static_cast<std::size_t>(generation_size(p.k, d));
        std::vector<double> nc(width), no(width);
        for (std::size_t r = 0; r < width; ++r) {
            double closed_children = 0.0, open_children = 0.0;
            for (int j = 0; j < p.k; ++j) {
                closed_children += wc[r * p.k + static_cast<std::size_t>(j)];
                open_children += wo[r * p.k + static_cast<std::size_t>(j)];
            }
            nc[r] = log_add(closed_children, open_vertex + (d >= 2 ? lj : 0.0) + open_children);
            no[r] = open_vertex + open_children;
        }
        wc = std::move(nc);
        wo = std::move(no);
    }
    double lz = 0.0;
    for (std::size_t r = 0; r < wc.size(); ++r) lz += wc[r];
    return lz;
}

inline double log_partition_dp(const ModelParams& p, const BoundaryLaw& law, int n) {
    return log_partition_dp(p, fields_from_law(law, n, p.k), n);
}

inline double partition_function_dp(const ModelParams& p, const BoundaryFields& f, int n) {
    return std::exp(log_partition_dp(p, f, n));
}

// Log-probability given a precomputed log Z_n; -inf on configurations of
// weight zero (fronts under J = +inf).
inline double log_mu(const ModelParams& p, const BoundaryFields& f, const Configuration& c,
                     double log_z) {
    if (c.n() != f.n) throw std::invalid_argument("log_mu: configuration depth differs from fields");
    double lw = -p.beta * hamiltonian(c, p);
    const std::int64_t off = c.level_offset(c.n());
    for (std::int64_t r = 0; r + off < c.size(); ++r)
        lw += c.at_index(off + r) == 0 ? f.h0_at(r) : -f.h0_at(r);
    return lw - log_z;
}

inline double mu_n(const ModelParams& p, const BoundaryFields& f, int n, const Configuration& c) {
    return std::exp(log_mu(p, f, c, log_partition_dp(p, f, n)));
}

// ln a(x) = -k ln theta + (1/2) sum_{y in S(x)} [ln(theta z_y + eta) - ln z_y];
// a(x) is the per-vertex factor relating consecutive partition functions.
inline double log_a_of(const ModelParams& p, const BoundaryLaw& law, const VertexId& x) {
    double s = -p.k * p.log_theta();
    for (const auto& y : children(x, p.k)) {
        const double z = law.z_at(y);
        s += 0.5 * (std::log(p.theta() * z + p.eta()) - std::log(z));
    }
    return s;
}

inline double a_of(const ModelParams& p, const BoundaryLaw& law, const VertexId& x) {
    return std::exp(log_a_of(p, law, x));
}

// ln A_m = sum_{x in W_m} ln a(x).
inline double log_A(const ModelParams& p, const BoundaryLaw& law, int m) {
    if (law.depth_homogeneous()) {
        const double z = law.z_at_depth(m + 1);
        const double la =
            -p.k * p.log_theta() + 0.5 * p.k * (std::log(p.theta() * z + p.eta()) - std::log(z));
        return static_cast<double>(generation_size(p.k, m)) * la;
    }
    double s = 0.0;
    for (const auto& x : vertices_at_depth(p.k, m)) s += log_a_of(p, law, x);
    return s;
}

// Relative defect of Z_n = A_{n-1} Z_{n-1}.
inline double z_recursion_error(const ModelParams& p, const BoundaryLaw& law, int n) {
    if (n < 2) throw std::invalid_argument("z_recursion_error: needs n >= 2");
    const double lzn = log_partition_dp(p, law, n);
    const double lzm = log_partition_dp(p, law, n - 1);
    return std::abs(std::expm1(lzn - lzm - log_A(p, law, n - 1)));
}

namespace detail {

// Max-plus convolution: out[m] = max_{i+j=m} a[i] + b[j].
inline std::vector<double> maxplus(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, kNegInf);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == kNegInf) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            if (b[j] != kNegInf) out[i + j] = std::max(out[i + j], a[i] + b[j]);
    }
    return out;
}

inline std::vector<double> maxplus_power(const std::vector<double>& a, int k) {
    std::vector<double> out{0.0};
    for (int i = 0; i < k; ++i) out = maxplus(out, a);
    return out;
}

}  // namespace detail

// Exact worst-case marginalization defect of mu_n against mu_{n-1}:
//     max over sigma in Omega_{n-1} of |marginal_n(sigma) - mu_{n-1}(sigma)|.
// The per-vertex marginalization factor rho_x(s) depends only on whether s
// is closed, so the defect of a configuration depends only on its count m of
// closed boundary vertices; the maximal mu_{n-1} weight per m comes from a
// max-plus recursion over subtrees. Exact (up to rounding), no enumeration.
inline double compatibility_error(const ModelParams& p, const BoundaryLaw& law, int n) {
    p.validate();
    if (n < 2) throw std::invalid_argument("compatibility_error: needs n >= 2");
    if (!law.depth_homogeneous())
        throw std::invalid_argument(
            "compatibility_error: explicit laws need the exhaustive oracle variant");

    const double lzn = log_partition_dp(p, law, n);
    const double lzm = log_partition_dp(p, law, n - 1);
    const double h0n = 0.5 * std::log(law.z_at_depth(n));
    const double h0m = 0.5 * std::log(law.z_at_depth(n - 1));
    const double open_vertex = std::log(static_cast<double>(p.q)) - p.beta * p.epsilon;
    const double lj = p.log_eta();

    // Per-child factors under a closed / an open parent on W_{n-1}; children
    // sit at depth n >= 2, so the front penalty always applies.
    const double lng0 = log_add(h0n, open_vertex + lj - h0n);
    const double lng1 = open_vertex - h0n;
    const double lnrho0 = -h0m + p.k * lng0;
    const double lnrho1 = h0m + p.k * lng1;

    // maxlw[m]: largest log-weight among admissible configurations on
    // V_{n-1} having exactly m closed vertices on W_{n-1}. Open vertices
    // contribute their own energy; the front penalty attaches where parent
    // and child state are both known.
    std::vector<double> closed{kNegInf, h0m};              // leaf on W_{n-1}, m in {0,1}
    std::vector<double> open{-p.beta * p.epsilon - h0m};   // forced count m = 0
    for (int d = n - 2; d >= 1; --d) {
        std::vector<double> pick(closed.size());
        for (std::size_t m = 0; m < closed.size(); ++m)
            pick[m] = std::max(closed[m], open.size() > m ? open[m] + lj : kNegInf);
        closed = detail::maxplus_power(pick, p.k);
        auto grown = detail::maxplus_power(open, p.k);
        for (double& v : grown) v += -p.beta * p.epsilon;
        open = std::move(grown);
    }
    std::vector<double> pick(closed.size());
    for (std::size_t m = 0; m < closed.size(); ++m)
        pick[m] = std::max(closed[m], open.size() > m ? open[m] : kNegInf);
    const std::vector<double> maxlw = detail::maxplus_power(pick, p.k);

    const auto boundary = static_cast<double>(generation_size(p.k, n - 1));
    double worst = 0.0;
    for (std::size_t m = 0; m < maxlw.size(); ++m) {
        if (maxlw[m] == kNegInf) continue;
        const double lnr =
            (lzm - lzn) + static_cast<double>(m) * lnrho0 + (boundary - static_cast<double>(m)) * lnrho1;
        worst = std::max(worst, std::exp(maxlw[m] - lzm) * std::abs(std::expm1(lnr)));
    }
    return worst;
}

// P(vertex at depth d is closed | parent closed) for d = 1..n, the sampler's
// branch probabilities; entry d = 1 is the exact marginal of mu_n on W_1.
inline std::vector<double> closed_probabilities(const ModelParams& p, const BoundaryLaw& law,
                                                int n) {
    const auto w = subtree_weights(p, fields_from_law(law, n, p.k), n);
    std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
    for (int d = 1; d <= n; ++d) {
        const double branch_closed =
            d == n ? 0.5 * std::log(law.z_at_depth(n)) : p.k * w[static_cast<std::size_t>(d) + 1].lw_closed;
        out[static_cast<std::size_t>(d)] = std::exp(branch_closed - w[static_cast<std::size_t>(d)].lw_closed);
    }
    return out;
}

namespace detail {

inline std::uint64_t vertex_stream(std::uint64_t seed, const VertexId& v) {
    std::uint64_t h = mix64(seed ^ 0x9e3779b97f4a7c15ULL);
    for (std::uint32_t w : v.path) h = hash_word(h, static_cast<std::uint64_t>(w) + 1);
    return h;
}

}  // namespace detail

// Exact top-down sample from mu_n. Every random decision is a pure function
// of (seed, vertex address), so samples are reproducible and order-free.
inline Configuration sample(const ModelParams& p, const BoundaryLaw& law, int n,
                            std::uint64_t seed) {
    const auto w = subtree_weights(p, fields_from_law(law, n, p.k), n);
    const double h0n = 0.5 * std::log(law.z_at_depth(n));
    Configuration c(p.k, n);
    std::vector<VertexId> stack{tree_root()};
    while (!stack.empty()) {
        VertexId v = std::move(stack.back());
        stack.pop_back();
        const int d = v.depth();
        int spin = 0;
        if (d > 0) {
            const bool parent_closed = c.at(v.parent()) == 0;
            const std::uint64_t h = detail::vertex_stream(seed, v);
            bool is_closed = false;
            if (parent_closed) {
                const double branch_closed =
                    d == n ? h0n : p.k * w[static_cast<std::size_t>(d) + 1].lw_closed;
                is_closed = u01(h) < std::exp(branch_closed - w[static_cast<std::size_t>(d)].lw_closed);
            }
            if (!is_closed)
                spin = std::min(p.q, 1 + static_cast<int>(u01(hash_word(h, 0x5157ULL)) * p.q));
        }
        c.set(v, spin);
        if (d < n)
            for (auto& ch : children(v, p.k)) stack.push_back(std::move(ch));
    }
    return c;
}

inline std::vector<Configuration> sample_many(const ModelParams& p, const BoundaryLaw& law, int n,
                                              std::uint64_t seed, int count) {
    if (count < 0) throw std::invalid_argument("sample_many: negative count");
    std::vector<Configuration> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        out.push_back(sample(p, law, n, hash_word(seed, static_cast<std::uint64_t>(i))));
    return out;
}

inline std::vector<double> open_fraction_by_depth(const Configuration& c) {
    std::vector<double> out(static_cast<std::size_t>(c.n()) + 1, 0.0);
    for (int d = 1; d <= c.n(); ++d) {
        const std::int64_t off = c.level_offset(d);
        const std::int64_t width = c.level_offset(d + 1) - off;
        std::int64_t open_count = 0;
        for (std::int64_t r = 0; r < width; ++r)
            if (c.at_index(off + r) != 0) ++open_count;
        out[static_cast<std::size_t>(d)] = static_cast<double>(open_count) / static_cast<double>(width);
    }
    return out;
}

}  // namespace zipper
