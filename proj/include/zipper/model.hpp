#pragma once

// Molecular-zipper model on the rooted Cayley tree. Spins live in
// {0, 1, ..., q}; 0 means the link is closed, the other q values are the
// degenerate open states. A configuration on V_n is zipper-admissible when
// the root is closed and every closed vertex has a fully closed path to the
// root, i.e. the open region is a union of subtrees reaching down to W_n.
//
// The energy of an admissible configuration charges epsilon for each open
// vertex, plus J for each open vertex at depth >= 2 whose parent is closed
// (an unzipping front). The first generation W_1 never pays J. J = +inf is
// the hard-front model: such configurations get Boltzmann weight zero.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "zipper/numeric.hpp"
#include "zipper/tree.hpp"

namespace zipper {

inline constexpr double j_infinite_coupling = std::numeric_limits<double>::infinity();

struct ModelParams {
    int k = 2;             // tree order
    int q = 1;             // open-state degeneracy
    double epsilon = 0.0;  // opening energy per vertex
    double J = 0.0;        // front penalty; +inf forbids fronts outright
    double beta = 1.0;     // inverse temperature

    void validate() const {
        if (k < 1) throw std::invalid_argument("ModelParams: k must be >= 1");
        if (q < 1) throw std::invalid_argument("ModelParams: q must be >= 1");
        if (!(beta > 0) || !std::isfinite(beta))
            throw std::invalid_argument("ModelParams: beta must be positive and finite");
        if (!std::isfinite(epsilon))
            throw std::invalid_argument("ModelParams: epsilon must be finite");
        if (std::isnan(J) || J == -j_infinite_coupling)
            throw std::invalid_argument("ModelParams: J must be real or +infinity");
    }

    bool j_infinite() const { return std::isinf(J) && J > 0; }

    double T() const { return 1.0 / beta; }

    // Transfer weights of the boundary-law equation.
    double theta() const { return std::exp(beta * epsilon) / q; }
    double eta() const { return j_infinite() ? 0.0 : std::exp(-beta * J); }
    double log_theta() const { return beta * epsilon - std::log(static_cast<double>(q)); }
    double log_eta() const { return j_infinite() ? kNegInf : -beta * J; }

    static ModelParams from_T(int k, int q, double epsilon, double J, double temperature) {
        if (!(temperature > 0)) throw std::invalid_argument("ModelParams: T must be positive");
        ModelParams p{k, q, epsilon, J, 1.0 / temperature};
        p.validate();
        return p;
    }
};

// Spin assignment on V_n, stored densely in breadth-first order.
class Configuration {
  public:
    Configuration(int k, int n) : k_(k), n_(n) {
        if (k < 1 || n < 0) throw std::invalid_argument("Configuration: need k >= 1, n >= 0");
        offsets_.assign(static_cast<std::size_t>(n) + 2, 0);
        std::int64_t layer = 1;
        for (int d = 0; d <= n; ++d) {
            offsets_[static_cast<std::size_t>(d) + 1] = offsets_[static_cast<std::size_t>(d)] + layer;
            layer *= k;
        }
        values_.assign(static_cast<std::size_t>(offsets_.back()), 0);
    }

    static Configuration from_map(int k, int n, const std::map<VertexId, int>& m) {
        Configuration c(k, n);
        std::vector<bool> seen(c.values_.size(), false);
        for (const auto& [v, spin] : m) {
            if (v.depth() > n)
                throw std::invalid_argument("Configuration: vertex " + v.to_string() + " lies outside V_n");
            if (spin < 0) throw std::invalid_argument("Configuration: spins are nonnegative");
            const auto idx = static_cast<std::size_t>(bfs_index(v, k));
            c.values_[idx] = spin;
            seen[idx] = true;
        }
        for (std::size_t i = 0; i < seen.size(); ++i)
            if (!seen[i]) throw std::invalid_argument("Configuration: missing vertex assignment");
        return c;
    }

    int k() const { return k_; }
    int n() const { return n_; }
    std::int64_t size() const { return offsets_.back(); }

    int at(const VertexId& v) const { return values_[static_cast<std::size_t>(bfs_index(v, k_))]; }
    void set(const VertexId& v, int spin) { values_[static_cast<std::size_t>(bfs_index(v, k_))] = spin; }

    int at_index(std::int64_t i) const { return values_[static_cast<std::size_t>(i)]; }
    void set_index(std::int64_t i, int spin) { values_[static_cast<std::size_t>(i)] = spin; }

    int depth_of_index(std::int64_t i) const {
        int d = 0;
        while (offsets_[static_cast<std::size_t>(d) + 1] <= i) ++d;
        return d;
    }

    std::int64_t parent_index(std::int64_t i) const {
        const int d = depth_of_index(i);
        if (d == 0) throw std::domain_error("Configuration: the root has no parent");
        const std::int64_t rank = i - offsets_[static_cast<std::size_t>(d)];
        return offsets_[static_cast<std::size_t>(d) - 1] + rank / k_;
    }

    std::int64_t first_child_index(std::int64_t i) const {
        const int d = depth_of_index(i);
        const std::int64_t rank = i - offsets_[static_cast<std::size_t>(d)];
        return offsets_[static_cast<std::size_t>(d) + 1] + rank * k_;
    }

    std::int64_t level_offset(int d) const { return offsets_[static_cast<std::size_t>(d)]; }

    std::map<VertexId, int> to_map() const {
        std::map<VertexId, int> m;
        for_each_vertex(k_, n_, [&](const VertexId& v) { m[v] = at(v); });
        return m;
    }

    bool operator==(const Configuration& o) const {
        return k_ == o.k_ && n_ == o.n_ && values_ == o.values_;
    }

  private:
    int k_, n_;
    std::vector<std::int64_t> offsets_;
    std::vector<std::int32_t> values_;
};

// Root closed, and no closed vertex below an open one.
inline bool is_admissible(const Configuration& c) {
    if (c.at_index(0) != 0) return false;
    for (std::int64_t i = 1; i < c.size(); ++i)
        if (c.at_index(i) == 0 && c.at_index(c.parent_index(i)) != 0) return false;
    return true;
}

// Energy of an admissible configuration. Returns +inf when J = +inf and a
// front is present (zero Boltzmann weight).
inline double hamiltonian(const Configuration& c, const ModelParams& p) {
    p.validate();
    if (c.k() != p.k) throw std::invalid_argument("hamiltonian: configuration order differs from params");
    if (!is_admissible(c)) throw std::invalid_argument("hamiltonian: configuration is not zipper-admissible");
    double open_count = 0, front_count = 0;
    for (std::int64_t i = 1; i < c.size(); ++i) {
        if (c.at_index(i) == 0) continue;
        open_count += 1;
        if (c.depth_of_index(i) >= 2 && c.at_index(c.parent_index(i)) == 0) front_count += 1;
    }
    if (front_count > 0 && p.j_infinite()) return kPosInf;
    return p.epsilon * open_count + (front_count > 0 ? p.J * front_count : 0.0);
}

// Number of admissible configurations on V_n. Counted over the closed
// region: a height-d subtree with a closed root contributes
// c_d = (c_{d-1} + q^{size(d-1)})^k, since each child subtree is either
// headed by a closed vertex or fully open.
inline double admissible_count(int k, int q, int n) {
    if (k < 1 || q < 1 || n < 0) throw std::invalid_argument("admissible_count: bad arguments");
    double c = 1.0;        // height-0 subtree with closed root
    double subtree = 1.0;  // vertices in a height-(d-1) subtree
    for (int d = 1; d <= n; ++d) {
        const double all_open = std::pow(static_cast<double>(q), subtree);
        c = std::pow(c + all_open, static_cast<double>(k));
        subtree = subtree * k + 1;
    }
    return c;
}

inline constexpr double kEnumerationGuard = 1e6;

// Streams every admissible configuration in lexicographic order (vertex
// addresses, then spin values). Guarded by the closed-form count so callers
// cannot accidentally request an astronomical enumeration.
inline void for_each_admissible(int k, int q, int n,
                                const std::function<void(const Configuration&)>& fn,
                                double guard = kEnumerationGuard) {
    const double total = admissible_count(k, q, n);
    if (!(total <= guard))
        throw std::length_error("for_each_admissible: " + std::to_string(total) +
                                " configurations exceed the enumeration guard");
    Configuration c(k, n);
    // Depth-first preorder over vertices; parents are assigned before their
    // children, which is exactly what the admissibility constraint needs.
    std::vector<std::int64_t> order;
    order.reserve(static_cast<std::size_t>(c.size()));
    for_each_vertex(k, n, [&](const VertexId& v) { order.push_back(bfs_index(v, k)); });

    std::function<void(std::size_t)> walk = [&](std::size_t pos) {
        if (pos == order.size()) {
            fn(c);
            return;
        }
        const std::int64_t idx = order[pos];
        if (idx == 0) {
            c.set_index(0, 0);
            walk(pos + 1);
            return;
        }
        const bool parent_closed = c.at_index(c.parent_index(idx)) == 0;
        if (parent_closed) {
            c.set_index(idx, 0);
            walk(pos + 1);
        }
        for (int s = 1; s <= q; ++s) {
            c.set_index(idx, s);
            walk(pos + 1);
        }
        c.set_index(idx, 0);
    };
    walk(0);
}

inline std::vector<Configuration> enumerate_admissible(int k, int q, int n,
                                                       double guard = kEnumerationGuard) {
    std::vector<Configuration> out;
    for_each_admissible(k, q, n, [&](const Configuration& c) { out.push_back(c); }, guard);
    return out;
}

}  // namespace zipper
