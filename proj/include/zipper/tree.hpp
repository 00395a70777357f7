#pragma once

// Rooted Cayley tree of order k: the root and every other vertex have
// exactly k children, so the volume V_n holds 1 + k + ... + k^n vertices
// and the boundary generation W_n holds k^n. A vertex is addressed by its
// child-index path from the root; the root's address is the empty path and
// prints as "ε".

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace zipper {

struct VertexId {
    std::vector<std::uint32_t> path;

    VertexId() = default;
    explicit VertexId(std::vector<std::uint32_t> p) : path(std::move(p)) {}

    int depth() const { return static_cast<int>(path.size()); }
    bool is_root() const { return path.empty(); }

    VertexId child(std::uint32_t i) const {
        VertexId c{path};
        c.path.push_back(i);
        return c;
    }

    VertexId parent() const {
        if (is_root()) throw std::domain_error("VertexId::parent: the root has no parent");
        VertexId p{path};
        p.path.pop_back();
        return p;
    }

    bool operator==(const VertexId& o) const { return path == o.path; }
    bool operator<(const VertexId& o) const { return path < o.path; }

    // Dot-separated child indices; the root serializes as "ε".
    std::string to_string() const {
        if (is_root()) return "ε";
        std::string s;
        for (std::size_t i = 0; i < path.size(); ++i) {
            if (i) s += '.';
            s += std::to_string(path[i]);
        }
        return s;
    }

    static VertexId parse(const std::string& s) {
        if (s.empty() || s == "ε") return VertexId{};
        VertexId v;
        std::size_t pos = 0;
        while (pos <= s.size()) {
            const std::size_t dot = s.find('.', pos);
            const std::string tok = s.substr(pos, dot == std::string::npos ? dot : dot - pos);
            if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
                throw std::invalid_argument("VertexId::parse: bad address '" + s + "'");
            v.path.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
            if (dot == std::string::npos) break;
            pos = dot + 1;
        }
        return v;
    }
};

struct VertexIdHash {
    std::size_t operator()(const VertexId& v) const {
        std::size_t h = 0x9e3779b97f4a7c15ULL;
        for (auto d : v.path) h = h * 0x100000001b3ULL + (d + 1);
        return h;
    }
};

inline VertexId tree_root() { return VertexId{}; }

inline void check_vertex(const VertexId& v, int k) {
    for (auto d : v.path)
        if (static_cast<int>(d) >= k)
            throw std::invalid_argument("vertex address uses a child index >= k");
}

// Direct successors S(x): the k children one level further from the root.
inline std::vector<VertexId> children(const VertexId& v, int k) {
    if (k < 1) throw std::invalid_argument("children: k must be >= 1");
    check_vertex(v, k);
    std::vector<VertexId> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) out.push_back(v.child(static_cast<std::uint32_t>(i)));
    return out;
}

// The unique path pi_x from x back to the root, x and root included.
inline std::vector<VertexId> path_to_root(const VertexId& v) {
    std::vector<VertexId> out;
    out.push_back(v);
    VertexId cur = v;
    while (!cur.is_root()) {
        cur = cur.parent();
        out.push_back(cur);
    }
    return out;
}

// |W_n| = k^n with overflow detection.
inline std::int64_t generation_size(int k, int n) {
    if (k < 1 || n < 0) throw std::invalid_argument("generation_size: need k >= 1, n >= 0");
    std::int64_t r = 1;
    for (int i = 0; i < n; ++i) {
        if (r > (std::int64_t{1} << 62) / k)
            throw std::overflow_error("generation_size: k^n exceeds 64-bit range");
        r *= k;
    }
    return r;
}

// |V_n| = 1 + k + ... + k^n.
inline std::int64_t volume(int k, int n) {
    std::int64_t total = 0, layer = 1;
    if (k < 1 || n < 0) throw std::invalid_argument("volume: need k >= 1, n >= 0");
    for (int d = 0; d <= n; ++d) {
        total += layer;
        if (d < n) {
            if (layer > (std::int64_t{1} << 62) / k)
                throw std::overflow_error("volume: k^n exceeds 64-bit range");
            layer *= k;
        }
    }
    return total;
}

// Depth-first preorder walk of V_n, which is exactly lexicographic order
// on the dot addresses.
inline void for_each_vertex(int k, int n, const std::function<void(const VertexId&)>& fn) {
    if (k < 1 || n < 0) throw std::invalid_argument("for_each_vertex: need k >= 1, n >= 0");
    VertexId cur;
    std::function<void()> walk = [&] {
        fn(cur);
        if (cur.depth() == n) return;
        for (int i = 0; i < k; ++i) {
            cur.path.push_back(static_cast<std::uint32_t>(i));
            walk();
            cur.path.pop_back();
        }
    };
    walk();
}

inline std::vector<VertexId> vertices_up_to(int k, int n) {
    std::vector<VertexId> out;
    out.reserve(static_cast<std::size_t>(volume(k, n)));
    for_each_vertex(k, n, [&](const VertexId& v) { out.push_back(v); });
    return out;
}

inline std::vector<VertexId> vertices_at_depth(int k, int n) {
    std::vector<VertexId> out;
    out.reserve(static_cast<std::size_t>(generation_size(k, n)));
    for_each_vertex(k, n, [&](const VertexId& v) {
        if (v.depth() == n) out.push_back(v);
    });
    return out;
}

// Dense breadth-first index of a vertex inside V_n storage: generations in
// depth order, each generation ranked by reading the path as base-k digits.
inline std::int64_t bfs_index(const VertexId& v, int k) {
    check_vertex(v, k);
    std::int64_t offset = 0, layer = 1, rank = 0;
    for (int d = 0; d < v.depth(); ++d) {
        offset += layer;
        layer *= k;
        rank = rank * k + v.path[static_cast<std::size_t>(d)];
    }
    return offset + rank;
}

}  // namespace zipper
