#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <vector>

#include "zipper/tree.hpp"

using namespace zipper;

TEST_CASE("vertex addresses round-trip through text") {
    REQUIRE(tree_root().to_string() == "ε");
    REQUIRE(VertexId::parse("ε") == tree_root());
    REQUIRE(VertexId::parse("") == tree_root());

    const VertexId v{{1, 0, 2}};
    REQUIRE(v.to_string() == "1.0.2");
    REQUIRE(VertexId::parse("1.0.2") == v);
    REQUIRE(v.depth() == 3);
    REQUIRE_FALSE(v.is_root());

    REQUIRE_THROWS_AS(VertexId::parse("1..2"), std::invalid_argument);
    REQUIRE_THROWS_AS(VertexId::parse("1.a"), std::invalid_argument);
}

TEST_CASE("parent and child navigation") {
    const VertexId v{{2, 1}};
    REQUIRE(v.parent() == VertexId{{2}});
    REQUIRE(v.child(0) == VertexId{{2, 1, 0}});
    REQUIRE_THROWS_AS(tree_root().parent(), std::domain_error);

    const auto kids = children(VertexId{{0}}, 3);
    REQUIRE(kids.size() == 3);
    REQUIRE(kids[2] == VertexId{{0, 2}});

    const auto lineage = path_to_root(VertexId{{1, 2, 0}});
    REQUIRE(lineage.size() == 4);
    REQUIRE(lineage.front() == VertexId{{1, 2, 0}});
    REQUIRE(lineage.back() == tree_root());

    REQUIRE_THROWS_AS(check_vertex(VertexId{{2}}, 2), std::invalid_argument);
    REQUIRE_NOTHROW(check_vertex(VertexId{{1}}, 2));
}

TEST_CASE("generation sizes and volumes") {
    REQUIRE(generation_size(2, 0) == 1);
    REQUIRE(generation_size(2, 3) == 8);
    REQUIRE(generation_size(1, 10) == 1);
    REQUIRE(generation_size(3, 4) == 81);
    REQUIRE(volume(2, 3) == 15);
    REQUIRE(volume(1, 5) == 6);
    REQUIRE(volume(3, 2) == 13);
    REQUIRE_THROWS_AS(generation_size(2, 70), std::overflow_error);
}

TEST_CASE("traversal covers each vertex once in address order") {
    for (int k : {1, 2, 3}) {
        for (int n : {0, 1, 2, 3}) {
            std::vector<VertexId> seen;
            for_each_vertex(k, n, [&](const VertexId& v) { seen.push_back(v); });
            REQUIRE(static_cast<std::int64_t>(seen.size()) == volume(k, n));
            const std::set<VertexId> unique(seen.begin(), seen.end());
            REQUIRE(unique.size() == seen.size());
            for (const VertexId& v : seen) REQUIRE(v.depth() <= n);
        }
    }
}

TEST_CASE("breadth-first index agrees with generation enumeration") {
    for (int k : {1, 2, 3}) {
        const int n = 3;
        std::int64_t offset = 0;
        for (int d = 0; d <= n; ++d) {
            const auto layer = vertices_at_depth(k, d);
            REQUIRE(static_cast<std::int64_t>(layer.size()) == generation_size(k, d));
            for (std::size_t r = 0; r < layer.size(); ++r)
                REQUIRE(bfs_index(layer[r], k) == offset + static_cast<std::int64_t>(r));
            offset += static_cast<std::int64_t>(layer.size());
        }
    }
}

TEST_CASE("vertices_up_to matches the per-depth layers") {
    const auto all = vertices_up_to(2, 2);
    REQUIRE(all.size() == 7);
    const auto boundary = vertices_at_depth(2, 2);
    REQUIRE(boundary.size() == 4);
    for (const auto& v : boundary) REQUIRE(v.depth() == 2);
}
