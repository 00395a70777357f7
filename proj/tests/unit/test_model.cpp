#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "zipper/model.hpp"

using namespace zipper;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("parameter validation and derived weights") {
    ModelParams p{2, 4, std::log(2.0), std::log(4.0), 1.0};
    REQUIRE_NOTHROW(p.validate());
    REQUIRE_THAT(p.theta(), WithinRel(0.5, 1e-15));
    REQUIRE_THAT(p.eta(), WithinRel(0.25, 1e-15));
    REQUIRE_THAT(p.T(), WithinRel(1.0, 1e-15));
    REQUIRE_THAT(p.log_theta(), WithinAbs(std::log(0.5), 1e-15));

    ModelParams frozen{2, 1, 0.0, j_infinite_coupling, 2.0};
    REQUIRE(frozen.j_infinite());
    REQUIRE(frozen.eta() == 0.0);
    REQUIRE(frozen.log_eta() == -std::numeric_limits<double>::infinity());

    REQUIRE_THROWS_AS((ModelParams{0, 1, 0, 0, 1}.validate()), std::invalid_argument);
    REQUIRE_THROWS_AS((ModelParams{2, 0, 0, 0, 1}.validate()), std::invalid_argument);
    REQUIRE_THROWS_AS((ModelParams{2, 1, 0, 0, 0}.validate()), std::invalid_argument);
    REQUIRE_THROWS_AS((ModelParams{2, 1, 0, -j_infinite_coupling, 1}.validate()),
                      std::invalid_argument);

    const ModelParams from_t = ModelParams::from_T(3, 2, 1.0, 0.5, 4.0);
    REQUIRE_THAT(from_t.beta, WithinRel(0.25, 1e-15));
}

TEST_CASE("configurations store spins densely and round-trip through maps") {
    Configuration c(2, 2);
    REQUIRE(c.at(tree_root()) == 0);
    c.set(VertexId{{1}}, 3);
    c.set(VertexId{{1, 0}}, 1);
    REQUIRE(c.at(VertexId{{1}}) == 3);

    const auto m = c.to_map();
    REQUIRE(m.size() == 7);
    REQUIRE(m.at(VertexId{{1, 0}}) == 1);
    const Configuration back = Configuration::from_map(2, 2, m);
    REQUIRE(back == c);

    std::map<VertexId, int> incomplete{{tree_root(), 0}};
    REQUIRE_THROWS_AS(Configuration::from_map(2, 1, incomplete), std::invalid_argument);
}

TEST_CASE("admissibility requires a closed root and subtree-complete open regions") {
    Configuration c(2, 2);
    REQUIRE(is_admissible(c));  // everything closed

    c.set(VertexId{{0}}, 1);
    REQUIRE_FALSE(is_admissible(c));  // closed children under an open parent

    c.set(VertexId{{0, 0}}, 2);
    c.set(VertexId{{0, 1}}, 1);
    REQUIRE(is_admissible(c));  // the whole subtree below the front is open

    Configuration leaf_front(2, 2);
    leaf_front.set(VertexId{{1, 0}}, 2);
    REQUIRE(is_admissible(leaf_front));  // open leaf under a closed parent

    Configuration open_root(2, 1);
    open_root.set(tree_root(), 1);
    REQUIRE_FALSE(is_admissible(open_root));
}

TEST_CASE("energy counts open vertices and deep fronts") {
    const double eps = 0.7, J = 1.3;
    ModelParams p{2, 3, eps, J, 1.0};

    Configuration c(2, 2);
    c.set(VertexId{{0}}, 2);        // front at depth 1: exempt from J
    c.set(VertexId{{0, 0}}, 1);     // open under open: no front
    c.set(VertexId{{0, 1}}, 1);
    c.set(VertexId{{1, 0}}, 3);     // open leaf under a closed parent: one deep front
    REQUIRE_THAT(hamiltonian(c, p), WithinRel(4 * eps + 1 * J, 1e-15));

    ModelParams frozen{2, 3, eps, j_infinite_coupling, 1.0};
    REQUIRE(hamiltonian(c, frozen) == std::numeric_limits<double>::infinity());

    Configuration calm(2, 2);
    calm.set(VertexId{{0}}, 1);
    calm.set(VertexId{{0, 0}}, 1);
    calm.set(VertexId{{0, 1}}, 2);
    REQUIRE_THAT(hamiltonian(calm, frozen), WithinRel(3 * eps, 1e-15));

    Configuration bad(2, 1);
    bad.set(tree_root(), 1);
    REQUIRE_THROWS_AS(hamiltonian(bad, p), std::invalid_argument);
}

TEST_CASE("admissible configuration counts match enumeration") {
    for (int k : {1, 2, 3}) {
        for (int q : {1, 2}) {
            for (int n : {1, 2, 3}) {
                if (admissible_count(k, q, n) > kEnumerationGuard) continue;
                std::int64_t seen = 0;
                bool all_admissible = true;
                for_each_admissible(k, q, n, [&](const Configuration& c) {
                    ++seen;
                    all_admissible = all_admissible && is_admissible(c);
                });
                REQUIRE(all_admissible);
                REQUIRE_THAT(admissible_count(k, q, n),
                             WithinRel(static_cast<double>(seen), 1e-12));
            }
        }
    }
}

TEST_CASE("chain counts follow the geometric closed form") {
    for (int q : {2, 8}) {
        for (int n : {1, 2, 5}) {
            const double expected = (std::pow(q, n + 1) - 1) / (q - 1.0);
            REQUIRE_THAT(admissible_count(1, q, n), WithinRel(expected, 1e-12));
        }
    }
    REQUIRE(admissible_count(1, 1, 7) == 8.0);
}

TEST_CASE("enumeration refuses to exceed the guard") {
    REQUIRE_THROWS_AS(for_each_admissible(3, 8, 3, [](const Configuration&) {}),
                      std::length_error);
    REQUIRE_NOTHROW(for_each_admissible(2, 1, 2, [](const Configuration&) {}));
}
