#include <catch2/catch_amalgamated.hpp>
#include <srw/cheeger.hpp>

using namespace srw;

namespace {

// synthetic ball over integer-lamp points; only vertices and edges matter here
SchreierBall<LampZAction> synthetic(size_t n, const std::vector<std::pair<uint32_t, uint32_t>>& und) {
    SchreierBall<LampZAction> b;
    for (size_t i = 0; i < n; ++i) {
        b.vertices.push_back({static_cast<long long>(i)});
        b.distance.push_back(0);
    }
    for (auto [u, v] : und) {
        b.edges.push_back({u, 0, v});
        b.edges.push_back({v, 0, u});
    }
    b.build_index();
    return b;
}

void check_band(const CheegerReport& rep) {
    REQUIRE(rep.h_exact);
    double h = double(*rep.h_exact);
    CHECK(h >= rep.band_lo - 1e-6);
    CHECK(h <= rep.band_hi + 1e-6);
}

}  // namespace

TEST_CASE("four-cycle") {
    auto ball = synthetic(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    auto rep = cheeger_report<LampZAction>(ball);
    CHECK(rep.connected);
    CHECK(rep.edges == 4);
    REQUIRE(rep.h_exact);
    CHECK(*rep.h_exact == Weight(1));
    REQUIRE(rep.phi_exact);
    CHECK(*rep.phi_exact == Weight(1, 2));
    // Laplacian spectrum of the 4-cycle is {0, 2, 2, 4}
    CHECK(rep.lambda1 == Catch::Approx(2.0).margin(1e-8));
    check_band(rep);
}

TEST_CASE("complete graph on four vertices") {
    auto ball = synthetic(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    auto rep = cheeger_report<LampZAction>(ball);
    REQUIRE(rep.h_exact);
    CHECK(*rep.h_exact == Weight(2));
    REQUIRE(rep.phi_exact);
    CHECK(*rep.phi_exact == Weight(2, 3));
    // K_n has algebraic connectivity n
    CHECK(rep.lambda1 == Catch::Approx(4.0).margin(1e-8));
    check_band(rep);
}

TEST_CASE("single edge") {
    auto ball = synthetic(2, {{0, 1}});
    auto rep = cheeger_report<LampZAction>(ball);
    REQUIRE(rep.h_exact);
    CHECK(*rep.h_exact == Weight(1));
    CHECK(*rep.phi_exact == Weight(1));
    CHECK(rep.lambda1 == Catch::Approx(2.0).margin(1e-8));
    check_band(rep);
}

TEST_CASE("parallel edges count with multiplicity, loops are dropped") {
    SchreierBall<LampZAction> b;
    b.vertices = {{0}, {1}};
    b.distance = {0, 0};
    // loop at 0, double edge between 0 and 1
    b.edges.push_back({0, 0, 0});
    b.edges.push_back({0, 1, 1});
    b.edges.push_back({1, 1, 0});
    b.edges.push_back({0, 2, 1});
    b.edges.push_back({1, 2, 0});
    b.build_index();
    auto rep = cheeger_report<LampZAction>(b);
    CHECK(rep.edges == 2);
    REQUIRE(rep.h_exact);
    CHECK(*rep.h_exact == Weight(2));
    CHECK(rep.lambda1 == Catch::Approx(4.0).margin(1e-8));
    check_band(rep);
}

TEST_CASE("disconnected graphs report zero expansion") {
    auto ball = synthetic(4, {{0, 1}, {2, 3}});
    auto rep = cheeger_report<LampZAction>(ball);
    CHECK(!rep.connected);
    CHECK(*rep.h_exact == Weight(0));
}

TEST_CASE("path graph connectivity matches the closed form") {
    // P_4: lambda1 = 2 - sqrt(2)
    auto ball = synthetic(4, {{0, 1}, {1, 2}, {2, 3}});
    auto rep = cheeger_report<LampZAction>(ball);
    CHECK(rep.lambda1 == Catch::Approx(2.0 - std::sqrt(2.0)).margin(1e-8));
    REQUIRE(rep.h_exact);
    CHECK(*rep.h_exact == Weight(1, 2));
    check_band(rep);
}

TEST_CASE("spectral band brackets the exact constant on real balls") {
    auto ball = orbit_ball<ThompsonAction>(dyadic(1, 1), 4);
    auto rep = cheeger_report<ThompsonAction>(ball);
    REQUIRE(ball.vertices.size() <= 20);
    CHECK(rep.connected);
    check_band(rep);
    REQUIRE(rep.h_exact);
    CHECK(*rep.h_exact > 0);
    REQUIRE(rep.phi_exact);
    CHECK(*rep.phi_exact <= *rep.h_exact);
}

TEST_CASE("spectral only estimate on a larger ball stays in range") {
    auto ball = orbit_ball<ThompsonAction>(dyadic(1, 1), 8);
    auto rep = cheeger_report<ThompsonAction>(ball);
    CHECK(ball.vertices.size() > 20);
    CHECK(!rep.h_exact);
    CHECK(rep.lambda1 > 0);
    CHECK(rep.band_lo > 0);
}
