#include <catch2/catch_amalgamated.hpp>
#include <srw/measure.hpp>

using namespace srw;

namespace {

GroupMeasure<ThompsonAction> unif_x0pm() {
    return uniform_on_set<ThompsonAction>({plmap_x0(), plmap_x0().inverse()});
}

}  // namespace

TEST_CASE("uniform on a set collapses duplicates first") {
    auto mu = uniform_on_set<ThompsonAction>(
        {plmap_x0(), plmap_x0(), plmap_x1(), plmap_x1().inverse()});
    REQUIRE(mu.entries.size() == 3);
    for (const auto& e : mu.entries) CHECK(e.second == Weight(1, 3));
}

TEST_CASE("convolution squares a symmetric generator measure") {
    auto mu = unif_x0pm();
    auto sq = convolve<ThompsonAction>(mu, mu);
    REQUIRE(sq.entries.size() == 3);
    auto x0 = plmap_x0();
    auto x0sq = compose(x0, x0);
    CHECK(measure_supports<ThompsonAction>(sq, x0sq));
    CHECK(measure_supports<ThompsonAction>(sq, PLMap()));
    for (const auto& [g, w] : sq.entries)
        CHECK(w == (g.is_identity() ? Weight(1, 2) : Weight(1, 4)));
}

TEST_CASE("convolution matches the shift walk on integers") {
    using A = LampZAction;
    auto t = A::generators()[0].second;
    auto mu = uniform_on_set<A>({t, A::invert(t)});
    auto sq = convolve<A>(mu, mu);
    REQUIRE(sq.entries.size() == 3);
    for (const auto& [g, w] : sq.entries) {
        CHECK(g.lamps.empty());
        CHECK(w == (g.shift == 0 ? Weight(1, 2) : Weight(1, 4)));
        CHECK((g.shift == -2 || g.shift == 0 || g.shift == 2));
    }
}

TEST_CASE("total variation of overlapping uniforms") {
    using A = ThompsonAction;
    OrbitDist<A, Weight> d1{{{dyadic(0, 0), Weight(1, 3)},
                             {dyadic(1, 2), Weight(1, 3)},
                             {dyadic(1, 1), Weight(1, 3)}},
                            Weight(0)};
    OrbitDist<A, Weight> d2{{{dyadic(1, 2), Weight(1, 3)},
                             {dyadic(1, 1), Weight(1, 3)},
                             {dyadic(3, 2), Weight(1, 3)}},
                            Weight(0)};
    CHECK(tv<A, Weight>(d1, d2) == Weight(2, 3));
    CHECK(tv<A, Weight>(d1, d1) == Weight(0));
    // disjoint supports saturate at 2
    OrbitDist<A, Weight> d3{{{dyadic(7, 3), Weight(1)}}, Weight(0)};
    CHECK(tv<A, Weight>(d1, d3) == Weight(2));
}

TEST_CASE("two steps equal pushforward of the convolution square") {
    using A = ThompsonAction;
    auto mu = uniform_on_set<A>(
        {plmap_x0(), plmap_x0().inverse(), plmap_x1(), plmap_x1().inverse()});
    auto d0 = dirac<A, Weight>(dyadic(1, 1));
    auto d1 = step<A, Weight>(d0, mu);
    auto d2 = step<A, Weight>(d1, mu);
    auto viaconv = pushforward<A, Weight>(convolve<A>(mu, mu), dyadic(1, 1));
    CHECK(d2.entries == viaconv.entries);
    CHECK(total_dist_mass<A, Weight>(d2) == Weight(1));
}

TEST_CASE("exact stepping is identical across worker counts") {
    using A = LampZAction;
    auto gens = generators_with_inverses<A>();
    std::vector<A::Elem> sup;
    for (auto& [l, g] : gens) sup.push_back(g);
    auto mu = uniform_on_set<A>(sup);
    auto d = dirac<A, Weight>({});
    for (int i = 0; i < 4; ++i) d = step<A, Weight>(d, mu, {1, 0.0});
    for (int workers : {2, 3, 4, 7}) {
        auto d2 = dirac<A, Weight>({});
        for (int i = 0; i < 4; ++i) d2 = step<A, Weight>(d2, mu, {workers, 0.0});
        CHECK(d2.entries == d.entries);
        CHECK(d2.deficit == Weight(0));
    }
}

TEST_CASE("float stepping prunes into the deficit") {
    using A = LampZAction;
    auto gens = generators_with_inverses<A>();
    std::vector<A::Elem> sup;
    for (auto& [l, g] : gens) sup.push_back(g);
    auto mu = uniform_on_set<A>(sup);
    auto d = dirac<A, double>({});
    StepOptions opt;
    opt.prune = 0.02;
    for (int i = 0; i < 6; ++i) d = step<A, double>(d, mu, opt);
    CHECK(d.deficit > 0.0);
    double mass = total_dist_mass<A, double>(d);
    CHECK(mass + d.deficit == Catch::Approx(1.0).epsilon(1e-12));
    for (const auto& e : d.entries) CHECK(e.second >= 0.02);
}

TEST_CASE("laziness halves motion and keeps symmetry") {
    auto mu = unif_x0pm();
    auto lz = lazify<ThompsonAction>(mu);
    CHECK(total_mass<ThompsonAction>(lz) == Weight(1));
    CHECK(measure_supports<ThompsonAction>(lz, PLMap()));
    CHECK(symmetrize_check<ThompsonAction>(lz));
    auto d = pushforward<ThompsonAction, Weight>(lz, dyadic(1, 1));
    CHECK(dist_contains<ThompsonAction, Weight>(d, dyadic(1, 1)));
}

TEST_CASE("symmetry check rejects lopsided measures") {
    CHECK(symmetrize_check<ThompsonAction>(unif_x0pm()));
    auto bad = make_measure<ThompsonAction>(
        {{plmap_x0(), Weight(1, 2)}, {plmap_x1(), Weight(1, 2)}});
    CHECK(!symmetrize_check<ThompsonAction>(bad));
    auto skew = make_measure<ThompsonAction>(
        {{plmap_x0(), Weight(2, 3)}, {plmap_x0().inverse(), Weight(1, 3)}});
    CHECK(!symmetrize_check<ThompsonAction>(skew));
}

TEST_CASE("harmonic defect of a constant is zero and missing values throw") {
    using A = LampZAction;
    auto gens = generators_with_inverses<A>();
    std::vector<A::Elem> sup;
    for (auto& [l, g] : gens) sup.push_back(g);
    auto mu = uniform_on_set<A>(sup);

    // f constant 1 on everything reachable in one step from two interior points
    std::vector<A::Point> pts = {{-2}, {-1}, {0}, {1}, {2}, {}, {-1, 0}, {0, 1}, {-1, 1}};
    std::sort(pts.begin(), pts.end(), A::point_less);
    std::vector<std::pair<A::Point, Weight>> f;
    for (auto& p : pts) f.push_back({p, Weight(1)});
    std::vector<A::Point> interior = {{0}};
    CHECK(harmonic_defect<A>(f, interior, mu) == Weight(0));

    std::vector<A::Point> far = {{2}};
    CHECK_THROWS_AS(harmonic_defect<A>(f, far, mu), DomainError);

    // hand check: f = indicator of {0} at interior {0}: defect = 1 - 0 = 1
    std::vector<std::pair<A::Point, Weight>> ind;
    for (auto& p : pts) ind.push_back({p, p == A::Point({0}) ? Weight(1) : Weight(0)});
    CHECK(harmonic_defect<A>(ind, interior, mu) == Weight(1));
}

TEST_CASE("measure constructors reject bad weights") {
    CHECK_THROWS_AS(
        make_measure<ThompsonAction>({{plmap_x0(), Weight(-1, 2)}}), DomainError);
    auto zero = make_measure<ThompsonAction>({{plmap_x0(), Weight(0)}});
    CHECK(zero.entries.empty());
}
