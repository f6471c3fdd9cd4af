#include <catch2/catch_amalgamated.hpp>

#include <srw/liouville.hpp>

using namespace srw;

namespace {

CouplingFamily<ThompsonAction>& preset_grid() {
    static CouplingFamily<ThompsonAction> fam = [] {
        CouplingFamily<ThompsonAction> f;
        f.base = dyadic(1, 1);
        long grid[][2] = {{3, 1}, {9, 2}, {19, 3}, {35, 4}, {310, 5}};
        for (auto [n, rho] : grid) f.entries.push_back(thompson_entry(f.base, n, rho));
        validate_family<ThompsonAction>(f);
        return f;
    }();
    return fam;
}

CouplingFamily<LampZAction>& lamp_family() {
    static CouplingFamily<LampZAction> fam = [] {
        CouplingFamily<LampZAction> f;
        f.base = {};
        for (long n = 1; n <= 6; ++n) f.entries.push_back(lamplighter_z_entry(n));
        validate_family<LampZAction>(f);
        return f;
    }();
    return fam;
}

}  // namespace

TEST_CASE("power selection against partial sums") {
    // geometric halving: partial sums 1/2, 3/4, 7/8 force powers 1, 3, 9
    CHECK(select_m(Weight(1, 2), 1) == 1);
    CHECK(select_m(Weight(3, 4), 2) == 3);
    CHECK(select_m(Weight(7, 8), 3) == 9);
    // slower decay keeps every power at one for small j
    CHECK(select_m(Weight(1, 4), 1) == 1);
    CHECK(select_m(Weight(7, 16), 2) == 1);
    CHECK_THROWS_AS(select_m(Weight(1), 2), ScheduleError);
    CHECK_THROWS_AS(select_m(Weight(1, 2), 0), ScheduleError);
    CHECK_THROWS_AS(select_m(Weight(99, 100), 50, 10), ScheduleError);
}

TEST_CASE("window selection scans the family in order") {
    CouplingFamily<LampZAction> fam;  // synthetic r_n and eps, never walked
    for (long n = 1; n <= 25; ++n) {
        FamilyEntry<LampZAction> e;
        e.n = n;
        e.r_n = n;
        e.eps = Weight(1, n);
        fam.entries.push_back(e);
    }
    // needs r_n >= 10 and 10 eps <= 1/2, so n = 20 is the first admissible
    size_t idx = select_n<LampZAction>(fam, 2, 5, 2, std::nullopt);
    CHECK(fam.entries[idx].n == 20);
    // starting past the end exhausts
    CHECK_THROWS_AS(select_n<LampZAction>(fam, 2, 5, 6, size_t(24)), ScheduleError);
    try {
        select_n<LampZAction>(fam, 3, 9, 10, std::nullopt);
        FAIL("should have exhausted");
    } catch (const ScheduleError& e) {
        CHECK(std::string(e.what()).find("family exhausted") != std::string::npos);
    }
}

TEST_CASE("schedule over the dyadic orbit grid") {
    auto& fam = preset_grid();
    auto s = build_schedule<ThompsonAction>(fam, Weight(3, 4), 2);
    REQUIRE(s.rows.size() == 2);
    CHECK(s.c0 == Weight(1, 4));
    CHECK(s.cp0 == Weight(16, 37));

    CHECK(s.rows[0].j == 1);
    CHECK(s.rows[0].m_j == 1);
    CHECK(s.rows[0].radius_prev == 1);
    CHECK(s.rows[0].n_j == 3);
    CHECK(s.rows[0].c == Weight(3, 16));
    CHECK(s.rows[0].cp == Weight(12, 37));
    CHECK(s.rows[0].B == Weight(32, 37));
    CHECK(s.rows[0].nominal == Weight(3, 1));

    CHECK(s.rows[1].j == 2);
    CHECK(s.rows[1].m_j == 1);
    CHECK(s.rows[1].radius_prev == 5);  // measured displacement of the level-1 layer
    CHECK(s.rows[1].n_j == 310);        // first window wide and tight enough
    CHECK(s.rows[1].eps == Weight(62, 621));
    CHECK(s.rows[1].r_n == 5);
    CHECK(s.rows[1].cp == Weight(9, 37));
    CHECK(s.rows[1].B == Weight(56, 37));
    CHECK(s.rows[1].nominal == Weight(3, 2));

    // faster weight decay demands powers the preset grid cannot couple
    CHECK_THROWS_AS(build_schedule<ThompsonAction>(fam, Weight(1, 2), 2), ScheduleError);
}

TEST_CASE("schedule over lamp windows") {
    auto& fam = lamp_family();
    auto s = build_schedule<LampZAction>(fam, Weight(3, 4), 2);
    REQUIRE(s.rows.size() == 2);
    CHECK(s.rows[0].n_j == 1);
    CHECK(s.rows[0].m_j == 1);
    CHECK(s.rows[1].m_j == 1);
    CHECK(s.rows[1].radius_prev == 7);  // analytic displacement bound of the window layer
    CHECK(s.rows[1].n_j == 6);          // first window with inscribed radius 7
    CHECK(s.rows[1].B == Weight(56, 37));
}

TEST_CASE("assembly mixes the layers exactly") {
    auto& fam = lamp_family();
    CouplingFamily<LampZAction> small;
    small.base = {};
    small.entries.push_back(fam.entries[0]);
    auto s = build_schedule<LampZAction>(small, Weight(1, 2), 1);
    auto mu = assemble<LampZAction>(small, s);
    // c = (1/2, 1/4) renormalizes to (2/3, 1/3)
    CHECK(s.cp0 == Weight(2, 3));
    CHECK(s.rows[0].cp == Weight(1, 3));
    CHECK(total_mass<LampZAction>(mu) == Weight(1));
    CHECK(mu.entries.size() == 10);  // 3 generators as a set plus 2^3 subsets, e shared
    Weight we, wt;
    for (const auto& [g, w] : mu.entries) {
        if (LampZAction::is_identity(g)) we = w;
        if (g.shift == 1 && g.lamps.empty()) wt = w;
    }
    CHECK(we == Weight(1, 24));  // 1/3 of the uniform eighth
    CHECK(wt == Weight(2, 9));   // 2/3 of the uniform third
    CHECK(symmetrize_check<LampZAction>(mu));
}

TEST_CASE("assembly refuses a tampered certificate") {
    auto& fam = preset_grid();
    auto s = build_schedule<ThompsonAction>(fam, Weight(3, 4), 2);
    CouplingFamily<ThompsonAction> broken = fam;
    broken.entries[0].eps = Weight(1, 100);
    broken.entries[0].measured_eps = Weight(2, 7);
    // eps feeds the bound, so an understated value must be caught
    CHECK_THROWS_AS(assemble<ThompsonAction>(broken, s), CertificateError);
}

TEST_CASE("walk bounds hold on the dyadic orbit") {
    auto& fam = preset_grid();
    auto s = build_schedule<ThompsonAction>(fam, Weight(3, 4), 2);
    auto mu = assemble<ThompsonAction>(fam, s);
    CHECK(mu.entries.size() >= 621);

    auto rep = verify_bound<ThompsonAction, Weight>(fam, s, mu, dyadic(1, 1));
    CHECK(rep.all_ok);
    REQUIRE(rep.neighbors.size() == 2);  // the two interval-exchange images of 1/2
    REQUIRE(rep.rows.size() == 4);

    for (const auto& r : rep.rows) {
        CHECK(r.T <= r.B);
        CHECK(r.contained);
        CHECK(r.err == Weight(0));
        REQUIRE(r.residual.has_value());
        if (r.neighbor == "1/4") {
            CHECK(r.T == Weight(9454, 17871));
            CHECK(*r.residual == Weight(1726, 17871));
        } else {
            CHECK(r.neighbor == "3/4");
            CHECK(r.T == Weight(13360, 17871));
            CHECK(*r.residual == Weight(1768, 17871));
        }
    }
    CHECK(rep.rows[0].B == Weight(32, 37));
    CHECK(rep.rows[1].B == Weight(56, 37));
}

TEST_CASE("walk bounds vanish through lamp windows") {
    auto& fam = lamp_family();
    auto s = build_schedule<LampZAction>(fam, Weight(3, 4), 2);
    auto mu = assemble<LampZAction>(fam, s);

    auto rep = verify_bound<LampZAction, Weight>(fam, s, mu, {});
    CHECK(rep.all_ok);
    REQUIRE(rep.neighbors.size() == 1);  // shifts fix the empty configuration
    REQUIRE(rep.rows.size() == 2);
    for (const auto& r : rep.rows) {
        CHECK(r.neighbor == "[0]");
        CHECK(r.T == Weight(64, 111));
        REQUIRE(r.residual.has_value());
        // window layers push both endpoints to the same uniform distribution,
        // so the whole distance is carried by the base layer
        CHECK(*r.residual == Weight(0));
    }
}

TEST_CASE("decay rows shrink with the step count") {
    auto& fam = lamp_family();
    CouplingFamily<LampZAction> small;
    small.base = {};
    small.entries.push_back(fam.entries[0]);
    auto s = build_schedule<LampZAction>(small, Weight(1, 2), 1);
    auto mu = assemble<LampZAction>(small, s);

    std::vector<LampZAction::Point> nbrs{{0}};
    auto rows = run_decay<LampZAction, Weight>(mu, {}, nbrs, 4);
    REQUIRE(rows.size() == 4);
    for (size_t i = 0; i + 1 < rows.size(); ++i) {
        CHECK(rows[i + 1].t <= rows[i].t);
        CHECK(rows[i].pruned == Weight(0));
        CHECK(rows[i + 1].support_x >= rows[i].support_x);
    }
    CHECK(rows[0].t > rows[3].t);
}

TEST_CASE("decay agrees between exact and float modes") {
    auto& fam = preset_grid();
    auto s = build_schedule<ThompsonAction>(fam, Weight(3, 4), 2);
    auto mu = assemble<ThompsonAction>(fam, s);
    std::vector<Dyadic> nbrs{dyadic(1, 2), dyadic(3, 2)};

    auto exact = run_decay<ThompsonAction, Weight>(mu, dyadic(1, 1), nbrs, 2);
    StepOptions opt;
    opt.workers = 3;
    auto approx = run_decay<ThompsonAction, double>(mu, dyadic(1, 1), nbrs, 2, opt);
    REQUIRE(exact.size() == approx.size());
    for (size_t i = 0; i < exact.size(); ++i) {
        CHECK(exact[i].support_x == approx[i].support_x);
        CHECK_THAT(approx[i].t, Catch::Matchers::WithinAbs(double(exact[i].t), 1e-9));
    }
    // rows interleave the two neighbors; two steps never beat one
    CHECK(exact[2].t <= exact[0].t);
    CHECK(exact[3].t <= exact[1].t);
}

TEST_CASE("schedule rejects bad profiles") {
    auto& fam = preset_grid();
    CHECK_THROWS_AS(build_schedule<ThompsonAction>(fam, Weight(1), 1), ScheduleError);
    CHECK_THROWS_AS(build_schedule<ThompsonAction>(fam, Weight(0), 1), ScheduleError);
    CHECK_THROWS_AS(build_schedule<ThompsonAction>(fam, Weight(3, 4), -1), ScheduleError);
}
