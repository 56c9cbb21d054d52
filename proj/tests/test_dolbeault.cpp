#include <catch2/catch_amalgamated.hpp>

#include "djc/dolbeault.hpp"
#include "djc/random_gen.hpp"

using namespace djc;

namespace {

HoloChart h1() { return HoloChart(Chart({"u", "x", "y"})); }

} // namespace

TEST_CASE("holomorphic chart transport") {
    HoloChart hc = h1();
    CHECK_THROWS_AS(HoloChart(Chart({"x", "y"})), NotHoloChart);

    Rng rng(3);
    for (int t = 0; t < 6; ++t) {
        Scalar s = rng.scalar(hc.real, 3, 4);
        CHECK(hc.to_real(hc.to_cplx(s)) == s);
    }
    Scalar z = Scalar::coordinate(hc.cplx, "z1");
    CHECK(hc.to_cplx(hc.to_real(z)) == z);
}

TEST_CASE("pure representation round trip and d_D compatibility") {
    HoloChart hc = h1();
    Rng rng(5);
    for (int t = 0; t < 6; ++t) {
        AtiyahForm w = rng.atiyah(hc.real, rng.uniform(1, 3), 2);
        PureAtiyah p = to_pure(hc, w);
        CHECK(from_pure(p) == w);
        CHECK(from_pure(pure_d(p)) == atiyah_d(w));
    }
}

TEST_CASE("k decomposition") {
    HoloChart hc = h1();
    Form du = Form::dcoord(hc.real, "u");

    SECTION("the k generator decomposes as (0, 1)") {
        AtiyahForm kform(du.scaled(Scalar::iunit(hc.real)), Form::scalar(Scalar(hc.real, 1)));
        KDecomposition kd = k_decompose(hc, kform);
        CHECK(kd.w0.is_zero());
        REQUIRE(kd.w1.comps.size() == 1);
        CHECK(kd.w1.comps.begin()->second == Scalar(hc.cplx, 1));
    }
    SECTION("forms without jet part have w1 = 0") {
        Form dx = Form::dcoord(hc.real, "x"), dy = Form::dcoord(hc.real, "y");
        KDecomposition kd = k_decompose(hc, AtiyahForm(wedge(dx, dy), Form(hc.real, 1)));
        CHECK(kd.w1.is_zero());
    }
    SECTION("exact round trip on random forms") {
        Rng rng(7);
        for (int t = 0; t < 6; ++t) {
            AtiyahForm w = rng.atiyah(hc.real, rng.uniform(1, 3), 2);
            CHECK(k_recompose(hc, k_decompose(hc, w)) == w);
        }
    }
}

TEST_CASE("bidegree operators") {
    HoloChart hc = h1();
    PureAtiyah one(hc, 0);
    one.add({}, Scalar(hc.cplx, 1));

    SECTION("dbar_D of the constant is half the antiholomorphic jet generator") {
        PureAtiyah expect(hc, 1);
        expect.add({one.id_kb()}, Scalar(hc.cplx, CRat(make_rat(1, 2))));
        CHECK(dbar_D(one) == expect);
    }
    SECTION("dbar_D of zbar has the dzb component") {
        PureAtiyah zb(hc, 0);
        zb.add({}, Scalar::coordinate(hc.cplx, "zb1"));
        PureAtiyah dzb = dbar_D(zb);
        REQUIRE(dzb.comps().count({1}) == 1);
        CHECK(dzb.comps().at({1}) == Scalar(hc.cplx, 1));
    }
    SECTION("pairings pin the type of the jet generators") {
        // <k, box> = 1, <k, boxbar> = 0 in the real picture
        Chart c = hc.real;
        Scalar iu = Scalar::iunit(c);
        Jet k(Form::dcoord(c, "u").scaled(iu), Scalar(c, 1));
        Derivation box(-Vec::basis(c, "u").scaled(iu), Scalar(c, 1));       // 2*box
        Derivation boxbar(Vec::basis(c, "u").scaled(iu), Scalar(c, 1));     // 2*boxbar
        CHECK(jet_pair(k, box) == Scalar(c, 2));                            // <k, 2 box> = 2
        CHECK(jet_pair(k, boxbar).is_zero());
    }
    SECTION("identities and projector completeness on a random family") {
        Rng rng(11);
        std::vector<HoloChart> charts{h1(), HoloChart(Chart({"u", "x1", "x2", "y1", "y2"}))};
        for (int t = 0; t < 8; ++t) {
            const HoloChart& hcc = charts[static_cast<size_t>(t % 2)];
            PureAtiyah p = to_pure(hcc, rng.atiyah(hcc.real, rng.uniform(1, 3), 2));
            CHECK(dbar_D(dbar_D(p)).is_zero());
            CHECK(partial_D(partial_D(p)).is_zero());
            CHECK(pure_d(p) == partial_D(p) + dbar_D(p));
            CHECK((partial_D(dbar_D(p)) + dbar_D(partial_D(p))).is_zero());
            PureAtiyah sum(hcc, p.degree());
            for (int r = 0; r <= p.degree(); ++r) sum = sum + bidegree_project(p, r, p.degree() - r);
            CHECK(sum == p);
        }
    }
}

TEST_CASE("naive polynomial dolbeault solver") {
    HoloChart hc = h1();

    SECTION("zb dzb integrates to zb^2/2") {
        PureAtiyah alpha(hc, 1);
        alpha.add({1}, Scalar::coordinate(hc.cplx, "zb1"));
        PureAtiyah beta = dbar_poly_solve(alpha);
        PureAtiyah expect(hc, 0);
        expect.add({}, Scalar::coordinate(hc.cplx, "zb1") * Scalar::coordinate(hc.cplx, "zb1") *
                           Scalar(hc.cplx, CRat(make_rat(1, 2))));
        CHECK(beta == expect);
    }
    SECTION("zero integrates to zero") {
        CHECK(dbar_poly_solve(PureAtiyah(hc, 1)).is_zero());
    }
    SECTION("round trip on random exact forms; output is deterministic") {
        Rng rng(13);
        for (int t = 0; t < 8; ++t) {
            PureAtiyah seed = to_pure(hc, rng.atiyah(hc.real, rng.uniform(1, 2), 2));
            PureAtiyah alpha = dbar_naive(seed);
            if (alpha.is_zero()) continue;
            PureAtiyah beta = dbar_poly_solve(alpha);
            CHECK(dbar_naive(beta) == alpha);
            CHECK(dbar_poly_solve(alpha) == beta);
        }
    }
    SECTION("non-closed input is rejected") {
        PureAtiyah alpha(hc, 1);
        alpha.add({1}, Scalar::coordinate(hc.cplx, "zb1") * Scalar::coordinate(hc.cplx, "z1"));
        alpha.add({0}, Scalar::coordinate(hc.cplx, "zb1"));
        CHECK_THROWS_AS(dbar_poly_solve(alpha), NotClosed);
    }
}

TEST_CASE("dolbeault-atiyah solver") {
    HoloChart hc = h1();
    Rng rng(17);

    SECTION("zero solves to zero") { CHECK(dbar_D_solve(PureAtiyah(hc, 1)).is_zero()); }

    SECTION("round trips on seeded random atiyah forms, n <= 2, degree <= 3") {
        std::vector<HoloChart> charts{h1(), HoloChart(Chart({"u", "x1", "x2", "y1", "y2"}))};
        for (int t = 0; t < 10; ++t) {
            const HoloChart& hcc = charts[static_cast<size_t>(t % 2)];
            PureAtiyah rho = to_pure(hcc, rng.atiyah(hcc.real, 1 + (t % 3), 3));
            PureAtiyah target = dbar_D(rho);
            if (target.is_zero()) continue;
            PureAtiyah sol = dbar_D_solve(target);
            CHECK(dbar_D(sol) == target);
        }
    }
    SECTION("partial_D primitives through conjugation") {
        for (int t = 0; t < 5; ++t) {
            PureAtiyah rho = to_pure(hc, rng.atiyah(hc.real, rng.uniform(1, 2), 2));
            PureAtiyah target = partial_D(rho);
            if (target.is_zero()) continue;
            PureAtiyah sol = partial_D_solve(target);
            CHECK(partial_D(sol) == target);
        }
    }
    SECTION("non-closed input is rejected") {
        PureAtiyah w(hc, 1);
        w.add({1}, Scalar::coordinate(hc.cplx, "zb1") * Scalar::coordinate(hc.cplx, "zb1"));
        w.add({0}, Scalar::coordinate(hc.cplx, "zb1"));
        CHECK_THROWS_AS(dbar_D_solve(w), NotClosed);
    }
}
