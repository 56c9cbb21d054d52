#include <catch2/catch_amalgamated.hpp>

#include "djc/random_gen.hpp"

using namespace djc;

namespace {

Chart c3() { return Chart({"x", "p", "u"}); }

} // namespace

TEST_CASE("wedge products") {
    Chart c = c3();
    Form dx = Form::dcoord(c, "x"), dp = Form::dcoord(c, "p");
    CHECK(wedge(dx, dx).is_zero());
    CHECK(wedge(dx, dp) == -wedge(dp, dx));

    SECTION("E_can ^ Lam_can") {
        Scalar p = Scalar::coordinate(c, "p");
        Multivec lam = wedge(Multivec(Vec::basis(c, "p")),
                             Multivec(Vec::basis(c, "x") + Vec::basis(c, "u").scaled(p)));
        Multivec top = wedge(Multivec(Vec::basis(c, "u")), lam);
        CHECK(top.alt.coeff({0, 1, 2}) == Scalar(c, -1));
    }

    SECTION("graded commutativity") {
        Rng rng(3);
        for (int t = 0; t < 10; ++t) {
            int da = rng.uniform(1, 2), db = rng.uniform(1, 2);
            Form a = rng.form(c, da), b = rng.form(c, db);
            Form ab = wedge(a, b), ba = wedge(b, a);
            if ((da * db) % 2)
                CHECK(ab == -ba);
            else
                CHECK(ab == ba);
        }
    }

    SECTION("chart mismatch") {
        Form other = Form::dcoord(Chart({"a", "b"}), "a");
        CHECK_THROWS_AS(wedge(dx, other), ChartMismatch);
    }
}

TEST_CASE("exterior derivative") {
    Chart c = c3();
    Form dx = Form::dcoord(c, "x"), dp = Form::dcoord(c, "p"), du = Form::dcoord(c, "u");
    Scalar p = Scalar::coordinate(c, "p"), x = Scalar::coordinate(c, "x");

    CHECK(d(du - dx.scaled(p)) == wedge(dx, dp));
    CHECK(d(dp.scaled(x)) == wedge(dx, dp));

    SECTION("d of an exact form vanishes") {
        Rng rng(9);
        Scalar f = rng.scalar(c, 3, 4);
        CHECK(d(jet_prolong(f).eta).is_zero());
    }

    SECTION("d o d = 0 on random forms") {
        Chart big({"a", "b", "e", "f", "g"});
        Rng rng(17);
        for (int t = 0; t < 12; ++t) {
            Form w = rng.form(big, rng.uniform(0, 3), 3);
            CHECK(d(d(w)).is_zero());
        }
    }
}

TEST_CASE("interior product") {
    Chart c = c3();
    Form dx = Form::dcoord(c, "x"), dp = Form::dcoord(c, "p");
    Scalar p = Scalar::coordinate(c, "p");

    CHECK(interior(Vec::basis(c, "x"), wedge(dx, dp)) == dp);
    CHECK(interior(Vec::basis(c, "x"), Form::scalar(p)).is_zero());
    CHECK(interior(Vec::basis(c, "p").scaled(p), wedge(dx, dp)) == -dx.scaled(p));

    SECTION("derivation property") {
        Rng rng(21);
        for (int t = 0; t < 10; ++t) {
            Vec X = rng.vec(c);
            Form a = rng.form(c, 1), b = rng.form(c, rng.uniform(1, 2));
            Form lhs = interior(X, wedge(a, b));
            Form rhs = wedge(interior(X, a), b) + wedge(-a, interior(X, b)); // deg a = 1
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("lie derivatives") {
    Chart c2({"x", "p"});
    Scalar p2 = Scalar::coordinate(c2, "p");
    Multivec pi = wedge(Multivec(Vec::basis(c2, "p")), Multivec(Vec::basis(c2, "x")));
    Vec z = Vec::basis(c2, "p").scaled(p2);
    Form Om = wedge(Form::dcoord(c2, "x"), Form::dcoord(c2, "p"));

    CHECK(lie(z, pi) == -pi);
    CHECK(lie(z, Om) == Om);

    SECTION("L_X X = 0") {
        Rng rng(31);
        Vec X = rng.vec(c2);
        CHECK(lie(X, X).is_zero());
    }

    SECTION("Cartan formula on forms") {
        Chart c = c3();
        Rng rng(33);
        for (int t = 0; t < 8; ++t) {
            Vec X = rng.vec(c);
            Form w = rng.form(c, rng.uniform(0, 2));
            CHECK(lie(X, w) == interior(X, d(w)) + d(interior(X, w)));
        }
    }
}

TEST_CASE("schouten bracket") {
    Chart c = c3();
    Scalar p = Scalar::coordinate(c, "p");
    Multivec lam = wedge(Multivec(Vec::basis(c, "p")),
                         Multivec(Vec::basis(c, "x") + Vec::basis(c, "u").scaled(p)));
    Vec e = Vec::basis(c, "u");

    CHECK(schouten(lam, lam) == wedge(Multivec(e), lam).scaled(Scalar(c, 2)));
    CHECK(schouten(Multivec(e), lam).is_zero());

    SECTION("degree one recovers the Lie bracket") {
        Rng rng(41);
        Vec X = rng.vec(c), Y = rng.vec(c);
        CHECK(schouten(Multivec(X), Multivec(Y)) == Multivec(lie_bracket(X, Y)));
    }

    SECTION("graded antisymmetry") {
        Rng rng(43);
        // [P,Q] = -(-1)^{(p-1)(q-1)} [Q,P]
        Multivec P = rng.multivec(c, 1), Q = rng.multivec(c, 2);
        CHECK(schouten(P, Q) == -schouten(Q, P));
        Multivec A = rng.multivec(c, 2), B = rng.multivec(c, 2);
        CHECK(schouten(A, B) == schouten(B, A));
    }

    SECTION("graded Jacobi identity on degrees (1,1,2) and (1,2,2)") {
        Rng rng(47);
        auto jacobi = [&](const Multivec& a, const Multivec& b, const Multivec& cc) {
            int p = a.degree(), q = b.degree(), r = cc.degree();
            auto sgn = [](int k) { return k % 2 ? -1 : 1; };
            Multivec t1 = schouten(a, schouten(b, cc)).scaled(Scalar(a.chart(), sgn((p - 1) * (r - 1))));
            Multivec t2 = schouten(b, schouten(cc, a)).scaled(Scalar(a.chart(), sgn((q - 1) * (p - 1))));
            Multivec t3 = schouten(cc, schouten(a, b)).scaled(Scalar(a.chart(), sgn((r - 1) * (q - 1))));
            return t1 + t2 + t3;
        };
        for (int t = 0; t < 6; ++t) {
            Multivec a = rng.multivec(c, 1, 1), b = rng.multivec(c, 1, 1), q = rng.multivec(c, 2, 1);
            CHECK(jacobi(a, b, q).is_zero());
            Multivec q2 = rng.multivec(c, 2, 1);
            CHECK(jacobi(a, q, q2).is_zero());
        }
    }

    SECTION("Leibniz rule with the wedge") {
        Rng rng(53);
        for (int t = 0; t < 6; ++t) {
            Vec X = rng.vec(c, 1);
            Multivec P = rng.multivec(c, 1, 1), Q = rng.multivec(c, 2, 1);
            Multivec lhs = schouten(Multivec(X), wedge(P, Q));
            Multivec rhs = wedge(schouten(Multivec(X), P), Q) + wedge(P, schouten(Multivec(X), Q));
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("nijenhuis torsion of (1,1)-tensors") {
    Chart c({"u", "x", "y"});
    CHECK(nijenhuis11(Endo11::identity(c)).vanishes());

    SECTION("standard complex structure on C^n is torsion free") {
        for (int n : {1, 2}) {
            std::vector<std::string> names;
            for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
            for (int i = 1; i <= n; ++i) names.push_back("y" + std::to_string(i));
            Chart cx(names);
            Endo11 a(cx);
            for (int i = 0; i < n; ++i) {
                a.m(n + i, i) = Scalar(cx, 1);
                a.m(i, n + i) = Scalar(cx, -1);
            }
            CHECK(nijenhuis11(a).vanishes());
        }
    }

    SECTION("rotation-with-drift tensor is torsion free, u-scaled shear is not") {
        // direct bracket expansion shows the first torsion vanishes
        Form dx = Form::dcoord(c, "x"), dy = Form::dcoord(c, "y");
        Vec bx = Vec::basis(c, "x"), by = Vec::basis(c, "y"), bu = Vec::basis(c, "u");
        Endo11 phi = Endo11::tensor(dx, by) - Endo11::tensor(dy, bx) +
                     Endo11::tensor(dy, bu).scaled(Scalar::coordinate(c, "x"));
        CHECK(nijenhuis11(phi).vanishes());
        Endo11 shear = Endo11::tensor(dx, bx).scaled(Scalar::coordinate(c, "u"));
        auto torsion = nijenhuis11(shear);
        CHECK(!torsion.vanishes());
        CHECK(torsion(bx, bu) == bx.scaled(Scalar::coordinate(c, "u")));
    }

    SECTION("torsion is tensorial") {
        Rng rng(61);
        for (int t = 0; t < 6; ++t) {
            Endo11 phi(c);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    if (rng.chance(60)) phi.m(i, j) = rng.scalar(c, 1, 2, false);
            auto torsion = nijenhuis11(phi);
            Scalar f = rng.scalar(c, 2, 2, false);
            Vec X = rng.vec(c, 1, false), Y = rng.vec(c, 1, false);
            CHECK(torsion(X.scaled(f), Y) == torsion(X, Y).scaled(f));
        }
    }
}
