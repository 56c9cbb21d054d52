#include <catch2/catch_amalgamated.hpp>

#include "djc/random_gen.hpp"
#include "djc/structures.hpp"

using namespace djc;

namespace {

Chart c3() { return Chart({"x", "p", "u"}); }

JacobiPair jcan(const Chart& c) { return canonical_jacobi(c); }

} // namespace

TEST_CASE("split pairing") {
    Chart c = c3();
    OmniSection a(Derivation(Vec::basis(c, "x"), Scalar(c, 1)),
                  Jet(Form::dcoord(c, "p"), Scalar(c, 2)));
    OmniSection b(Derivation::vector(Vec::basis(c, "p")), Jet::form(Form::dcoord(c, "x")));
    CHECK(omni_pair(a, b) == Scalar(c, 2));
    OmniSection al(Derivation::vector(Vec::basis(c, "x")), Jet::form(Form::dcoord(c, "x")));
    CHECK(omni_pair(al, al) == Scalar(c, 2));
    CHECK(omni_pair(OmniSection(Derivation::unit(c), Jet(c)),
                    OmniSection(Derivation(c), Jet::unit(c))) == Scalar(c, 1));
}

TEST_CASE("dorfman bracket examples") {
    Chart c = c3();
    CHECK(dorfman(OmniSection(Derivation::basis(c, 0), Jet(c)),
                  OmniSection(Derivation::basis(c, 1), Jet(c)))
              .is_zero());

    Jet psi(Form::dcoord(c, "p").scaled(Scalar::coordinate(c, "x")), Scalar::coordinate(c, "p"));
    OmniSection unit(Derivation::unit(c), Jet(c));
    OmniSection jetsec(Derivation(c), psi);
    OmniSection br = dorfman(unit, jetsec);
    CHECK(br.d.is_zero());
    CHECK(br.j == psi);

    // [[a,a]] = (0, j1<psi, Delta>): for (d/dx, dx) this is (0, j)
    OmniSection al(Derivation::basis(c, 0), Jet::form(Form::dcoord(c, "x")));
    OmniSection sq = dorfman(al, al);
    CHECK(sq.d.is_zero());
    CHECK(sq.j == Jet::unit(c));
}

TEST_CASE("dorfman properties") {
    Chart c = c3();
    Rng rng(3);
    SECTION("Leibniz identity") {
        for (int t = 0; t < 6; ++t) {
            OmniSection a = rng.omni(c), b = rng.omni(c), g = rng.omni(c);
            CHECK(dorfman(a, dorfman(b, g)) == dorfman(dorfman(a, b), g) + dorfman(b, dorfman(a, g)));
        }
    }
    SECTION("symmetrized defect is an exact jet") {
        for (int t = 0; t < 6; ++t) {
            OmniSection a = rng.omni(c);
            OmniSection sq = dorfman(a, a);
            CHECK(sq.d.is_zero());
            CHECK(sq.j == jet_prolong(jet_pair(a.j, a.d)));
        }
    }
}

TEST_CASE("b-field transformations") {
    Chart c = c3();
    AtiyahForm om = canonical_omega(c);
    Rng rng(7);

    OmniSection probe = rng.omni(c);
    CHECK(bfield(AtiyahForm(c, 2), probe) == probe); // e^0 = id

    OmniSection unit(Derivation::unit(c), Jet(c));
    OmniSection e1 = bfield(om, unit);
    CHECK(e1.j.eta == canonical_theta(c));
    CHECK(e1.j.g.is_zero());

    SECTION("composition law and inverses") {
        AtiyahForm b2 = rng.closed_atiyah2(c);
        OmniSection a = rng.omni(c);
        CHECK(bfield(om, bfield(b2, a)) == bfield(om + b2, a));
        CHECK(bfield(-om, bfield(om, a)) == a);
    }
    SECTION("pairing invariance for every B") {
        for (int t = 0; t < 6; ++t) {
            AtiyahForm banys = rng.atiyah(c, 2);
            OmniSection a = rng.omni(c), b = rng.omni(c);
            CHECK(omni_pair(bfield(banys, a, true), bfield(banys, b, true)) == omni_pair(a, b));
        }
    }
    SECTION("bracket invariance exactly for closed B") {
        for (int t = 0; t < 4; ++t) {
            AtiyahForm bc = rng.closed_atiyah2(c);
            OmniSection a = rng.omni(c), b = rng.omni(c);
            CHECK(dorfman(bfield(bc, a), bfield(bc, b)) == bfield(bc, dorfman(a, b)));
        }
        // the stored witness x du^dp is not closed and produces a defect
        AtiyahForm bw(wedge(Form::dcoord(c, "u"), Form::dcoord(c, "p"))
                          .scaled(Scalar::coordinate(c, "x")),
                      Form(c, 1));
        CHECK(!atiyah_d(bw).is_zero());
        CHECK_THROWS_AS(bfield(bw, rng.omni(c)), NotClosed);
        bool defect = false;
        for (int t = 0; t < 6 && !defect; ++t) {
            OmniSection a = rng.omni(c), b = rng.omni(c);
            defect = !(dorfman(bfield(bw, a, true), bfield(bw, b, true)) ==
                       bfield(bw, dorfman(a, b), true));
        }
        CHECK(defect);
    }
}

TEST_CASE("isotropy and involutivity checkers") {
    Chart c = c3();
    JacobiPair j = jcan(c);
    Frame gj = graph_jacobi(j.lam, j.e);

    CHECK(check_isotropic(gj).pass());
    CHECK(check_involutive(gj).pass());
    CHECK(check_isotropic(gauge_frame(c)).pass());
    CHECK(check_involutive(gauge_frame(c)).pass());

    SECTION("pair witness") {
        Frame bad(c, {OmniSection(Derivation::basis(c, 0), Jet::form(Form::dcoord(c, "x")))});
        Report rep = check_isotropic(bad);
        CHECK(!rep.pass());
        CHECK(rep.items.front().witness == "2");
    }
    SECTION("graph of a closed form is involutive, a non-closed one is not") {
        Rng rng(11);
        CHECK(check_involutive(graph_atiyah(rng.closed_atiyah2(c))).pass());
        AtiyahForm bw(wedge(Form::dcoord(c, "u"), Form::dcoord(c, "p"))
                          .scaled(Scalar::coordinate(c, "x")),
                      Form(c, 1));
        Frame gb = graph_atiyah(bw);
        CHECK(check_isotropic(gb).pass());
        CHECK(!check_involutive(gb).pass());
    }
    SECTION("involutivity checker needs maximal isotropy") {
        Frame small(c, {OmniSection(Derivation::basis(c, 0), Jet(c))});
        CHECK_THROWS_AS(check_involutive(small), PreconditionNotMaximalIsotropic);
    }
}

TEST_CASE("jacobi graphs and the bracket calibration") {
    Chart c = c3();
    JacobiPair j = jcan(c);

    SECTION("generator from the unit jet") {
        // adopted sharp convention: J#(j) = (-E, 0), so the generator is (-E, j)
        Derivation d = jacobi_sharp(j.lam, j.e, Jet::unit(c));
        CHECK(d.X == -j.e);
        CHECK(d.f.is_zero());
    }
    SECTION("graph of the zero structure is the jet summand") {
        CHECK(frame_equal(graph_jacobi(Multivec(c, 2), Vec(c)), jet_frame(c)));
    }
    SECTION("mandatory calibration: <j1 g, J# j1 f> = Lam(df,dg) + E(f)g - f E(g)") {
        Rng rng(13);
        for (int t = 0; t < 10; ++t) {
            Scalar f = rng.scalar(c, 2, 2, false), g = rng.scalar(c, 2, 2, false);
            Scalar lhs = jet_pair(jet_prolong(g), jacobi_sharp(j.lam, j.e, jet_prolong(f)));
            Scalar rhs = j.lam.on({jet_prolong(f).eta, jet_prolong(g).eta}) + j.e.apply(f) * g -
                         f * j.e.apply(g);
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("atiyah graphs") {
    Chart c = c3();
    CHECK(frame_equal(graph_atiyah(AtiyahForm(c, 2)), gauge_frame(c)));
    AtiyahForm om = canonical_omega(c);
    Frame go = graph_atiyah(om);
    CHECK(check_isotropic(go).pass());
    CHECK(check_involutive(go).pass());

    SECTION("star against a graph is the b-field transform") {
        Rng rng(17);
        AtiyahForm b = rng.closed_atiyah2(c);
        JacobiPair j = jcan(c);
        Frame f = graph_jacobi(j.lam, j.e);
        CHECK(frame_equal(star(f, graph_atiyah(b)), bfield(b, f)));
    }
}

TEST_CASE("canonical 2-form varpi") {
    Chart c = c3();
    AtiyahForm om = canonical_omega(c);
    Frame go = graph_atiyah(om);
    Rng rng(19);

    SECTION("graph case evaluates the form") {
        for (int t = 0; t < 5; ++t) {
            Derivation d1 = rng.derivation(c, 1, false), d2 = rng.derivation(c, 1, false);
            CHECK(varpi(go, d1, d2) == atiyah_eval2(om, d1, d2));
        }
    }
    SECTION("skew and independent of the elimination path") {
        JacobiPair j = jcan(c);
        Frame gj = graph_jacobi(j.lam, j.e);
        Derivation d1 = rng.derivation(c, 1, false), d2 = rng.derivation(c, 1, false);
        CHECK(varpi(gj, d1, d1).is_zero());
        CHECK(varpi(gj, d1, d2) == -varpi(gj, d2, d1));
        std::vector<int> order = {3, 2, 1, 0};
        CHECK(varpi(gj, d1, d2) == varpi(gj, d1, d2, &order));
    }
    SECTION("solvability is checked") {
        // frame spanned inside the jet summand has trivial derivation image
        CHECK_THROWS_AS(varpi(jet_frame(c), Derivation::basis(c, 0), Derivation::basis(c, 1)),
                        NotInProjection);
    }
    SECTION("imaginary part reproduces the Jacobi 2-form on the eigenbundle") {
        // Im varpi(J# psi, J# psi') = -J(psi, psi') with J(psi,psi') = <psi, J# psi'>
        JacobiPair j = jcan(c);
        Frame eig = graph_jacobi_complex(j.lam, j.e);
        for (int t = 0; t < 4; ++t) {
            Jet psi = rng.jet(c, 1, false), chi = rng.jet(c, 1, false);
            Derivation d1 = jacobi_sharp(j.lam, j.e, psi), d2 = jacobi_sharp(j.lam, j.e, chi);
            Scalar lhs = varpi(eig, d1, d2).im();
            Scalar rhs = -jet_pair(chi, jacobi_sharp(j.lam, j.e, psi));
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("star products") {
    Chart c = c3();
    JacobiPair j = jcan(c);
    Frame gj = graph_jacobi(j.lam, j.e);

    CHECK(frame_equal(star(gj, gauge_frame(c)), gj));
    CHECK(frame_equal(star(jet_frame(c), jet_frame(c)), jet_frame(c)));

    SECTION("rank-deficient product reports the offending point") {
        Scalar x = Scalar::coordinate(c, "x");
        // generators vanish on the hyperplane x = 0, so the span drops rank
        std::vector<OmniSection> gens;
        for (const auto& g : gauge_frame(c).generators()) gens.push_back(g.scaled(x));
        Frame degenerate(c, std::move(gens));
        CHECK_THROWS_AS(star(degenerate, gj), RankDeficient);
    }
}

TEST_CASE("backward images") {
    Chart c = c3();
    JacobiPair j = jcan(c);
    Frame gj = graph_jacobi(j.lam, j.e);

    SECTION("projection lifts") {
        Chart prod({"x", "p", "u", "b"});
        CHECK(frame_equal(backward_projection(gauge_frame(c), prod), gauge_frame(prod)));
        Frame lift = backward_projection(gj, prod);
        CHECK(check_isotropic(lift).pass());
        CHECK(check_involutive(lift).pass());
    }
    SECTION("embedding at the full product is the identity") {
        Frame same = backward_embedding(gj, {});
        CHECK(frame_equal(same, gj));
    }
    SECTION("embedding a lifted graph recovers an involutive frame") {
        Chart prod({"x", "p", "u", "b"});
        Frame lift = backward_projection(gj, prod);
        Frame emb = backward_embedding(lift, {"b"});
        CHECK(emb.chart() == c);
        CHECK(check_involutive(emb).pass());
        CHECK(frame_equal(emb, gj));
    }
    SECTION("clean intersection failure carries the witnessing point") {
        Chart cb({"x", "b"});
        Scalar x = Scalar::coordinate(cb, "x");
        // p_D F|_S jumps rank at x = 0 on the subspace b = 0
        Frame f(cb, {OmniSection(Derivation::vector(Vec::basis(cb, "b").scaled(x)), Jet(cb)),
                     OmniSection(Derivation::unit(cb), Jet(cb))});
        CHECK_THROWS_AS(backward_embedding(f, {"b"}), CleanIntersectionFailed);
    }
}

TEST_CASE("flat products") {
    Chart a({"a1", "a2"});
    Chart b({"b1", "b2", "b3"});
    HomPoisson hp = canonical_hom_poisson(a);
    Frame fa = dazord_frame(hp);

    SECTION("the lifted gauge frame is the identity element") {
        Frame lhs = flat_product(fa, gauge_frame(b));
        Frame rhs = backward_projection(fa, Chart::product(a, b));
        CHECK(frame_equal(lhs, rhs));
    }
    SECTION("B-fields over one factor move through the product") {
        Rng rng(23);
        AtiyahForm ba = rng.closed_atiyah2(a);
        JacobiPair jb = canonical_jacobi(b);
        Frame fb = graph_jacobi(jb.lam, jb.e);
        Chart prod = Chart::product(a, b);
        // pull the 2-form back along the projection
        AtiyahForm lifted(Form(ba.w0.alt.transported(prod)), Form(ba.w1.alt.transported(prod)));
        Frame lhs = bfield(lifted, flat_product(fa, fb));
        Frame rhs = flat_product(bfield(ba, fa), fb);
        CHECK(frame_equal(lhs, rhs));
    }
}

TEST_CASE("frame equality") {
    Chart c = c3();
    JacobiPair j = jcan(c);
    Frame gj = graph_jacobi(j.lam, j.e);
    Rng rng(29);

    auto gens = gj.generators();
    gens[0] = gens[0].scaled(Scalar(c, 1) + Scalar::coordinate(c, "x") * Scalar::coordinate(c, "x"));
    CHECK(frame_equal(gj, Frame(c, gens)));
    CHECK(!frame_equal(gauge_frame(c), jet_frame(c)));
    AtiyahForm b = rng.closed_atiyah2(c);
    CHECK(frame_equal(bfield(-b, bfield(b, gj)), gj));
}
