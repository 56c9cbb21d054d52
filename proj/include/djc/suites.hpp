#pragma once

#include "djc/dolbeault.hpp"
#include "djc/random_gen.hpp"
#include "djc/structures.hpp"

namespace djc {

// Randomized bracket-calculus suite: the Dorfman Leibniz/Jacobi-type
// identity, pairing invariance under any B-field, bracket invariance under
// closed B-fields, and a stored non-closed witness with nonzero defect.
inline Report bracket_suite(uint64_t seed, int count) {
    Report rep;
    rep.title = "bracket-suite";
    Rng rng(seed);
    std::vector<Chart> charts = {Chart({"x", "p"}), Chart({"x", "p", "u"}),
                                 Chart({"x", "p", "q", "u"})};
    int jac_fail = 0, pair_fail = 0, closed_fail = 0;
    std::string jac_w, pair_w, closed_w;
    for (int it = 0; it < count; ++it) {
        const Chart& c = charts[static_cast<size_t>(it) % charts.size()];
        OmniSection a = rng.omni(c), b = rng.omni(c), g = rng.omni(c);
        // [[a,[[b,g]]]] = [[[[a,b]],g]] + [[b,[[a,g]]]]
        OmniSection lhs = dorfman(a, dorfman(b, g));
        OmniSection rhs = dorfman(dorfman(a, b), g) + dorfman(b, dorfman(a, g));
        if (!(lhs == rhs) && ++jac_fail == 1) jac_w = "iteration " + std::to_string(it);
        // pairing invariance under e^B for arbitrary (non-closed allowed) B
        AtiyahForm bany = rng.atiyah(c, 2);
        Scalar p0 = omni_pair(a, b);
        Scalar p1 = omni_pair(bfield(bany, a, true), bfield(bany, b, true));
        if (p0 != p1 && ++pair_fail == 1) pair_w = "iteration " + std::to_string(it);
        // bracket invariance under closed B
        AtiyahForm bclosed = rng.closed_atiyah2(c, 2, true);
        OmniSection d0 = bfield(bclosed, dorfman(a, b), true);
        OmniSection d1 = dorfman(bfield(bclosed, a, true), bfield(bclosed, b, true));
        if (!(d0 == d1) && ++closed_fail == 1) closed_w = "iteration " + std::to_string(it);
        // [[alpha,alpha]] = (0, j1<psi,Delta>)
        OmniSection sq = dorfman(a, a);
        if (!sq.d.is_zero() || !(sq.j == jet_prolong(jet_pair(a.j, a.d)))) {
            rep.require("[[a,a]] = (0, j1<psi,Delta>)", false, "iteration " + std::to_string(it));
        }
    }
    rep.require("Dorfman Leibniz identity on " + std::to_string(count) + " triples", jac_fail == 0, jac_w);
    rep.require("pairing invariant under e^B (any B)", pair_fail == 0, pair_w);
    rep.require("bracket invariant under e^B (closed B)", closed_fail == 0, closed_w);
    // stored witness: B = x du^dp is not closed and breaks bracket invariance
    {
        Chart c({"x", "p", "u"});
        AtiyahForm bw(wedge(Form::dcoord(c, "u"), Form::dcoord(c, "p")).scaled(Scalar::coordinate(c, "x")),
                      Form(c, 1));
        rep.require("witness B = x du^dp is non-closed", !atiyah_d(bw).is_zero());
        Rng wrng(seed ^ 0xabcdefull);
        bool defect = false;
        for (int t = 0; t < 8 && !defect; ++t) {
            OmniSection a = wrng.omni(c), b = wrng.omni(c);
            OmniSection d0 = bfield(bw, dorfman(a, b), true);
            OmniSection d1 = dorfman(bfield(bw, a, true), bfield(bw, b, true));
            defect = !(d0 == d1);
        }
        rep.require("witness produces a nonzero bracket defect", defect);
    }
    return rep;
}

// Randomized Dolbeault-Atiyah suite: solver round trips, the operator
// identities, and partial_D primitives by conjugation.
inline Report dolbeault_suite(uint64_t seed, int count) {
    Report rep;
    rep.title = "dolbeault-suite";
    Rng rng(seed);
    std::vector<HoloChart> charts;
    charts.emplace_back(Chart({"u", "x", "y"}));
    charts.emplace_back(Chart({"u", "x1", "x2", "y1", "y2"}));
    int rt_fail = 0, id_fail = 0, pd_fail = 0;
    std::string rt_w, id_w, pd_w;
    for (int it = 0; it < count; ++it) {
        const HoloChart& hc = charts[static_cast<size_t>(it) % charts.size()];
        int degree = 1 + (it % 3); // Atiyah degrees 1..3
        PureAtiyah rho = to_pure(hc, rng.atiyah(hc.real, degree, 3));
        PureAtiyah target = dbar_D(rho);
        if (!(pure_d(rho) == partial_D(rho) + dbar_D(rho)) || !dbar_D(target).is_zero()) {
            if (++id_fail == 1) id_w = "iteration " + std::to_string(it);
        }
        if (!target.is_zero()) {
            PureAtiyah sol = dbar_D_solve(target);
            if (dbar_D(sol) != target && ++rt_fail == 1) rt_w = "iteration " + std::to_string(it);
        }
        PureAtiyah pdt = partial_D(rho);
        if (!pdt.is_zero() && partial_D(pdt).is_zero()) {
            PureAtiyah prim = partial_D_solve(pdt);
            if (partial_D(prim) != pdt && ++pd_fail == 1) pd_w = "iteration " + std::to_string(it);
        }
    }
    rep.require("dbar_D solve round trips on " + std::to_string(count) + " forms", rt_fail == 0, rt_w);
    rep.require("dbar_D^2 = 0 and d_D = partial_D + dbar_D", id_fail == 0, id_w);
    rep.require("partial_D primitives by conjugation", pd_fail == 0, pd_w);
    return rep;
}

namespace detail {

// Almost contact structures for the homogenization suite: rotations of the
// (x, y) plane by a rational-function angle parameter, which square
// correctly but are integrable only when the parameter is constant.
inline AlmostContact random_almost_contact(Rng& rng, const Chart& c, bool integrable) {
    if (integrable) {
        // the local normal form family needs f independent of u
        Chart flat_chart({c.name(1), c.name(2)});
        Scalar f = rng.scalar(flat_chart, 2, 2, false).transported(c);
        return nacs_normal_form(c, f);
    }
    // u-dependence is what breaks integrability here: the (x,y)-block of an
    // almost contact rotation is torsion-free on its own, while a_u != 0
    // makes N(∂x, ∂u) = Phi(a_u ∂x + ...) nonzero.
    Scalar a = rng.scalar(c, 1, 2, false) + Scalar::coordinate(c, c.name(0));
    // Phi(∂x) = a ∂x + b ∂y, Phi(∂y) = cc ∂x − a ∂y with a² + b·cc = −1
    Scalar b(c, 1);
    Scalar ccoef = -(Scalar(c, 1) + a * a);
    Endo11 phi(c);
    Form dx = Form::dcoord(c, c.name(1)), dy = Form::dcoord(c, c.name(2));
    Vec bx = Vec::basis(c, 1), by = Vec::basis(c, 2);
    phi = Endo11::tensor(dx, bx.scaled(a) + by.scaled(b)) +
          Endo11::tensor(dy, bx.scaled(ccoef) - by.scaled(a));
    return AlmostContact(phi, Vec::basis(c, 0), Form::dcoord(c, c.name(0)));
}

} // namespace detail

// Randomized homogenization suite: for gauge endos phi with phi² = −id built
// from almost contact data, torsion freeness is equivalent to the torsion
// freeness of the homogenized (1,1)-tensor, exactly and in both directions.
inline Report homogenize_suite(uint64_t seed, int count) {
    Report rep;
    rep.title = "homogenize-suite";
    Rng rng(seed);
    Chart c({"u", "x", "y"});
    int both_zero = 0, both_nonzero = 0, mismatch = 0;
    std::string mismatch_w;
    for (int it = 0; it < count; ++it) {
        bool want_integrable = (it % 2) == 0;
        AlmostContact t = detail::random_almost_contact(rng, c, want_integrable);
        if (rng.chance(50)) t = nacs_gauge_transform(t, rng.scalar(c, 1, 2, false));
        GaugeEndo phi = nacs_to_phi(t);
        Mat sq = phi.m * phi.m + Mat::identity(c, c.dim() + 1);
        if (!sq.is_zero()) {
            rep.require("phi^2 = -id for generated data", false, "iteration " + std::to_string(it));
            continue;
        }
        bool flat_torsion = true;
        {
            std::vector<Derivation> frame;
            for (int i = 0; i < c.dim(); ++i) frame.push_back(Derivation::basis(c, i));
            frame.push_back(Derivation::unit(c));
            for (size_t i = 0; i < frame.size() && flat_torsion; ++i)
                for (size_t j = i + 1; j < frame.size() && flat_torsion; ++j)
                    flat_torsion = gauge_nijenhuis(phi, frame[i], frame[j]).is_zero();
        }
        Endo11 lifted = homogenize_endo(phi.m, c);
        bool lifted_torsion = nijenhuis11(lifted).vanishes();
        if (flat_torsion != lifted_torsion) {
            ++mismatch;
            if (mismatch == 1) mismatch_w = "iteration " + std::to_string(it);
        }
        if (flat_torsion)
            ++both_zero;
        else
            ++both_nonzero;
        // the lift is homogeneous: L_{t d/dt} phi~ = 0
        Chart ext = lifted.chart;
        Vec euler = Vec::basis(ext, "t").scaled(Scalar::coordinate(ext, "t"));
        if (!lie(euler, lifted).m.is_zero())
            rep.require("lift is homogeneous", false, "iteration " + std::to_string(it));
    }
    rep.require("N_phi = 0 <=> N_{phi~} = 0 on " + std::to_string(count) + " operators", mismatch == 0,
                mismatch_w);
    rep.require("suite saw integrable witnesses", both_zero > 0);
    rep.require("suite saw non-integrable witnesses", both_nonzero > 0);
    return rep;
}

} // namespace djc
