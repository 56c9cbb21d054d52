#pragma once

#include "djc/omni.hpp"

namespace djc {

// ---------------------------------------------------------------------------
// Jacobi pairs and homogeneous Poisson structures
// ---------------------------------------------------------------------------

struct JacobiPair {
    Multivec lam; // bivector
    Vec e;

    JacobiPair() = default;
    JacobiPair(Multivec l, Vec v) : lam(std::move(l)), e(std::move(v)) {
        require_same_chart(lam.chart(), e.chart);
        if (lam.degree() != 2) throw DegreeMismatch("Jacobi pair needs a bivector");
    }
    const Chart& chart() const { return e.chart; }
};

struct HomPoisson {
    Multivec pi;
    Vec z;

    HomPoisson() = default;
    HomPoisson(Multivec p, Vec v) : pi(std::move(p)), z(std::move(v)) {
        require_same_chart(pi.chart(), z.chart);
        if (pi.degree() != 2) throw DegreeMismatch("homogeneous Poisson needs a bivector");
    }
    const Chart& chart() const { return z.chart; }
};

// {f,g} = Lam(df,dg) + E(f)g − f E(g).
inline Scalar jacobi_bracket(const JacobiPair& j, const Scalar& f, const Scalar& g) {
    Form df = jet_prolong(f).eta, dg = jet_prolong(g).eta;
    return j.lam.on({df, dg}) + j.e.apply(f) * g - f * j.e.apply(g);
}

namespace detail {

inline std::vector<Scalar> monomials_up_to_degree2(const Chart& c) {
    std::vector<Scalar> out;
    out.push_back(Scalar(c, 1));
    for (int i = 0; i < c.dim(); ++i) out.push_back(Scalar::coordinate(c, c.name(i)));
    for (int i = 0; i < c.dim(); ++i)
        for (int j = i; j < c.dim(); ++j)
            out.push_back(Scalar::coordinate(c, c.name(i)) * Scalar::coordinate(c, c.name(j)));
    return out;
}

} // namespace detail

inline Report check_jacobi_pair(const JacobiPair& j) {
    Report rep;
    rep.title = "jacobi-pair";
    Multivec defect1 = schouten(j.lam, j.lam) - wedge(Multivec(j.e), j.lam).scaled(Scalar(j.chart(), 2));
    rep.require("[Lam,Lam] - 2 E^Lam = 0", defect1.is_zero(), to_string(defect1));
    Multivec defect2 = schouten(Multivec(j.e), j.lam);
    rep.require("[E,Lam] = 0", defect2.is_zero(), to_string(defect2));
    // independent oracle: Jacobi identity of the bracket on monomials
    bool jac = true;
    std::string witness;
    auto basis = detail::monomials_up_to_degree2(j.chart());
    for (size_t a = 0; a < basis.size() && jac; ++a)
        for (size_t b = a; b < basis.size() && jac; ++b)
            for (size_t c = b; c < basis.size() && jac; ++c) {
                Scalar s = jacobi_bracket(j, basis[a], jacobi_bracket(j, basis[b], basis[c])) +
                           jacobi_bracket(j, basis[b], jacobi_bracket(j, basis[c], basis[a])) +
                           jacobi_bracket(j, basis[c], jacobi_bracket(j, basis[a], basis[b]));
                if (!s.is_zero()) {
                    jac = false;
                    witness = "cyc {" + to_string(basis[a]) + ",{" + to_string(basis[b]) + "," +
                              to_string(basis[c]) + "}} = " + to_string(s);
                }
            }
    rep.require("bracket Jacobi identity on monomials of degree <= 2", jac, witness);
    return rep;
}

inline Report check_hom_poisson(const HomPoisson& h) {
    Report rep;
    rep.title = "hom-poisson";
    Multivec d1 = schouten(h.pi, h.pi);
    rep.require("[pi,pi] = 0", d1.is_zero(), to_string(d1));
    Multivec d2 = lie(h.z, h.pi) + h.pi;
    rep.require("L_Z pi + pi = 0", d2.is_zero(), to_string(d2));
    return rep;
}

// ---------------------------------------------------------------------------
// Gauge endomorphisms (operators on D R_M in the frame {∂_i, 1})
// ---------------------------------------------------------------------------

struct GaugeEndo {
    Chart chart;
    Mat m; // (dim+1) x (dim+1)

    GaugeEndo() = default;
    explicit GaugeEndo(const Chart& c) : chart(c), m(c, c.dim() + 1, c.dim() + 1) {}
    GaugeEndo(const Chart& c, Mat mm) : chart(c), m(std::move(mm)) {
        if (m.rows() != c.dim() + 1 || m.cols() != c.dim() + 1)
            throw Error("Shape", "gauge endomorphism must be (dim+1) x (dim+1)");
    }

    Derivation apply(const Derivation& d) const {
        require_same_chart(chart, d.chart());
        std::vector<Scalar> v;
        for (int i = 0; i < chart.dim(); ++i) v.push_back(d.X.comps[static_cast<size_t>(i)]);
        v.push_back(d.f);
        auto w = m.apply(v);
        Derivation out(chart);
        for (int i = 0; i < chart.dim(); ++i) out.X.comps[static_cast<size_t>(i)] = w[static_cast<size_t>(i)];
        out.f = w[static_cast<size_t>(chart.dim())];
        return out;
    }

    // Rank-one operator psi ⊗ D : E ↦ <psi, E>·D.
    static GaugeEndo tensor(const Jet& psi, const Derivation& d) {
        GaugeEndo t(d.chart());
        int n = t.chart.dim();
        std::vector<Scalar> dual;
        for (int i = 0; i < n; ++i) dual.push_back(psi.eta.alt.coeff({i}));
        dual.push_back(psi.g);
        std::vector<Scalar> img;
        for (int i = 0; i < n; ++i) img.push_back(d.X.comps[static_cast<size_t>(i)]);
        img.push_back(d.f);
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j) t.m(i, j) = img[static_cast<size_t>(i)] * dual[static_cast<size_t>(j)];
        return t;
    }

    friend GaugeEndo operator+(const GaugeEndo& a, const GaugeEndo& b) {
        return GaugeEndo(a.chart, a.m + b.m);
    }
    friend GaugeEndo operator-(const GaugeEndo& a, const GaugeEndo& b) {
        return GaugeEndo(a.chart, a.m - b.m);
    }
    GaugeEndo operator-() const { return GaugeEndo(chart, -m); }
    GaugeEndo scaled(const Scalar& s) const { return GaugeEndo(chart, m.scaled(s)); }
};

// Lie algebroid Nijenhuis torsion of a gauge endomorphism.
inline Derivation gauge_nijenhuis(const GaugeEndo& phi, const Derivation& a, const Derivation& b) {
    Derivation pa = phi.apply(a), pb = phi.apply(b);
    return deriv_bracket(pa, pb) - deriv_bracket(a, b) -
           phi.apply(deriv_bracket(pa, b) + deriv_bracket(a, pb));
}

inline Report check_dl_complex(const GaugeEndo& phi) {
    Report rep;
    rep.title = "dl-complex";
    const Chart& c = phi.chart;
    int n = c.dim();
    Mat sq = phi.m * phi.m + Mat::identity(c, n + 1);
    rep.require("phi^2 = -id", sq.is_zero());
    std::vector<Derivation> frame;
    for (int i = 0; i < n; ++i) frame.push_back(Derivation::basis(c, i));
    frame.push_back(Derivation::unit(c));
    for (int i = 0; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            Derivation t = gauge_nijenhuis(phi, frame[static_cast<size_t>(i)], frame[static_cast<size_t>(j)]);
            if (!t.is_zero())
                rep.require("N_phi(frame " + std::to_string(i) + "," + std::to_string(j) + ") = 0", false,
                            to_string(t.f));
        }
    if (rep.items.size() == 1) rep.require("N_phi vanishes on the frame", true);
    return rep;
}

// ---------------------------------------------------------------------------
// Generalized contact operators
// ---------------------------------------------------------------------------

// Endomorphism of D R_M ⊕ J¹R_M in the bases ({∂_i, 1}, {dx^i, j}); the dual
// pairing is the identity matrix there, so the adjoint is the transpose.
struct GenContactOp {
    Chart chart;
    Mat k; // 2(dim+1) square

    GenContactOp() = default;
    GenContactOp(const Chart& c, Mat mm) : chart(c), k(std::move(mm)) {
        int n = 2 * (c.dim() + 1);
        if (k.rows() != n || k.cols() != n) throw Error("Shape", "operator must be 2(dim+1) square");
    }

    static GenContactOp from_blocks(const GaugeEndo& phi, const Mat& jsharp, const Mat& omflat) {
        const Chart& c = phi.chart;
        int n = c.dim() + 1;
        Mat m(c, 2 * n, 2 * n);
        Mat phit = phi.m.transposed();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                m(i, j) = phi.m(i, j);
                m(i, n + j) = jsharp(i, j);
                m(n + i, j) = omflat(i, j);
                m(n + i, n + j) = -phit(i, j);
            }
        return GenContactOp(c, std::move(m));
    }

    // Contact type: (0, J#; −(J^{-1})_flat, 0) — the bottom-left sign follows
    // the displayed canonical operator.
    static GenContactOp contact(const JacobiPair& j) {
        Mat js = jacobi_sharp_matrix(j.lam, j.e);
        Mat flat;
        try {
            flat = linalg::invert(js);
        } catch (const SingularMatrix&) {
            throw Degenerate("Jacobi structure is not invertible");
        }
        return from_blocks(GaugeEndo(j.chart()), js, -flat);
    }

    // Complex type: (phi, 0; 0, −phi†).
    static GenContactOp complex_type(const GaugeEndo& phi) {
        int n = phi.chart.dim() + 1;
        return from_blocks(phi, Mat(phi.chart, n, n), Mat(phi.chart, n, n));
    }

    OmniSection apply(const OmniSection& s) const {
        auto v = s.components();
        return OmniSection::from_components(chart, k.apply(v));
    }

    GenContactOp bfield_conjugated(const AtiyahForm& B, bool allow_non_closed = false) const {
        if (!allow_non_closed && !atiyah_d(B).is_zero()) throw NotClosed("B-field form is not d_D-closed");
        int n = chart.dim() + 1;
        Mat bm = atiyah_flat_matrix(B);
        Mat e = Mat::identity(chart, 2 * n), einv = e;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                e(n + i, j) = bm(i, j);
                einv(n + i, j) = -bm(i, j);
            }
        return GenContactOp(chart, e * k * einv);
    }
};

// +i-eigenbundle frame: the image of (id − iK) on the standard frame,
// reduced to dim+1 generically independent generators.
inline Frame eigenframe(const GenContactOp& kop) {
    const Chart& c = kop.chart;
    int n = c.dim() + 1;
    Mat sq = kop.k * kop.k + Mat::identity(c, 2 * n);
    if (!sq.is_zero()) throw NotAlmostComplex("operator does not square to -id");
    Scalar iu = Scalar::iunit(c);
    std::vector<OmniSection> gens;
    for (int b = 0; b < 2 * n; ++b) {
        std::vector<Scalar> v(static_cast<size_t>(2 * n), Scalar(c));
        v[static_cast<size_t>(b)] = Scalar(c, 1);
        auto kv = kop.k.apply(v);
        for (int i = 0; i < 2 * n; ++i)
            v[static_cast<size_t>(i)] = v[static_cast<size_t>(i)] - iu * kv[static_cast<size_t>(i)];
        gens.push_back(OmniSection::from_components(c, v));
    }
    Frame out = Frame(c, std::move(gens)).reduced();
    if (out.size() != n)
        throw Error("EigenframeRank", "eigenbundle rank is not dim+1");
    return out;
}

inline Report check_gen_contact(const GenContactOp& kop) {
    Report rep;
    rep.title = "gen-contact";
    const Chart& c = kop.chart;
    int n = c.dim() + 1;
    Mat sq = kop.k * kop.k + Mat::identity(c, 2 * n);
    bool ac = sq.is_zero();
    rep.require("K^2 = -id", ac);
    // skewness wrt <<.,.>>: G K + (G K)^T = 0 with G the split pairing Gram matrix
    Mat g(c, 2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        g(i, n + i) = Scalar(c, 1);
        g(n + i, i) = Scalar(c, 1);
    }
    Mat gk = g * kop.k;
    Mat skew = gk + gk.transposed();
    rep.require("<<K a, b>> + <<a, K b>> = 0", skew.is_zero());
    if (ac) {
        Report inv = check_involutive(eigenframe(kop));
        rep.require("+i eigenbundle involutive (integrability)", inv.pass(),
                    inv.witnesses().empty() ? "" : inv.witnesses().front());
    } else {
        rep.require("+i eigenbundle involutive (integrability)", false, "skipped: K^2 != -id");
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Homogeneous generalized complex structures (tangent level)
// ---------------------------------------------------------------------------

struct HomGC {
    Endo11 a;
    Multivec pi; // bivector
    Form sigma;  // 2-form
    Vec z;
    Form zeta; // 1-form

    HomGC() = default;
    HomGC(Endo11 aa, Multivec p, Form s, Vec zz, Form zt)
        : a(std::move(aa)), pi(std::move(p)), sigma(std::move(s)), z(std::move(zz)), zeta(std::move(zt)) {
        require_same_chart(a.chart, pi.chart());
        require_same_chart(a.chart, sigma.chart());
        require_same_chart(a.chart, z.chart);
        require_same_chart(a.chart, zeta.chart());
        if (pi.degree() != 2 || sigma.degree() != 2 || zeta.degree() != 1)
            throw DegreeMismatch("hom-gc data has wrong degrees");
    }
    const Chart& chart() const { return a.chart; }
};

// J = (A, pi#; sigma_flat, −A*) with pi# eta = pi(eta,−) and
// sigma_flat X = −i_X sigma; these slots make the canonical symplectic pair
// (pi_can, Omega_can) an honest almost complex structure.
inline Mat homgc_matrix(const HomGC& h) {
    const Chart& c = h.chart();
    int m = c.dim();
    Mat out(c, 2 * m, 2 * m);
    Mat sh = sharp_matrix(h.pi);
    Mat fl = -flat_matrix(h.sigma);
    Mat at = h.a.m.transposed();
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            out(i, j) = h.a.m(i, j);
            out(i, m + j) = sh(i, j);
            out(m + i, j) = fl(i, j);
            out(m + i, m + j) = -at(i, j);
        }
    return out;
}

// Generators of the +i-eigenbundle of a tangent-level J as (Vec, Form) pairs.
inline std::vector<std::pair<Vec, Form>> tangent_eigenframe(const Mat& jmat, const Chart& c) {
    int m = c.dim();
    Mat sq = jmat * jmat + Mat::identity(c, 2 * m);
    if (!sq.is_zero()) throw NotAlmostComplex("J does not square to -id");
    Scalar iu = Scalar::iunit(c);
    Mat gens(c, 2 * m, 2 * m);
    for (int b = 0; b < 2 * m; ++b) {
        std::vector<Scalar> v(static_cast<size_t>(2 * m), Scalar(c));
        v[static_cast<size_t>(b)] = Scalar(c, 1);
        auto jv = jmat.apply(v);
        for (int i = 0; i < 2 * m; ++i)
            gens(i, b) = v[static_cast<size_t>(i)] - iu * jv[static_cast<size_t>(i)];
    }
    auto ech = linalg::rref(gens);
    std::vector<std::pair<Vec, Form>> out;
    for (int col : ech.pivots) {
        Vec x(c);
        Form eta(c, 1);
        for (int i = 0; i < m; ++i) {
            x.comps[static_cast<size_t>(i)] = gens(i, col);
            eta.alt.add({i}, gens(m + i, col));
        }
        out.emplace_back(std::move(x), std::move(eta));
    }
    if (static_cast<int>(out.size()) != m) throw Error("EigenframeRank", "tangent eigenbundle rank is not dim");
    return out;
}

inline Report check_hom_gc(const HomGC& h) {
    const Chart& c = h.chart();
    int m = c.dim();
    Mat jm = homgc_matrix(h);
    Mat sq = jm * jm + Mat::identity(c, 2 * m);
    if (!sq.is_zero()) throw NotGeneralizedComplex("assembled J does not square to -id");
    {
        Mat g(c, 2 * m, 2 * m);
        for (int i = 0; i < m; ++i) {
            g(i, m + i) = Scalar(c, 1);
            g(m + i, i) = Scalar(c, 1);
        }
        Mat gk = g * jm;
        if (!(gk + gk.transposed()).is_zero())
            throw NotGeneralizedComplex("assembled J is not skew for the tangent pairing");
    }
    Report rep;
    rep.title = "hom-gc";
    Form dz = d(h.zeta);
    // (1) L_Z A = pi# ∘ (d zeta)_flat, with (d zeta)_flat X = i_X d zeta
    Mat lhs1 = lie(h.z, h.a).m;
    Mat rhs1 = sharp_matrix(h.pi) * flat_matrix(dz);
    rep.require("L_Z A = pi# (d zeta)_flat", (lhs1 - rhs1).is_zero());
    // (2) L_Z pi = -pi
    Multivec d2 = lie(h.z, h.pi) + h.pi;
    rep.require("L_Z pi = -pi", d2.is_zero(), to_string(d2));
    // (3) L_Z sigma = sigma - iota_A d zeta
    Form iadz(c, 2);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            Vec ei = Vec::basis(c, i), ej = Vec::basis(c, j);
            iadz.alt.add({i, j}, dz.on({h.a.apply(ei), ej}) + dz.on({ei, h.a.apply(ej)}));
        }
    Form d3 = lie(h.z, h.sigma) - h.sigma + iadz;
    rep.require("L_Z sigma = sigma - iota_A d zeta", d3.is_zero(), to_string(d3));
    // cross-check: condition (3) of the eigenbundle characterization,
    // ([Z,X] + X, L_Z eta + i_X d zeta) stays in the eigenbundle
    auto eig = tangent_eigenframe(jm, c);
    Mat span(c, 2 * m, static_cast<int>(eig.size()));
    for (size_t k = 0; k < eig.size(); ++k)
        for (int i = 0; i < m; ++i) {
            span(i, static_cast<int>(k)) = eig[k].first.comps[static_cast<size_t>(i)];
            span(m + i, static_cast<int>(k)) = eig[k].second.alt.coeff({i});
        }
    bool member = true;
    for (const auto& [x, eta] : eig) {
        Vec vx = lie_bracket(h.z, x) + x;
        Form veta = lie(h.z, eta) + interior(x, dz);
        std::vector<Scalar> rhs;
        for (int i = 0; i < m; ++i) rhs.push_back(vx.comps[static_cast<size_t>(i)]);
        for (int i = 0; i < m; ++i) rhs.push_back(veta.alt.coeff({i}));
        try {
            linalg::solve(span, rhs);
        } catch (const InconsistentSystem&) {
            member = false;
            break;
        }
    }
    rep.require("eigenbundle homogeneity (characterization cross-check)", member);
    return rep;
}

// The induced complex Dirac-Jacobi frame: (1−Z, zeta + zeta(Z)·j) together
// with (X, eta + (eta(Z) − zeta(X))·j) over the +i-eigenbundle of J.
inline Frame build_L_JZ(const HomGC& h) {
    Report chk = check_hom_gc(h);
    if (!chk.pass()) throw PreconditionFailed("hom-gc checker fails: " + chk.witnesses().front());
    const Chart& c = h.chart();
    std::vector<OmniSection> gens;
    Scalar zz = pair_form_vec(h.zeta, h.z);
    gens.emplace_back(Derivation(-h.z, Scalar(c, 1)), Jet(h.zeta, zz));
    for (const auto& [x, eta] : tangent_eigenframe(homgc_matrix(h), c)) {
        Scalar coeff = pair_form_vec(eta, h.z) - pair_form_vec(h.zeta, x);
        gens.emplace_back(Derivation(x, Scalar(c)), Jet(eta, coeff));
    }
    Frame out(c, std::move(gens));
    if (out.rank() != c.dim() + 1) throw Error("FrameRank", "L_(J,Z) rank is not dim+1");
    return out;
}

// The real Dirac-Jacobi frame of a homogeneous Poisson structure,
// <(1−Z, 0), (pi# eta, eta + eta(Z)·j)> (transversal model of contact leaves).
inline Frame dazord_frame(const HomPoisson& h) {
    const Chart& c = h.chart();
    std::vector<OmniSection> gens;
    gens.emplace_back(Derivation(-h.z, Scalar(c, 1)), Jet(c));
    for (int i = 0; i < c.dim(); ++i) {
        Form eta = Form::dcoord(c, c.name(i));
        gens.emplace_back(Derivation(sharp(h.pi, eta), Scalar(c)),
                          Jet(eta, pair_form_vec(eta, h.z)));
    }
    return Frame(c, std::move(gens));
}

// ---------------------------------------------------------------------------
// Classification of complex Dirac-Jacobi frames
// ---------------------------------------------------------------------------

enum class DJClass { GeneralizedContact, HomGCType, Neither };

struct ClassifyResult {
    DJClass kind = DJClass::Neither;
    std::optional<OmniSection> real_section; // for HomGCType
};

inline const char* to_string(DJClass k) {
    switch (k) {
        case DJClass::GeneralizedContact: return "generalized_contact";
        case DJClass::HomGCType: return "hom_gc";
        default: return "neither";
    }
}

inline ClassifyResult classify_dj(const Frame& f) {
    if (!check_isotropic(f).pass() || !check_involutive(f).pass())
        throw PreconditionFailed("classify_dj needs a maximal isotropic involutive frame");
    Frame fb = f.conj();
    auto inter = frame_intersection(f, fb);
    ClassifyResult out;
    if (inter.empty()) {
        out.kind = DJClass::GeneralizedContact;
        return out;
    }
    if (inter.size() == 1) {
        // p_D L + p_D Lbar full?
        const Chart& c = f.chart();
        int n = c.dim();
        Mat pd(c, n + 1, 2 * f.size());
        Mat d1 = f.derivation_matrix(), d2 = fb.derivation_matrix();
        for (int r = 0; r <= n; ++r)
            for (int j = 0; j < f.size(); ++j) {
                pd(r, j) = d1(r, j);
                pd(r, f.size() + j) = d2(r, j);
            }
        if (linalg::rank(pd) == n + 1) {
            // produce a real polynomial section spanning the intersection:
            // clear denominators, strip the common factor, then symmetrize
            auto normalize = [&c](OmniSection a) {
                Poly denprod = Poly::constant(c, CRat::one());
                for (const auto& s : a.components())
                    if (!s.den().is_one()) denprod = denprod * s.den();
                if (!denprod.is_one()) a = a.scaled(Scalar(denprod));
                Poly g(c);
                for (const auto& s : a.components()) g = detail::gcd(g, s.num());
                if (!g.is_one() && !g.is_zero()) a = a.scaled(Scalar(c, 1) / Scalar(g));
                for (const auto& s : a.components())
                    if (!s.is_zero()) {
                        a = a.scaled(Scalar(c, inverse(s.num().leading_coefficient())));
                        break;
                    }
                return a;
            };
            OmniSection alpha = normalize(inter.front());
            OmniSection real = alpha + alpha.conj();
            if (real.is_zero()) real = (alpha - alpha.conj()).scaled(Scalar::iunit(c));
            real = normalize(real);
            // the unit component of the section must not vanish at the
            // declared points (and the section itself must stay nonzero there)
            bool nonvanishing = true;
            for (const auto& pt : f.samples()) {
                if (real.d.f.evaluate(pt).is_zero()) {
                    nonvanishing = false;
                    break;
                }
            }
            if (nonvanishing) {
                out.kind = DJClass::HomGCType;
                out.real_section = real;
                return out;
            }
        }
    }
    out.kind = DJClass::Neither;
    return out;
}

// ---------------------------------------------------------------------------
// (Normal) almost contact structures
// ---------------------------------------------------------------------------

// Triple (Phi, xi, eta) with an optional gauge component g (the quadruple of
// the local-form lemma).
struct AlmostContact {
    Endo11 phi;
    Vec xi;
    Form eta;
    Scalar g;

    AlmostContact() = default;
    AlmostContact(Endo11 p, Vec x, Form e, Scalar gg)
        : phi(std::move(p)), xi(std::move(x)), eta(std::move(e)), g(std::move(gg)) {
        require_same_chart(phi.chart, xi.chart);
        require_same_chart(phi.chart, eta.chart());
        require_same_chart(phi.chart, g.chart());
        if (eta.degree() != 1) throw DegreeMismatch("almost contact eta must be a 1-form");
    }
    AlmostContact(Endo11 p, Vec x, Form e)
        : AlmostContact(std::move(p), std::move(x), std::move(e), Scalar(p.chart)) {}

    const Chart& chart() const { return xi.chart; }
};

// phi(X, r) = (Phi X − r xi, eta(X) + g r) on D R_M.
inline GaugeEndo nacs_to_phi(const AlmostContact& t) {
    const Chart& c = t.chart();
    int n = c.dim();
    GaugeEndo out(c);
    for (int j = 0; j < n; ++j) {
        Vec col = t.phi.apply(Vec::basis(c, j));
        for (int i = 0; i < n; ++i) out.m(i, j) = col.comps[static_cast<size_t>(i)];
        out.m(n, j) = t.eta.alt.coeff({j});
    }
    for (int i = 0; i < n; ++i) out.m(i, n) = -t.xi.comps[static_cast<size_t>(i)];
    out.m(n, n) = t.g;
    return out;
}

inline Report check_nacs(const AlmostContact& t) {
    Report rep;
    rep.title = "nacs";
    const Chart& c = t.chart();
    if (!t.g.is_zero()) {
        // quadruple: verify at the gauge level
        Report sub = check_dl_complex(nacs_to_phi(t));
        rep.require("gauge phi almost complex + torsion-free (quadruple)", sub.pass(),
                    sub.witnesses().empty() ? "" : sub.witnesses().front());
        return rep;
    }
    Endo11 defect = t.phi * t.phi + Endo11::identity(c) - Endo11::tensor(t.eta, t.xi);
    rep.require("Phi^2 = -id + eta (x) xi", defect.m.is_zero());
    rep.require("Phi xi = 0", t.phi.apply(t.xi).is_zero());
    rep.require("eta o Phi = 0", t.phi.coapply(t.eta).is_zero());
    Scalar ex = pair_form_vec(t.eta, t.xi);
    rep.require("eta(xi) = 1", ex == Scalar(c, 1), to_string(ex));
    Form deta = d(t.eta);
    auto torsion = nijenhuis11(t.phi);
    bool normal = true;
    std::string witness;
    for (int i = 0; i < c.dim() && normal; ++i)
        for (int j = i + 1; j < c.dim() && normal; ++j) {
            Vec ei = Vec::basis(c, i), ej = Vec::basis(c, j);
            Vec v = torsion(ei, ej) + t.xi.scaled(deta.on({ei, ej}));
            if (!v.is_zero()) {
                normal = false;
                witness = "N_Phi + d eta (x) xi at (" + c.name(i) + "," + c.name(j) + ")";
            }
        }
    rep.require("N_Phi + d eta (x) xi = 0 (normality)", normal, witness);
    // the remaining normality equations (consequences, still verified)
    bool compat = true;
    for (int i = 0; i < c.dim() && compat; ++i)
        for (int j = i + 1; j < c.dim() && compat; ++j) {
            Vec ei = Vec::basis(c, i), ej = Vec::basis(c, j);
            if (!(deta.on({t.phi.apply(ei), ej}) + deta.on({ei, t.phi.apply(ej)})).is_zero()) compat = false;
        }
    rep.require("d eta(Phi -,-) + d eta(-, Phi -) = 0", compat);
    rep.require("L_xi Phi = 0", lie(t.xi, t.phi).m.is_zero());
    rep.require("L_xi eta = 0", lie(t.xi, t.eta).is_zero());
    return rep;
}

// Gauge transform by the automorphism r ↦ e^{-f} r:
// (Phi + df⊗xi, xi, eta + df∘Phi + (xi(f) − g) df, g − xi(f)).
inline AlmostContact nacs_gauge_transform(const AlmostContact& t, const Scalar& f) {
    Form df = jet_prolong(f).eta;
    Scalar xif = t.xi.apply(f);
    return AlmostContact(t.phi + Endo11::tensor(df, t.xi), t.xi,
                         t.eta + t.phi.coapply(df) + df.scaled(xif - t.g), t.g - xif);
}

// Normal-form structure of the local coordinates corollary:
// xi = ∂u, eta = du + f_y dx − f_x dy, Phi = dx⊗∂y − dy⊗∂x + df⊗∂u
// on a chart (u, x^i, y^i).
inline AlmostContact nacs_normal_form(const Chart& c, const Scalar& f) {
    int n = (c.dim() - 1) / 2;
    if (c.dim() != 2 * n + 1) throw Error("Shape", "normal form needs an odd-dimensional chart (u, x, y)");
    Vec xi = Vec::basis(c, 0);
    Form eta = Form::dcoord(c, c.name(0));
    Endo11 phi(c);
    Form df = jet_prolong(f).eta;
    for (int i = 0; i < n; ++i) {
        Form dx = Form::dcoord(c, c.name(1 + i)), dy = Form::dcoord(c, c.name(1 + n + i));
        Vec bx = Vec::basis(c, 1 + i), by = Vec::basis(c, 1 + n + i);
        phi = phi + Endo11::tensor(dx, by) - Endo11::tensor(dy, bx);
        eta = eta + dx.scaled(f.derivative(1 + n + i)) - dy.scaled(f.derivative(1 + i));
    }
    phi = phi + Endo11::tensor(df, xi);
    return AlmostContact(std::move(phi), std::move(xi), std::move(eta));
}

// ---------------------------------------------------------------------------
// Splitting products and non-degenerate correspondences
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::string> model_names_odd(int d) {
    std::vector<std::string> names;
    if (d == 1) return {"x", "p", "u"};
    for (int i = 1; i <= d; ++i) names.push_back("x" + std::to_string(i));
    for (int i = 1; i <= d; ++i) names.push_back("p" + std::to_string(i));
    names.push_back("u");
    return names;
}

inline std::vector<std::string> model_names_even(int d) {
    std::vector<std::string> names;
    if (d == 1) return {"x", "p"};
    for (int i = 1; i <= d; ++i) names.push_back("x" + std::to_string(i));
    for (int i = 1; i <= d; ++i) names.push_back("p" + std::to_string(i));
    return names;
}

} // namespace detail

// Canonical Jacobi pair on a (2d+1)－chart (x.., p.., u).
inline JacobiPair canonical_jacobi(const Chart& c) {
    int d = (c.dim() - 1) / 2;
    if (c.dim() != 2 * d + 1 || d < 1) throw Error("Shape", "J_can needs a (2d+1)-dimensional chart");
    Multivec lam(c, 2);
    Vec e = Vec::basis(c, 2 * d);
    for (int i = 0; i < d; ++i) {
        Scalar pi = Scalar::coordinate(c, c.name(d + i));
        Multivec dpart = Multivec(Vec::basis(c, d + i));
        Multivec rest = Multivec(Vec::basis(c, i) + Vec::basis(c, 2 * d).scaled(pi));
        lam = lam + wedge(dpart, rest);
    }
    return JacobiPair(std::move(lam), std::move(e));
}

// Canonical homogeneous Poisson pair on a 2d-chart (x.., p..).
inline HomPoisson canonical_hom_poisson(const Chart& c) {
    int d = c.dim() / 2;
    if (c.dim() != 2 * d || d < 1) throw Error("Shape", "pi_can needs a 2d-dimensional chart");
    Multivec pi(c, 2);
    Vec z(c);
    for (int i = 0; i < d; ++i) {
        pi = pi + wedge(Multivec(Vec::basis(c, d + i)), Multivec(Vec::basis(c, i)));
        z = z + Vec::basis(c, d + i).scaled(Scalar::coordinate(c, c.name(d + i)));
    }
    return HomPoisson(std::move(pi), std::move(z));
}

inline Form canonical_theta(const Chart& c) {
    int d = (c.dim() - 1) / 2;
    Form theta = Form::dcoord(c, c.name(2 * d));
    for (int i = 0; i < d; ++i)
        theta = theta - Form::dcoord(c, c.name(i)).scaled(Scalar::coordinate(c, c.name(d + i)));
    return theta;
}

inline AtiyahForm canonical_omega(const Chart& c) {
    return atiyah_d(AtiyahForm::embed(canonical_theta(c)));
}

inline Form canonical_Theta(const Chart& c) { // Liouville 1-form p dx on a 2d-chart
    int d = c.dim() / 2;
    Form th(c, 1);
    for (int i = 0; i < d; ++i)
        th = th + Form::dcoord(c, c.name(i)).scaled(Scalar::coordinate(c, c.name(d + i)));
    return th;
}

inline Form canonical_Omega(const Chart& c) { return -d(canonical_Theta(c)); }

inline AtiyahForm canonical_xi(const Chart& c) { return -atiyah_d(AtiyahForm::embed(canonical_Theta(c))); }

// phi_can on (u, x.., y..): phi(1) = ∂u, phi(∂x_i) = ∂y_i.
inline GaugeEndo canonical_phi(const Chart& c) {
    int n = (c.dim() - 1) / 2;
    if (c.dim() != 2 * n + 1) throw Error("Shape", "phi_can needs a (2n+1)-dimensional chart (u,x,y)");
    GaugeEndo phi(c);
    int udx = 0;
    // columns: images of (∂u, ∂x_i, ∂y_i, 1)
    phi.m(c.dim(), udx) = Scalar(c, -1); // phi ∂u = -1 (from phi^2 = -id)
    for (int i = 0; i < n; ++i) {
        phi.m(1 + n + i, 1 + i) = Scalar(c, 1);  // phi ∂x = ∂y
        phi.m(1 + i, 1 + n + i) = Scalar(c, -1); // phi ∂y = -∂x
    }
    phi.m(udx, c.dim()) = Scalar(c, 1); // phi 1 = ∂u
    return phi;
}

// A_can on (x.., y..).
inline Endo11 canonical_A(const Chart& c) {
    int n = c.dim() / 2;
    if (c.dim() != 2 * n) throw Error("Shape", "A_can needs a 2n-dimensional chart (x,y)");
    Endo11 a(c);
    for (int i = 0; i < n; ++i) {
        a.m(n + i, i) = Scalar(c, 1);
        a.m(i, n + i) = Scalar(c, -1);
    }
    return a;
}

// L_{C^n} = <(1,0)> ⊕ T^{1,0} ⊕ (T^{0,1})* on a 2n-chart (x.., y..).
inline Frame canonical_L_Cn(const Chart& c) {
    int n = c.dim() / 2;
    if (c.dim() != 2 * n) throw Error("Shape", "L_Cn needs a 2n-dimensional chart (x,y)");
    Scalar iu = Scalar::iunit(c);
    std::vector<OmniSection> gens;
    gens.emplace_back(Derivation::unit(c), Jet(c));
    for (int i = 0; i < n; ++i) {
        Vec zi = Vec::basis(c, i) - Vec::basis(c, n + i).scaled(iu);
        gens.emplace_back(Derivation::vector(zi), Jet(c));
        Form zbar = Form::dcoord(c, c.name(i)) - Form::dcoord(c, c.name(n + i)).scaled(iu);
        gens.emplace_back(Derivation(c), Jet::form(zbar));
    }
    return Frame(c, std::move(gens));
}

// L_{R x C^n} = D^{1,0} ⊕ Ann(D^{1,0}) on a (2n+1)-chart (u, x.., y..).
inline Frame canonical_L_RxCn(const Chart& c) {
    int n = (c.dim() - 1) / 2;
    if (c.dim() != 2 * n + 1) throw Error("Shape", "L_RxCn needs a (2n+1)-dimensional chart (u,x,y)");
    Scalar iu = Scalar::iunit(c);
    std::vector<OmniSection> gens;
    // box = 1 − i ∂u (scaled representative), nabla_i = ∂x_i − i ∂y_i
    gens.emplace_back(Derivation(-Vec::basis(c, 0).scaled(iu), Scalar(c, 1)), Jet(c));
    for (int i = 0; i < n; ++i) {
        Vec zi = Vec::basis(c, 1 + i) - Vec::basis(c, 1 + n + i).scaled(iu);
        gens.emplace_back(Derivation::vector(zi), Jet(c));
        Form zbar = Form::dcoord(c, c.name(1 + i)) - Form::dcoord(c, c.name(1 + n + i)).scaled(iu);
        gens.emplace_back(Derivation(c), Jet::form(zbar));
    }
    // kbar = j − i du
    gens.emplace_back(Derivation(c), Jet(-Form::dcoord(c, c.name(0)).scaled(iu), Scalar(c, 1)));
    return Frame(c, std::move(gens));
}

// L_can^odd: the complex graph of J_can.
inline Frame canonical_L_odd(const Chart& c) {
    JacobiPair j = canonical_jacobi(c);
    return graph_jacobi_complex(j.lam, j.e);
}

// L_can^ev: the hom-gc frame of the canonical homogeneous symplectic pair.
inline Frame canonical_L_ev(const Chart& c) {
    HomPoisson h = canonical_hom_poisson(c);
    HomGC gc(Endo11(c), h.pi, canonical_Omega(c), h.z, Form(c, 1));
    return build_L_JZ(gc);
}

// (Lam_can + pi_N − E_can ∧ Z_N, E_can) on N x R^{2d+1}.
inline JacobiPair split_contact(const HomPoisson& hn, int d) {
    Chart v(detail::model_names_odd(d));
    Chart prod = Chart::product(hn.chart(), v);
    JacobiPair jc = canonical_jacobi(v);
    Multivec lam = jc.lam.alt.transported(prod).is_zero() ? Multivec(prod, 2)
                                                          : Multivec(jc.lam.alt.transported(prod));
    Multivec pin(prod, 2);
    if (!hn.pi.is_zero()) pin = Multivec(hn.pi.alt.transported(prod));
    Vec ecan(prod);
    for (int i = 0; i < v.dim(); ++i)
        ecan.comps[static_cast<size_t>(prod.index_of(v.name(i)))] =
            jc.e.comps[static_cast<size_t>(i)].transported(prod);
    Vec zn(prod);
    for (int i = 0; i < hn.chart().dim(); ++i)
        zn.comps[static_cast<size_t>(prod.index_of(hn.chart().name(i)))] =
            hn.z.comps[static_cast<size_t>(i)].transported(prod);
    Multivec cross = wedge(Multivec(ecan), Multivec(zn));
    return JacobiPair(lam + pin - cross, ecan);
}

// (Lam_N + pi_can − E_N ∧ Z_can, E_N) on N x R^{2d}.
inline JacobiPair split_lcs(const JacobiPair& jn, int d) {
    Chart v(detail::model_names_even(d));
    Chart prod = Chart::product(jn.chart(), v);
    HomPoisson hp = canonical_hom_poisson(v);
    Multivec lamn(prod, 2);
    if (!jn.lam.is_zero()) lamn = Multivec(jn.lam.alt.transported(prod));
    Multivec pic(prod, 2);
    if (!hp.pi.is_zero()) pic = Multivec(hp.pi.alt.transported(prod));
    Vec en(prod);
    for (int i = 0; i < jn.chart().dim(); ++i)
        en.comps[static_cast<size_t>(prod.index_of(jn.chart().name(i)))] =
            jn.e.comps[static_cast<size_t>(i)].transported(prod);
    Vec zc(prod);
    for (int i = 0; i < v.dim(); ++i)
        zc.comps[static_cast<size_t>(prod.index_of(v.name(i)))] =
            hp.z.comps[static_cast<size_t>(i)].transported(prod);
    Multivec cross = wedge(Multivec(en), Multivec(zc));
    return JacobiPair(lamn + pic - cross, en);
}

// Jacobi pair of an lcs structure (Omega, gamma): Lam = Omega^{-1} and
// E = −Lam# gamma, so the bracket matches Omega^{-1}(d^∇ λ, d^∇ µ).
inline JacobiPair lcs_to_jacobi(const Form& omega, const Form& gamma) {
    if (omega.degree() != 2 || gamma.degree() != 1)
        throw DegreeMismatch("lcs data must be a 2-form and a 1-form");
    require_same_chart(omega.chart(), gamma.chart());
    if (!d(gamma).is_zero()) throw NotFlat("connection form is not closed");
    Mat fl = flat_matrix(omega);
    Mat sh;
    try {
        sh = linalg::invert(fl);
    } catch (const SingularMatrix&) {
        throw Degenerate("lcs 2-form is degenerate");
    }
    Multivec lam = bivector_from_sharp(omega.chart(), sh);
    Vec e = -sharp(lam, gamma);
    JacobiPair out(std::move(lam), std::move(e));
    if (linalg::rank(jacobi_sharp_matrix(out.lam, out.e)) != omega.chart().dim())
        throw Error("RankCheck", "lcs Jacobi structure should have rank dim M");
    return out;
}

struct JacobiInverse {
    AtiyahForm omega;
    Form theta;
};

// omega with flat map (J#)^{-1}; theta from iota_1 omega; d_D omega = 0 is
// verified (it fails exactly when the input pair is not Jacobi).
inline JacobiInverse invert_jacobi(const JacobiPair& j) {
    Mat sh = jacobi_sharp_matrix(j.lam, j.e);
    Mat inv;
    try {
        inv = linalg::invert(sh);
    } catch (const SingularMatrix&) {
        throw Degenerate("Jacobi structure is not invertible");
    }
    AtiyahForm omega = atiyah_from_flat_matrix(j.chart(), inv);
    if (!atiyah_d(omega).is_zero())
        throw NotClosed("inverse 2-form is not d_D-closed (input is not a Jacobi pair)");
    Jet th = atiyah_interior(Derivation::unit(j.chart()), omega).as_jet();
    return {std::move(omega), th.eta};
}

} // namespace djc
