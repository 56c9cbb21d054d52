#pragma once

#include <optional>

#include "djc/atiyah.hpp"
#include "djc/report.hpp"

namespace djc {

// Section of the omni-Lie algebroid DR_M ⊕ J¹R_M (complex coefficients allowed).
struct OmniSection {
    Derivation d;
    Jet j;

    OmniSection() = default;
    explicit OmniSection(const Chart& c) : d(c), j(c) {}
    OmniSection(Derivation dd, Jet jj) : d(std::move(dd)), j(std::move(jj)) {
        require_same_chart(d.chart(), j.chart());
    }

    const Chart& chart() const { return d.chart(); }
    bool is_zero() const { return d.is_zero() && j.is_zero(); }

    OmniSection operator-() const { return OmniSection(-d, -j); }
    friend OmniSection operator+(const OmniSection& a, const OmniSection& b) {
        return OmniSection(a.d + b.d, a.j + b.j);
    }
    friend OmniSection operator-(const OmniSection& a, const OmniSection& b) {
        return OmniSection(a.d - b.d, a.j - b.j);
    }
    OmniSection scaled(const Scalar& s) const { return OmniSection(d.scaled(s), j.scaled(s)); }
    friend bool operator==(const OmniSection& a, const OmniSection& b) { return a.d == b.d && a.j == b.j; }
    OmniSection conj() const { return OmniSection(d.conj(), j.conj()); }

    // Component vector [X.., f, eta.., g] of length 2(dim+1).
    std::vector<Scalar> components() const {
        std::vector<Scalar> v;
        int n = chart().dim();
        v.reserve(static_cast<size_t>(2 * n + 2));
        for (int i = 0; i < n; ++i) v.push_back(d.X.comps[static_cast<size_t>(i)]);
        v.push_back(d.f);
        for (int i = 0; i < n; ++i) v.push_back(j.eta.alt.coeff({i}));
        v.push_back(j.g);
        return v;
    }

    static OmniSection from_components(const Chart& c, const std::vector<Scalar>& v) {
        int n = c.dim();
        OmniSection s(c);
        for (int i = 0; i < n; ++i) s.d.X.comps[static_cast<size_t>(i)] = v[static_cast<size_t>(i)];
        s.d.f = v[static_cast<size_t>(n)];
        Form eta(c, 1);
        for (int i = 0; i < n; ++i) eta.alt.add({i}, v[static_cast<size_t>(n + 1 + i)]);
        s.j = Jet(eta, v[static_cast<size_t>(2 * n + 1)]);
        return s;
    }
};

inline std::string to_string(const OmniSection& s) {
    return "omni(" + to_string(s.d) + "; " + to_string(s.j) + ")";
}

// <<(D,psi),(E,chi)>> = <chi,D> + <psi,E>.
inline Scalar omni_pair(const OmniSection& a, const OmniSection& b) {
    require_same_chart(a.chart(), b.chart());
    return jet_pair(b.j, a.d) + jet_pair(a.j, b.d);
}

// [[(D,psi),(E,chi)]] = ([D,E], L_D chi − i_E d_D psi), jets read as Atiyah
// 1-forms.
inline OmniSection dorfman(const OmniSection& a, const OmniSection& b) {
    require_same_chart(a.chart(), b.chart());
    AtiyahForm chi = AtiyahForm::from_jet(b.j);
    AtiyahForm psi = AtiyahForm::from_jet(a.j);
    AtiyahForm jet_part = atiyah_lie(a.d, chi) - atiyah_interior(b.d, atiyah_d(psi));
    return OmniSection(deriv_bracket(a.d, b.d), jet_part.as_jet());
}

// e^B (D, psi) = (D, psi + i_D B); requires d_D B = 0 unless overridden.
inline OmniSection bfield(const AtiyahForm& B, const OmniSection& a, bool allow_non_closed = false) {
    require_same_chart(B.chart(), a.chart());
    if (B.degree() != 2) throw DegreeMismatch("B-field must be an Atiyah 2-form");
    if (!allow_non_closed && !atiyah_d(B).is_zero())
        throw NotClosed("B-field form is not d_D-closed");
    return OmniSection(a.d, a.j + atiyah_interior(a.d, B).as_jet());
}

namespace detail {

inline std::vector<SamplePoint> default_sample_points(const Chart& c) {
    std::vector<SamplePoint> pts;
    pts.push_back(SamplePoint::origin(c));
    // three pseudo-random rational points from a fixed seed
    unsigned long long state = 0x9e3779b97f4a7c15ull;
    auto next = [&state]() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    };
    for (int k = 0; k < 3; ++k) {
        std::vector<Rat> vals;
        for (int i = 0; i < c.dim(); ++i) {
            long num = static_cast<long>(next() % 7) - 3;
            long den = static_cast<long>(next() % 3) + 1;
            vals.push_back(make_rat(num, den));
        }
        pts.emplace_back(c, std::move(vals));
    }
    return pts;
}

} // namespace detail

// Generator list for a candidate (complex) Dirac-Jacobi subbundle, together
// with the sample points used to witness smoothness of constructions.
class Frame {
public:
    Frame() = default;
    explicit Frame(const Chart& c, std::vector<OmniSection> gens = {},
                   std::vector<SamplePoint> samples = {})
        : chart_(c), gens_(std::move(gens)), samples_(std::move(samples)) {
        for (const auto& g : gens_) require_same_chart(g.chart(), chart_);
        if (samples_.empty()) samples_ = detail::default_sample_points(chart_);
    }

    const Chart& chart() const { return chart_; }
    const std::vector<OmniSection>& generators() const { return gens_; }
    const std::vector<SamplePoint>& samples() const { return samples_; }
    int size() const { return static_cast<int>(gens_.size()); }

    void add(OmniSection g) {
        require_same_chart(g.chart(), chart_);
        gens_.push_back(std::move(g));
    }

    void declare_sample(SamplePoint pt) {
        require_same_chart(pt.chart, chart_);
        samples_.push_back(std::move(pt));
    }

    // Generators as matrix columns (2(dim+1) x size).
    Mat matrix() const {
        int n = chart_.dim();
        Mat m(chart_, 2 * (n + 1), size());
        for (int c = 0; c < size(); ++c) {
            auto v = gens_[static_cast<size_t>(c)].components();
            for (int r = 0; r < 2 * (n + 1); ++r) m(r, c) = v[static_cast<size_t>(r)];
        }
        return m;
    }

    // Derivation components only ((dim+1) x size).
    Mat derivation_matrix() const {
        int n = chart_.dim();
        Mat m(chart_, n + 1, size());
        for (int c = 0; c < size(); ++c) {
            auto v = gens_[static_cast<size_t>(c)].components();
            for (int r = 0; r < n + 1; ++r) m(r, c) = v[static_cast<size_t>(r)];
        }
        return m;
    }

    int rank() const { return linalg::rank(matrix()); }

    Frame conj() const {
        std::vector<OmniSection> g;
        for (const auto& s : gens_) g.push_back(s.conj());
        return Frame(chart_, std::move(g), samples_);
    }

    // Maximal generically-independent subset of the generators.
    Frame reduced() const {
        auto e = linalg::rref(matrix());
        std::vector<OmniSection> g;
        for (int c : e.pivots) g.push_back(gens_[static_cast<size_t>(c)]);
        return Frame(chart_, std::move(g), samples_);
    }

    Frame mapped(const std::function<OmniSection(const OmniSection&)>& f) const {
        std::vector<OmniSection> g;
        for (const auto& s : gens_) g.push_back(f(s));
        return Frame(chart_, std::move(g), samples_);
    }

private:
    Chart chart_;
    std::vector<OmniSection> gens_;
    std::vector<SamplePoint> samples_;
};

inline Frame bfield(const AtiyahForm& B, const Frame& f, bool allow_non_closed = false) {
    if (!allow_non_closed && !atiyah_d(B).is_zero())
        throw NotClosed("B-field form is not d_D-closed");
    return f.mapped([&](const OmniSection& s) { return bfield(B, s, true); });
}

// All pairwise pairings vanish identically; maximal iff the generic rank is
// dim+1 on top of that.
inline Report check_isotropic(const Frame& f) {
    Report rep;
    rep.title = "isotropic";
    for (int i = 0; i < f.size(); ++i)
        for (int j = i; j < f.size(); ++j) {
            Scalar p = omni_pair(f.generators()[static_cast<size_t>(i)], f.generators()[static_cast<size_t>(j)]);
            rep.require("<<g" + std::to_string(i + 1) + ",g" + std::to_string(j + 1) + ">> = 0", p.is_zero(),
                        to_string(p));
        }
    int r = f.rank();
    rep.require("generic rank = dim+1 (maximal)", r == f.chart().dim() + 1,
                "rank = " + std::to_string(r));
    return rep;
}

// Upsilon(a,b,c) = <<a,[[b,c]]>> on all generator triples; valid test of
// involutivity only after maximal isotropy holds.
inline Report check_involutive(const Frame& f) {
    Report iso = check_isotropic(f);
    if (!iso.pass())
        throw PreconditionNotMaximalIsotropic(
            "involutivity on generators needs a maximal isotropic frame");
    Report rep;
    rep.title = "involutive";
    for (int i = 0; i < f.size(); ++i)
        for (int j = 0; j < f.size(); ++j) {
            OmniSection br = dorfman(f.generators()[static_cast<size_t>(i)], f.generators()[static_cast<size_t>(j)]);
            for (int k = 0; k < f.size(); ++k) {
                Scalar u = omni_pair(f.generators()[static_cast<size_t>(k)], br);
                if (!u.is_zero())
                    rep.require("Upsilon(g" + std::to_string(k + 1) + ",g" + std::to_string(i + 1) + ",g" +
                                    std::to_string(j + 1) + ") = 0",
                                false, to_string(u));
            }
        }
    if (rep.items.empty()) rep.require("Upsilon vanishes on generators", true);
    return rep;
}

// Sharp map of a Jacobi pair: J#(eta + f·j) = (Lam(eta,−) − f·E, eta(E)).
// This sign calibration reproduces {f,g} = Lam(f,g) + E(f)g − fE(g) exactly
// and inverts to omega_flat for non-degenerate pairs.
inline Derivation jacobi_sharp(const Multivec& lam, const Vec& e, const Jet& psi) {
    Vec x = sharp(lam, psi.eta) - e.scaled(psi.g);
    return Derivation(std::move(x), pair_form_vec(psi.eta, e));
}

inline Mat jacobi_sharp_matrix(const Multivec& lam, const Vec& e) {
    const Chart& c = lam.chart();
    int n = c.dim();
    Mat m(c, n + 1, n + 1);
    auto fill = [&](int col, const Jet& psi) {
        Derivation d = jacobi_sharp(lam, e, psi);
        for (int i = 0; i < n; ++i) m(i, col) = d.X.comps[static_cast<size_t>(i)];
        m(n, col) = d.f;
    };
    for (int i = 0; i < n; ++i) fill(i, Jet::form(Form::dcoord(c, c.name(i))));
    fill(n, Jet::unit(c));
    return m;
}

// graph J = {(J# psi, psi)}.
inline Frame graph_jacobi(const Multivec& lam, const Vec& e) {
    const Chart& c = lam.chart();
    std::vector<OmniSection> gens;
    for (int i = 0; i < c.dim(); ++i) {
        Jet psi = Jet::form(Form::dcoord(c, c.name(i)));
        gens.emplace_back(jacobi_sharp(lam, e, psi), psi);
    }
    Jet ju = Jet::unit(c);
    gens.emplace_back(jacobi_sharp(lam, e, ju), ju);
    return Frame(c, std::move(gens));
}

// The complex frame {(J# psi, i·psi)} — the eigenbundle presentation used for
// leaves and transversals; coincides with the +i-eigenbundle of the contact
// operator when J is non-degenerate.
inline Frame graph_jacobi_complex(const Multivec& lam, const Vec& e) {
    const Chart& c = lam.chart();
    Scalar iu = Scalar::iunit(c);
    std::vector<OmniSection> gens;
    for (int i = 0; i < c.dim(); ++i) {
        Jet psi = Jet::form(Form::dcoord(c, c.name(i)));
        gens.emplace_back(jacobi_sharp(lam, e, psi), psi.scaled(iu));
    }
    Jet ju = Jet::unit(c);
    gens.emplace_back(jacobi_sharp(lam, e, ju), ju.scaled(iu));
    return Frame(c, std::move(gens));
}

// graph omega = {(D, i_D omega)}.
inline Frame graph_atiyah(const AtiyahForm& b) {
    if (b.degree() != 2) throw DegreeMismatch("graph needs an Atiyah 2-form");
    const Chart& c = b.chart();
    std::vector<OmniSection> gens;
    for (int i = 0; i < c.dim(); ++i) {
        Derivation d = Derivation::basis(c, i);
        gens.emplace_back(d, atiyah_interior(d, b).as_jet());
    }
    Derivation u = Derivation::unit(c);
    gens.emplace_back(u, atiyah_interior(u, b).as_jet());
    return Frame(c, std::move(gens));
}

// The frame of the full gauge algebroid DR_M (graph of the zero 2-form).
inline Frame gauge_frame(const Chart& c) { return graph_atiyah(AtiyahForm(c, 2)); }

// The frame of the jet summand J¹R_M.
inline Frame jet_frame(const Chart& c) {
    std::vector<OmniSection> gens;
    for (int i = 0; i < c.dim(); ++i)
        gens.emplace_back(Derivation(c), Jet::form(Form::dcoord(c, c.name(i))));
    gens.emplace_back(Derivation(c), Jet::unit(c));
    return Frame(c, std::move(gens));
}

// varpi(D, N) = <psi, N> with (D, psi) in span(F); solution-independent when
// F is isotropic. pivot_order lets tests solve along a different elimination
// path.
inline Scalar varpi(const Frame& f, const Derivation& dv, const Derivation& nv,
                    const std::vector<int>* pivot_order = nullptr) {
    require_same_chart(f.chart(), dv.chart());
    require_same_chart(f.chart(), nv.chart());
    Mat D = f.derivation_matrix();
    std::vector<Scalar> rhs;
    int n = f.chart().dim();
    for (int i = 0; i < n; ++i) rhs.push_back(dv.X.comps[static_cast<size_t>(i)]);
    rhs.push_back(dv.f);
    std::vector<Scalar> coeffs;
    try {
        coeffs = linalg::solve(D, rhs, pivot_order);
    } catch (const InconsistentSystem&) {
        throw NotInProjection("derivation does not lie in p_D(frame) over the fraction field");
    }
    Jet psi(f.chart());
    for (int i = 0; i < f.size(); ++i)
        if (!coeffs[static_cast<size_t>(i)].is_zero())
            psi = psi + f.generators()[static_cast<size_t>(i)].j.scaled(coeffs[static_cast<size_t>(i)]);
    return jet_pair(psi, nv);
}

// Product F1 ⋆ F2 = {(D, psi1+psi2) : (D, psi_i) in F_i}. Smoothness is
// certified by generic rank dim+1 plus equal rank at every declared sample
// point.
inline Frame star(const Frame& f1, const Frame& f2) {
    require_same_chart(f1.chart(), f2.chart());
    const Chart& c = f1.chart();
    int n = c.dim();
    Mat sys(c, n + 1, f1.size() + f2.size());
    Mat d1 = f1.derivation_matrix(), d2 = f2.derivation_matrix();
    for (int r = 0; r < n + 1; ++r) {
        for (int j = 0; j < f1.size(); ++j) sys(r, j) = d1(r, j);
        for (int j = 0; j < f2.size(); ++j) sys(r, f1.size() + j) = -d2(r, j);
    }
    auto ker = linalg::kernel(sys);
    std::vector<OmniSection> gens;
    for (const auto& v : ker) {
        OmniSection g(c);
        for (int j = 0; j < f1.size(); ++j)
            if (!v[static_cast<size_t>(j)].is_zero())
                g = g + f1.generators()[static_cast<size_t>(j)].scaled(v[static_cast<size_t>(j)]);
        for (int j = 0; j < f2.size(); ++j) {
            const Scalar& cj = v[static_cast<size_t>(f1.size() + j)];
            if (!cj.is_zero())
                g.j = g.j + f2.generators()[static_cast<size_t>(j)].j.scaled(cj);
        }
        gens.push_back(std::move(g));
    }
    std::vector<SamplePoint> samples = f1.samples();
    Frame out(c, std::move(gens), std::move(samples));
    out = out.reduced();
    if (out.rank() != n + 1)
        throw RankDeficient("star product has generic rank " + std::to_string(out.rank()) +
                            " instead of " + std::to_string(n + 1));
    Mat m = out.matrix();
    for (const auto& pt : out.samples())
        if (linalg::rank_at(m, pt) != n + 1)
            throw RankDeficient("star product drops rank at " + pt.to_string());
    return out;
}

// Backward image along the projection onto `sub` from the product chart:
// generators lift unchanged, plus (∂_b, 0) for every new coordinate.
inline Frame backward_projection(const Frame& f, const Chart& product) {
    for (const auto& nm : f.chart().names())
        if (!product.has(nm))
            throw UnknownCoordinate("product chart misses coordinate '" + nm + "'");
    std::vector<OmniSection> gens;
    for (const auto& g : f.generators()) {
        Vec x(product);
        for (int i = 0; i < f.chart().dim(); ++i)
            x.comps[static_cast<size_t>(product.index_of(f.chart().name(i)))] =
                g.d.X.comps[static_cast<size_t>(i)].transported(product);
        gens.emplace_back(Derivation(std::move(x), g.d.f.transported(product)),
                          Jet(Form(g.j.eta.alt.transported(product)), g.j.g.transported(product)));
    }
    for (const auto& nm : product.names())
        if (!f.chart().has(nm)) gens.emplace_back(Derivation::basis(product, product.index_of(nm)), Jet(product));
    return Frame(product, std::move(gens));
}

// Backward image along the embedding of the coordinate subspace
// {normals = 0}: restrict, keep the part whose symbol is tangent, pull the
// jets back (normal differentials drop). The clean intersection condition is
// rank(p_D F|_S + D(R_S)) constant, checked symbolically and at the declared
// sample points pushed onto the subspace.
inline Frame backward_embedding(const Frame& f, const std::vector<std::string>& normals) {
    if (normals.empty()) return f;
    const Chart& big = f.chart();
    Chart sub = big.without(normals);
    int nbig = big.dim();

    std::map<std::string, Poly> zero_bindings;
    for (const auto& nm : normals) zero_bindings[nm] = Poly(sub);
    auto restrict_scalar = [&](const Scalar& s) { return s.substituted(sub, zero_bindings); };

    // restricted generators, still indexed by the ambient chart
    std::vector<std::vector<Scalar>> restricted; // component vectors over sub-chart
    for (const auto& g : f.generators()) {
        std::vector<Scalar> v;
        for (const auto& s : g.components()) v.push_back(restrict_scalar(s));
        restricted.push_back(std::move(v));
    }

    // clean intersection: span of p_D F|_S together with D(R_S)
    int r = static_cast<int>(restricted.size());
    std::vector<int> tangent_idx;
    for (int i = 0; i < nbig; ++i)
        if (sub.has(big.name(i))) tangent_idx.push_back(i);
    Mat ci(sub, nbig + 1, r + static_cast<int>(tangent_idx.size()) + 1);
    for (int j = 0; j < r; ++j)
        for (int i = 0; i <= nbig; ++i) ci(i, j) = restricted[static_cast<size_t>(j)][static_cast<size_t>(i)];
    for (size_t k = 0; k < tangent_idx.size(); ++k)
        ci(tangent_idx[k], r + static_cast<int>(k)) = Scalar(sub, 1);
    ci(nbig, r + static_cast<int>(tangent_idx.size())) = Scalar(sub, 1);
    int generic_ci = linalg::rank(ci);
    for (const auto& pt : f.samples()) {
        std::vector<Rat> vals;
        for (int i = 0; i < sub.dim(); ++i) vals.push_back(pt.value(big.index_of(sub.name(i))));
        SamplePoint sp(sub, std::move(vals));
        if (linalg::rank_at(ci, sp) != generic_ci)
            throw CleanIntersectionFailed("clean-intersection rank drops at " + sp.to_string());
    }

    // solve for combinations whose symbol is tangent to the subspace
    std::vector<int> normal_idx;
    for (const auto& nm : normals) normal_idx.push_back(big.index_of(nm));
    Mat sys(sub, static_cast<int>(normal_idx.size()), r);
    for (int j = 0; j < r; ++j)
        for (size_t k = 0; k < normal_idx.size(); ++k)
            sys(static_cast<int>(k), j) = restricted[static_cast<size_t>(j)][static_cast<size_t>(normal_idx[k])];
    auto ker = linalg::kernel(sys);

    std::vector<OmniSection> gens;
    for (const auto& coef : ker) {
        std::vector<Scalar> comb(static_cast<size_t>(2 * nbig + 2), Scalar(sub));
        for (int j = 0; j < r; ++j) {
            if (coef[static_cast<size_t>(j)].is_zero()) continue;
            for (size_t i = 0; i < comb.size(); ++i)
                comb[i] += restricted[static_cast<size_t>(j)][i] * coef[static_cast<size_t>(j)];
        }
        // re-index tangentially: drop normal vector components (now zero) and
        // normal differentials (pullback kills them)
        OmniSection g(sub);
        for (int i = 0; i < sub.dim(); ++i) {
            int bi = big.index_of(sub.name(i));
            g.d.X.comps[static_cast<size_t>(i)] = comb[static_cast<size_t>(bi)];
            g.j.eta.alt.add({i}, comb[static_cast<size_t>(nbig + 1 + bi)]);
        }
        g.d.f = comb[static_cast<size_t>(nbig)];
        g.j.g = comb[static_cast<size_t>(2 * nbig + 1)];
        gens.push_back(std::move(g));
    }
    return Frame(sub, std::move(gens)).reduced();
}

// Flat product F1 ×! F2 = star(P1^! F1, P2^! F2) on the concatenated chart.
inline Frame flat_product(const Frame& f1, const Frame& f2) {
    Chart prod = Chart::product(f1.chart(), f2.chart());
    return star(backward_projection(f1, prod), backward_projection(f2, prod));
}

// Span equality: rank F1 = rank F2 = rank(F1 ∪ F2), symbolically and at all
// declared sample points.
inline bool frame_equal(const Frame& f1, const Frame& f2) {
    require_same_chart(f1.chart(), f2.chart());
    Mat m1 = f1.matrix(), m2 = f2.matrix();
    Mat joint(f1.chart(), m1.rows(), f1.size() + f2.size());
    for (int r = 0; r < m1.rows(); ++r) {
        for (int c = 0; c < f1.size(); ++c) joint(r, c) = m1(r, c);
        for (int c = 0; c < f2.size(); ++c) joint(r, f1.size() + c) = m2(r, c);
    }
    int r1 = linalg::rank(m1), r2 = linalg::rank(m2), rj = linalg::rank(joint);
    if (!(r1 == r2 && r2 == rj)) return false;
    auto pts = f1.samples();
    for (const auto& p : f2.samples()) pts.push_back(p);
    for (const auto& pt : pts) {
        int s1 = linalg::rank_at(m1, pt), s2 = linalg::rank_at(m2, pt), sj = linalg::rank_at(joint, pt);
        if (!(s1 == s2 && s2 == sj)) return false;
    }
    return true;
}

// Basis of the intersection of two frames' spans over the fraction field.
inline std::vector<OmniSection> frame_intersection(const Frame& f1, const Frame& f2) {
    require_same_chart(f1.chart(), f2.chart());
    const Chart& c = f1.chart();
    Mat m1 = f1.matrix(), m2 = f2.matrix();
    Mat joint(c, m1.rows(), f1.size() + f2.size());
    for (int r = 0; r < m1.rows(); ++r) {
        for (int j = 0; j < f1.size(); ++j) joint(r, j) = m1(r, j);
        for (int j = 0; j < f2.size(); ++j) joint(r, f1.size() + j) = -m2(r, j);
    }
    auto ker = linalg::kernel(joint);
    std::vector<OmniSection> out;
    for (const auto& v : ker) {
        OmniSection g(c);
        for (int j = 0; j < f1.size(); ++j)
            if (!v[static_cast<size_t>(j)].is_zero())
                g = g + f1.generators()[static_cast<size_t>(j)].scaled(v[static_cast<size_t>(j)]);
        if (!g.is_zero()) out.push_back(std::move(g));
    }
    // reduce to an independent set
    if (out.empty()) return out;
    Frame tmp(c, out, f1.samples());
    return tmp.reduced().generators();
}

} // namespace djc
