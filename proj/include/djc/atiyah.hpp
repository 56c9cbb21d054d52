#pragma once

#include "djc/cartan.hpp"

namespace djc {

// Derivation of the trivial line bundle: X + f (f multiplies by the identity
// derivation; the symbol is X).
struct Derivation {
    Vec X;
    Scalar f;

    Derivation() = default;
    explicit Derivation(const Chart& c) : X(c), f(c) {}
    Derivation(Vec x, Scalar s) : X(std::move(x)), f(std::move(s)) {
        require_same_chart(X.chart, f.chart());
    }

    static Derivation unit(const Chart& c) { return Derivation(Vec(c), Scalar(c, 1)); } // the identity derivation
    static Derivation vector(const Vec& x) { return Derivation(x, Scalar(x.chart)); }
    static Derivation basis(const Chart& c, int i) { return vector(Vec::basis(c, i)); }

    const Chart& chart() const { return f.chart(); }
    bool is_zero() const { return X.is_zero() && f.is_zero(); }

    Derivation operator-() const { return Derivation(-X, -f); }
    friend Derivation operator+(const Derivation& a, const Derivation& b) {
        return Derivation(a.X + b.X, a.f + b.f);
    }
    friend Derivation operator-(const Derivation& a, const Derivation& b) {
        return Derivation(a.X - b.X, a.f - b.f);
    }
    Derivation scaled(const Scalar& s) const { return Derivation(X.scaled(s), f * s); }
    friend bool operator==(const Derivation& a, const Derivation& b) { return a.X == b.X && a.f == b.f; }
    Derivation conj() const { return Derivation(X.conj(), f.conj()); }
};

// 1-jet eta + g·j, where j = j¹1.
struct Jet {
    Form eta; // degree 1
    Scalar g;

    Jet() = default;
    explicit Jet(const Chart& c) : eta(c, 1), g(c) {}
    Jet(Form e, Scalar s) : eta(std::move(e)), g(std::move(s)) {
        require_same_chart(eta.chart(), g.chart());
        if (eta.degree() != 1) throw DegreeMismatch("jet form part must have degree 1");
    }

    static Jet unit(const Chart& c) { return Jet(Form(c, 1), Scalar(c, 1)); } // the jet j
    static Jet form(const Form& e) { return Jet(e, Scalar(e.chart())); }

    const Chart& chart() const { return g.chart(); }
    bool is_zero() const { return eta.is_zero() && g.is_zero(); }

    Jet operator-() const { return Jet(-eta, -g); }
    friend Jet operator+(const Jet& a, const Jet& b) { return Jet(a.eta + b.eta, a.g + b.g); }
    friend Jet operator-(const Jet& a, const Jet& b) { return Jet(a.eta - b.eta, a.g - b.g); }
    Jet scaled(const Scalar& s) const { return Jet(eta.scaled(s), g * s); }
    friend bool operator==(const Jet& a, const Jet& b) { return a.eta == b.eta && a.g == b.g; }
    Jet conj() const { return Jet(eta.conj(), g.conj()); }
};

// Atiyah k-form w0 + w1 ∧ j  (w0 of degree k, w1 of degree k−1).
struct AtiyahForm {
    Form w0;
    Form w1;

    AtiyahForm() = default;
    AtiyahForm(const Chart& c, int degree) : w0(c, degree), w1(c, degree - 1) {}
    AtiyahForm(Form a, Form b) : w0(std::move(a)), w1(std::move(b)) {
        require_same_chart(w0.chart(), w1.chart());
        if (w1.degree() != w0.degree() - 1)
            throw DegreeMismatch("Atiyah form parts must have degrees k and k-1");
    }

    static AtiyahForm embed(const Form& a) { return AtiyahForm(a, Form(a.chart(), a.degree() - 1)); }
    static AtiyahForm from_jet(const Jet& j) {
        return AtiyahForm(j.eta, Form::scalar(j.g));
    }

    const Chart& chart() const { return w0.chart(); }
    int degree() const { return w0.degree(); }
    bool is_zero() const { return w0.is_zero() && w1.is_zero(); }

    Jet as_jet() const {
        if (degree() != 1) throw DegreeMismatch("only Atiyah 1-forms are jets");
        return Jet(w0, w1.alt.coeff({}));
    }

    AtiyahForm operator-() const { return AtiyahForm(-w0, -w1); }
    friend AtiyahForm operator+(const AtiyahForm& a, const AtiyahForm& b) {
        return AtiyahForm(a.w0 + b.w0, a.w1 + b.w1);
    }
    friend AtiyahForm operator-(const AtiyahForm& a, const AtiyahForm& b) {
        return AtiyahForm(a.w0 - b.w0, a.w1 - b.w1);
    }
    AtiyahForm scaled(const Scalar& s) const { return AtiyahForm(w0.scaled(s), w1.scaled(s)); }
    friend bool operator==(const AtiyahForm& a, const AtiyahForm& b) {
        return a.w0 == b.w0 && a.w1 == b.w1;
    }
    friend bool operator!=(const AtiyahForm& a, const AtiyahForm& b) { return !(a == b); }
    AtiyahForm conj() const { return AtiyahForm(w0.conj(), w1.conj()); }
};

// alpha ∧ omega for an ordinary form alpha.
inline AtiyahForm wedge(const Form& a, const AtiyahForm& w) {
    return AtiyahForm(wedge(a, w.w0), wedge(a, w.w1));
}

inline Scalar deriv_apply(const Derivation& d, const Scalar& lambda) {
    require_same_chart(d.chart(), lambda.chart());
    return d.X.apply(lambda) + d.f * lambda;
}

// Commutator of derivations: [X+f, Y+g] = [X,Y] + (X(g) − Y(f)).
inline Derivation deriv_bracket(const Derivation& a, const Derivation& b) {
    require_same_chart(a.chart(), b.chart());
    return Derivation(lie_bracket(a.X, b.X), a.X.apply(b.f) - b.X.apply(a.f));
}

// <eta + g·j, X + f> = eta(X) + g·f.
inline Scalar jet_pair(const Jet& psi, const Derivation& d) {
    require_same_chart(psi.chart(), d.chart());
    return pair_form_vec(psi.eta, d.X) + psi.g * d.f;
}

inline Jet jet_prolong(const Scalar& f) {
    Form df(f.chart(), 1);
    for (int i = 0; i < f.chart().dim(); ++i) df.alt.add({i}, f.derivative(i));
    return Jet(df, f);
}

// d_D w = d w0 + (d w1 + (−)^{|w0|} w0) ∧ j.
inline AtiyahForm atiyah_d(const AtiyahForm& w) {
    Form dw0 = d(w.w0);
    Form rest = d(w.w1);
    rest = (w.degree() % 2) ? rest - w.w0 : rest + w.w0;
    return AtiyahForm(std::move(dw0), std::move(rest));
}

// iota_{X+f} w = i_X w0 + (−)^{|w1|} f w1 + (i_X w1) ∧ j.
inline AtiyahForm atiyah_interior(const Derivation& dv, const AtiyahForm& w) {
    require_same_chart(dv.chart(), w.chart());
    Form first = interior(dv.X, w.w0);
    Form fw1 = w.w1.scaled(dv.f);
    first = (w.w1.degree() % 2) ? first - fw1 : first + fw1;
    return AtiyahForm(std::move(first), interior(dv.X, w.w1));
}

// L_{X+f} w = L_X w0 + f w0 + w1 ∧ df + (L_X w1 + f w1) ∧ j.
inline AtiyahForm atiyah_lie(const Derivation& dv, const AtiyahForm& w) {
    require_same_chart(dv.chart(), w.chart());
    Form df = jet_prolong(dv.f).eta;
    Form first = lie(dv.X, w.w0) + w.w0.scaled(dv.f) + wedge(w.w1, df);
    Form second = lie(dv.X, w.w1) + w.w1.scaled(dv.f);
    return AtiyahForm(std::move(first), std::move(second));
}

// Atiyah 2-form evaluated on two derivations: w(D,N) = <i_D w, N>.
inline Scalar atiyah_eval2(const AtiyahForm& w, const Derivation& a, const Derivation& b) {
    if (w.degree() != 2) throw DegreeMismatch("need an Atiyah 2-form");
    return jet_pair(atiyah_interior(a, w).as_jet(), b);
}

// Matrix of D ↦ i_D w in the frames {∂_i, 1} -> {dx^i, j}.
inline Mat atiyah_flat_matrix(const AtiyahForm& w) {
    if (w.degree() != 2) throw DegreeMismatch("need an Atiyah 2-form");
    const Chart& c = w.chart();
    int n = c.dim();
    Mat m(c, n + 1, n + 1);
    auto fill = [&](int col, const Derivation& dv) {
        Jet im = atiyah_interior(dv, w).as_jet();
        for (int i = 0; i < n; ++i) m(i, col) = im.eta.alt.coeff({i});
        m(n, col) = im.g;
    };
    for (int i = 0; i < n; ++i) fill(i, Derivation::basis(c, i));
    fill(n, Derivation::unit(c));
    return m;
}

// Reconstructs the Atiyah 2-form with a prescribed interior-product matrix.
// The matrix must come from a genuine 2-form (checked by round-trip).
inline AtiyahForm atiyah_from_flat_matrix(const Chart& c, const Mat& m) {
    int n = c.dim();
    AtiyahForm w(c, 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) w.w0.alt.add({i, j}, m(j, i));
    // w1 = −(jet part of the unit column)
    for (int i = 0; i < n; ++i) w.w1.alt.add({i}, -m(i, n));
    if (atiyah_flat_matrix(w) != m)
        throw Error("NotAntisymmetric", "matrix is not the flat map of an Atiyah 2-form");
    return w;
}

inline std::string to_string(const Derivation& d) {
    if (d.is_zero()) return "0";
    std::string out;
    if (!d.X.is_zero()) out = to_string(d.X);
    if (!d.f.is_zero()) {
        std::string f = d.f.is_one() ? "one" : "(" + to_string(d.f) + ")*one";
        out += out.empty() ? f : " + " + f;
    }
    return out;
}

inline std::string to_string(const Jet& j) {
    if (j.is_zero()) return "0";
    std::string out;
    if (!j.eta.is_zero()) out = to_string(j.eta);
    if (!j.g.is_zero()) {
        std::string g = j.g.is_one() ? "j" : "(" + to_string(j.g) + ")*j";
        out += out.empty() ? g : " + " + g;
    }
    return out;
}

inline std::string to_string(const AtiyahForm& w) {
    if (w.is_zero()) return "0";
    std::string out;
    if (!w.w0.is_zero()) out = to_string(w.w0);
    if (!w.w1.is_zero()) {
        std::string part = (w.w1.degree() == 0) ? "(" + to_string(w.w1.alt.coeff({})) + ")*j"
                                                : "(" + to_string(w.w1) + ")^j";
        out += out.empty() ? part : " + " + part;
    }
    return out;
}

// Flat connection data: nabla_X = X + gamma(X).
struct Connection {
    Form gamma; // degree 1

    explicit Connection(Form g) : gamma(std::move(g)) {
        if (gamma.degree() != 1) throw DegreeMismatch("connection form must have degree 1");
    }

    bool flat() const { return d(gamma).is_zero(); }

    // d^nabla alpha = d alpha + gamma ∧ alpha.
    Form differential(const Form& alpha) const { return d(alpha) + wedge(gamma, alpha); }

    Form curvature() const { return d(gamma); }
};

// Homogenization onto the chart extended by t: X + f ↦ X + f·t∂t.
inline Vec homogenize(const Derivation& dv, const std::string& tname = "t") {
    Chart ext = dv.chart().extended(tname);
    int ti = ext.index_of(tname);
    Vec out(ext);
    for (int i = 0; i < dv.chart().dim(); ++i)
        out.comps[static_cast<size_t>(ext.index_of(dv.chart().name(i)))] =
            dv.X.comps[static_cast<size_t>(i)].transported(ext);
    out.comps[static_cast<size_t>(ti)] = dv.f.transported(ext) * Scalar::coordinate(ext, tname);
    return out;
}

// Homogenization of a gauge endomorphism (matrix in the frame {∂_i, 1}) to a
// (1,1)-tensor on the extended chart, with phi~(D~) = (phi D)~ on the frame.
inline Endo11 homogenize_endo(const Mat& phi, const Chart& base, const std::string& tname = "t") {
    if (phi.rows() != base.dim() + 1 || phi.cols() != base.dim() + 1)
        throw Error("Shape", "gauge endomorphism must be (dim+1) x (dim+1)");
    Chart ext = base.extended(tname);
    int n = base.dim();
    int ti = ext.index_of(tname);
    Scalar t = Scalar::coordinate(ext, tname);
    Endo11 out(ext);
    auto lift = [&](int col_target, const std::vector<Scalar>& col, const Scalar& scale) {
        // column = a^j ∂_j + b·1  ↦  a^j ∂_j + b t ∂_t, times scale
        for (int j = 0; j < n; ++j)
            out.m(ext.index_of(base.name(j)), col_target) = col[static_cast<size_t>(j)].transported(ext) * scale;
        out.m(ti, col_target) = col[static_cast<size_t>(n)].transported(ext) * t * scale;
    };
    for (int i = 0; i < n; ++i) {
        std::vector<Scalar> col;
        for (int r = 0; r <= n; ++r) col.push_back(phi(r, i));
        lift(ext.index_of(base.name(i)), col, Scalar(ext, 1));
    }
    // phi~(∂_t) = (1/t)·(phi(1))~
    std::vector<Scalar> ucol;
    for (int r = 0; r <= n; ++r) ucol.push_back(phi(r, n));
    lift(ti, ucol, Scalar(ext, 1) / t);
    return out;
}

} // namespace djc
