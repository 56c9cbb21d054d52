#pragma once

#include <functional>
#include <map>
#include <vector>

#include "djc/linalg.hpp"
#include "djc/scalar.hpp"

namespace djc {

using IndexTuple = std::vector<int>;

// Sorts indices ascending in place; returns the permutation sign, or 0 when
// an index repeats.
inline int sort_indices(IndexTuple& idx) {
    int sign = 1;
    for (size_t i = 1; i < idx.size(); ++i)
        for (size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
            if (idx[j - 1] == idx[j]) return 0;
            std::swap(idx[j - 1], idx[j]);
            sign = -sign;
        }
    return sign;
}

// Antisymmetric coefficient storage shared by forms and multivectors; the
// variance tag is carried by the wrapper types below.
class Alt {
public:
    Alt() = default;
    Alt(Chart chart, int degree) : chart_(std::move(chart)), degree_(degree) {
        if (degree_ > chart_.dim() + 1)
            throw DegreeMismatch("degree exceeds chart dimension");
    }

    const Chart& chart() const { return chart_; }
    int degree() const { return degree_; }
    const std::map<IndexTuple, Scalar>& comps() const { return comps_; }
    bool is_zero() const { return comps_.empty(); }

    void add(IndexTuple idx, const Scalar& c) {
        if (c.is_zero()) return;
        if (static_cast<int>(idx.size()) != degree_)
            throw DegreeMismatch("component index count does not match degree");
        int sign = sort_indices(idx);
        if (sign == 0) return;
        Scalar v = (sign > 0) ? c : -c;
        auto it = comps_.find(idx);
        if (it == comps_.end()) {
            comps_.emplace(std::move(idx), std::move(v));
        } else {
            it->second += v;
            if (it->second.is_zero()) comps_.erase(it);
        }
    }

    Scalar coeff(IndexTuple idx) const {
        int sign = sort_indices(idx);
        if (sign == 0) return Scalar(chart_);
        auto it = comps_.find(idx);
        if (it == comps_.end()) return Scalar(chart_);
        return sign > 0 ? it->second : -it->second;
    }

    Alt operator-() const {
        Alt r(chart_, degree_);
        for (const auto& [i, c] : comps_) r.comps_.emplace(i, -c);
        return r;
    }
    Alt& operator+=(const Alt& o) {
        require_compatible(o);
        for (const auto& [i, c] : o.comps_) add(i, c);
        return *this;
    }
    Alt& operator-=(const Alt& o) {
        require_compatible(o);
        for (const auto& [i, c] : o.comps_) add(i, -c);
        return *this;
    }
    friend Alt operator+(Alt a, const Alt& b) { return a += b; }
    friend Alt operator-(Alt a, const Alt& b) { return a -= b; }

    Alt scaled(const Scalar& s) const {
        Alt r(chart_, degree_);
        if (s.is_zero()) return r;
        for (const auto& [i, c] : comps_) {
            Scalar v = c * s;
            if (!v.is_zero()) r.comps_.emplace(i, std::move(v));
        }
        return r;
    }

    friend bool operator==(const Alt& a, const Alt& b) {
        return a.chart_ == b.chart_ && a.degree_ == b.degree_ && a.comps_ == b.comps_;
    }
    friend bool operator!=(const Alt& a, const Alt& b) { return !(a == b); }

    // Graded product: a∧b = (−1)^{|a||b|} b∧a.
    friend Alt wedge(const Alt& a, const Alt& b) {
        a.require_chart(b);
        Alt r(a.chart_, a.degree_ + b.degree_);
        for (const auto& [ia, ca] : a.comps_)
            for (const auto& [ib, cb] : b.comps_) {
                IndexTuple idx = ia;
                idx.insert(idx.end(), ib.begin(), ib.end());
                r.add(std::move(idx), ca * cb);
            }
        return r;
    }

    Alt conj() const {
        Alt r(chart_, degree_);
        for (const auto& [i, c] : comps_) r.comps_.emplace(i, c.conj());
        return r;
    }

    Alt transported(const Chart& target) const {
        Alt r(target, degree_);
        for (const auto& [idx, c] : comps_) {
            IndexTuple t;
            for (int i : idx) t.push_back(target.index_of(chart_.name(i)));
            r.add(std::move(t), c.transported(target));
        }
        return r;
    }

    void require_chart(const Alt& o) const { require_same_chart(chart_, o.chart_); }

private:
    void require_compatible(const Alt& o) const {
        require_chart(o);
        if (degree_ != o.degree_) throw DegreeMismatch("cannot combine different degrees");
    }

    Chart chart_;
    int degree_ = 0;
    std::map<IndexTuple, Scalar> comps_;
};

// Vector field: one coefficient per coordinate.
struct Vec {
    Chart chart;
    std::vector<Scalar> comps;

    Vec() = default;
    explicit Vec(const Chart& c) : chart(c), comps(static_cast<size_t>(c.dim()), Scalar(c)) {}

    static Vec basis(const Chart& c, int i) {
        Vec v(c);
        v.comps[static_cast<size_t>(i)] = Scalar(c, 1);
        return v;
    }
    static Vec basis(const Chart& c, const std::string& name) { return basis(c, c.index_of(name)); }

    bool is_zero() const {
        for (const auto& s : comps)
            if (!s.is_zero()) return false;
        return true;
    }

    Scalar apply(const Scalar& f) const {
        Scalar out(chart);
        for (int i = 0; i < chart.dim(); ++i)
            if (!comps[static_cast<size_t>(i)].is_zero())
                out += comps[static_cast<size_t>(i)] * f.derivative(i);
        return out;
    }

    Vec operator-() const {
        Vec r = *this;
        for (auto& s : r.comps) s = -s;
        return r;
    }
    Vec& operator+=(const Vec& o) {
        require_same_chart(chart, o.chart);
        for (size_t i = 0; i < comps.size(); ++i) comps[i] += o.comps[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        require_same_chart(chart, o.chart);
        for (size_t i = 0; i < comps.size(); ++i) comps[i] -= o.comps[i];
        return *this;
    }
    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    Vec scaled(const Scalar& s) const {
        Vec r = *this;
        for (auto& x : r.comps) x *= s;
        return r;
    }
    friend bool operator==(const Vec& a, const Vec& b) {
        return a.chart == b.chart && a.comps == b.comps;
    }

    Vec conj() const {
        Vec r = *this;
        for (auto& s : r.comps) s = s.conj();
        return r;
    }
};

struct Form {
    Alt alt;

    Form() = default;
    Form(const Chart& c, int degree) : alt(c, degree) {}
    explicit Form(Alt a) : alt(std::move(a)) {}

    static Form dcoord(const Chart& c, const std::string& name) {
        Form f(c, 1);
        f.alt.add({c.index_of(name)}, Scalar(c, 1));
        return f;
    }
    static Form scalar(const Scalar& s) {
        Form f(s.chart(), 0);
        f.alt.add({}, s);
        return f;
    }

    const Chart& chart() const { return alt.chart(); }
    int degree() const { return alt.degree(); }
    bool is_zero() const { return alt.is_zero(); }

    Form operator-() const { return Form(-alt); }
    friend Form operator+(const Form& a, const Form& b) { return Form(a.alt + b.alt); }
    friend Form operator-(const Form& a, const Form& b) { return Form(a.alt - b.alt); }
    Form scaled(const Scalar& s) const { return Form(alt.scaled(s)); }
    friend bool operator==(const Form& a, const Form& b) { return a.alt == b.alt; }
    friend bool operator!=(const Form& a, const Form& b) { return !(a == b); }
    Form conj() const { return Form(alt.conj()); }

    // Value on vector arguments (count must equal degree).
    Scalar on(const std::vector<Vec>& args) const {
        if (static_cast<int>(args.size()) != degree())
            throw DegreeMismatch("wrong number of vector arguments");
        Scalar out(chart());
        for (const auto& [idx, c] : alt.comps()) {
            // det of the matrix args[b].comps[idx[a]]
            out += c * det_minor(chart(), args, idx);
        }
        return out;
    }

private:
    static Scalar det_minor(const Chart& chart, const std::vector<Vec>& args, const IndexTuple& idx) {
        size_t k = idx.size();
        if (k == 0) return Scalar(chart, 1);
        Scalar out(chart);
        // Laplace expansion over permutations (degrees here are small)
        std::function<void(size_t, int, Scalar)> rec = [&](size_t row, int used, Scalar acc) {
            if (acc.is_zero()) return;
            if (row == k) {
                out += acc;
                return;
            }
            for (size_t b = 0; b < k; ++b) {
                if (used & (1 << b)) continue;
                int swaps = 0;
                for (size_t p = 0; p < b; ++p)
                    if (!(used & (1 << p))) ++swaps;
                Scalar v = args[b].comps[static_cast<size_t>(idx[row])];
                if (v.is_zero()) continue;
                Scalar next = acc * v;
                if (swaps % 2) next = -next;
                rec(row + 1, used | (1 << b), next);
            }
        };
        rec(0, 0, Scalar(chart, 1));
        return out;
    }
};

struct Multivec {
    Alt alt;

    Multivec() = default;
    Multivec(const Chart& c, int degree) : alt(c, degree) {}
    explicit Multivec(Alt a) : alt(std::move(a)) {}
    explicit Multivec(const Vec& v) : alt(v.chart, 1) {
        for (int i = 0; i < v.chart.dim(); ++i) alt.add({i}, v.comps[static_cast<size_t>(i)]);
    }

    static Multivec basis(const Chart& c, const std::string& name) { return Multivec(Vec::basis(c, name)); }

    const Chart& chart() const { return alt.chart(); }
    int degree() const { return alt.degree(); }
    bool is_zero() const { return alt.is_zero(); }

    Vec as_vec() const {
        if (degree() != 1) throw DegreeMismatch("not a 1-vector");
        Vec v(chart());
        for (const auto& [idx, c] : alt.comps()) v.comps[static_cast<size_t>(idx[0])] = c;
        return v;
    }

    Multivec operator-() const { return Multivec(-alt); }
    friend Multivec operator+(const Multivec& a, const Multivec& b) { return Multivec(a.alt + b.alt); }
    friend Multivec operator-(const Multivec& a, const Multivec& b) { return Multivec(a.alt - b.alt); }
    Multivec scaled(const Scalar& s) const { return Multivec(alt.scaled(s)); }
    friend bool operator==(const Multivec& a, const Multivec& b) { return a.alt == b.alt; }
    friend bool operator!=(const Multivec& a, const Multivec& b) { return !(a == b); }
    Multivec conj() const { return Multivec(alt.conj()); }

    // Value on 1-form arguments.
    Scalar on(const std::vector<Form>& args) const {
        if (static_cast<int>(args.size()) != degree())
            throw DegreeMismatch("wrong number of form arguments");
        std::vector<Vec> dual;
        for (const auto& f : args) {
            if (f.degree() != 1) throw DegreeMismatch("multivector arguments must be 1-forms");
            Vec v(chart());
            for (int i = 0; i < chart().dim(); ++i) v.comps[static_cast<size_t>(i)] = f.alt.coeff({i});
            dual.push_back(std::move(v));
        }
        Form self(alt); // same antisymmetric engine evaluates the pairing
        return self.on(dual);
    }
};

inline Form wedge(const Form& a, const Form& b) { return Form(wedge(a.alt, b.alt)); }
inline Multivec wedge(const Multivec& a, const Multivec& b) { return Multivec(wedge(a.alt, b.alt)); }

inline Form d(const Form& f) {
    Form out(f.chart(), f.degree() + 1);
    for (const auto& [idx, c] : f.alt.comps())
        for (int i = 0; i < f.chart().dim(); ++i) {
            Scalar dc = c.derivative(i);
            if (dc.is_zero()) continue;
            IndexTuple j;
            j.push_back(i);
            j.insert(j.end(), idx.begin(), idx.end());
            out.alt.add(std::move(j), dc);
        }
    return out;
}

inline Form interior(const Vec& x, const Form& f) {
    require_same_chart(x.chart, f.chart());
    if (f.degree() <= 0) return Form(f.chart(), f.degree() - 1);
    Form out(f.chart(), f.degree() - 1);
    for (const auto& [idx, c] : f.alt.comps())
        for (size_t a = 0; a < idx.size(); ++a) {
            const Scalar& xi = x.comps[static_cast<size_t>(idx[a])];
            if (xi.is_zero()) continue;
            IndexTuple rest;
            for (size_t b = 0; b < idx.size(); ++b)
                if (b != a) rest.push_back(idx[b]);
            Scalar v = c * xi;
            if (a % 2) v = -v;
            out.alt.add(std::move(rest), v);
        }
    return out;
}

inline Scalar pair_form_vec(const Form& eta, const Vec& x) {
    if (eta.degree() != 1) throw DegreeMismatch("pairing needs a 1-form");
    return interior(x, eta).alt.coeff({});
}

inline Vec lie_bracket(const Vec& x, const Vec& y) {
    require_same_chart(x.chart, y.chart);
    Vec out(x.chart);
    for (int i = 0; i < x.chart.dim(); ++i)
        out.comps[static_cast<size_t>(i)] =
            x.apply(y.comps[static_cast<size_t>(i)]) - y.apply(x.comps[static_cast<size_t>(i)]);
    return out;
}

namespace detail {

// Right odd derivative: c·ξ_I ↦ ±c·ξ_{I∖k} (sign from moving ξ_k to the end).
inline Alt odd_right_derivative(const Alt& p, int k) {
    Alt out(p.chart(), p.degree() - 1);
    for (const auto& [idx, c] : p.comps()) {
        for (size_t a = 0; a < idx.size(); ++a) {
            if (idx[a] != k) continue;
            IndexTuple rest;
            for (size_t b = 0; b < idx.size(); ++b)
                if (b != a) rest.push_back(idx[b]);
            int moves = static_cast<int>(idx.size() - 1 - a);
            Scalar v = (moves % 2) ? -c : c;
            out.add(std::move(rest), v);
            break;
        }
    }
    return out;
}

inline Alt coefficient_derivative(const Alt& p, int k) {
    Alt out(p.chart(), p.degree());
    for (const auto& [idx, c] : p.comps()) out.add(idx, c.derivative(k));
    return out;
}

} // namespace detail

// Schouten-Nijenhuis bracket. Sign convention is fixed by the canonical
// Jacobi pair: [Lam_can, Lam_can] = 2 E_can ∧ Lam_can and [E_can, Lam_can] = 0,
// and by L_Z pi = [Z, pi] on bivectors. Concretely
//   [P,Q] = P∗Q − (−1)^{(p−1)(q−1)} Q∗P,   P∗Q = Σ_k (∂ᴿP/∂ξ_k)·(∂Q/∂x^k).
inline Multivec schouten(const Multivec& p, const Multivec& q) {
    require_same_chart(p.chart(), q.chart());
    const Chart& chart = p.chart();
    auto star = [&chart](const Alt& a, const Alt& b) {
        Alt out(chart, a.degree() + b.degree() - 1);
        for (int k = 0; k < chart.dim(); ++k) {
            Alt da = detail::odd_right_derivative(a, k);
            if (da.is_zero()) continue;
            Alt db = detail::coefficient_derivative(b, k);
            if (db.is_zero()) continue;
            out += wedge(da, db);
        }
        return out;
    };
    Alt pq = star(p.alt, q.alt);
    Alt qp = star(q.alt, p.alt);
    int eps = (p.degree() - 1) * (q.degree() - 1);
    Alt r = (eps % 2) ? pq + qp : pq - qp;
    return Multivec(std::move(r));
}

inline Form lie(const Vec& x, const Form& f) {
    return Form(interior(x, d(f)).alt + d(interior(x, f)).alt);
}

inline Vec lie(const Vec& x, const Vec& y) { return lie_bracket(x, y); }

inline Multivec lie(const Vec& x, const Multivec& p) { return schouten(Multivec(x), p); }

// (1,1)-tensor on the tangent bundle; column j holds the image of ∂_j.
struct Endo11 {
    Chart chart;
    Mat m;

    Endo11() = default;
    explicit Endo11(const Chart& c) : chart(c), m(c, c.dim(), c.dim()) {}
    Endo11(const Chart& c, Mat mat) : chart(c), m(std::move(mat)) {}

    static Endo11 identity(const Chart& c) { return Endo11(c, Mat::identity(c, c.dim())); }

    // Rank-one tensor eta ⊗ X.
    static Endo11 tensor(const Form& eta, const Vec& x) {
        require_same_chart(eta.chart(), x.chart);
        if (eta.degree() != 1) throw DegreeMismatch("tensor factor must be a 1-form");
        Endo11 t(x.chart);
        for (int j = 0; j < x.chart.dim(); ++j) {
            Scalar ej = eta.alt.coeff({j});
            if (ej.is_zero()) continue;
            for (int i = 0; i < x.chart.dim(); ++i) t.m(i, j) = x.comps[static_cast<size_t>(i)] * ej;
        }
        return t;
    }

    Vec apply(const Vec& v) const {
        require_same_chart(chart, v.chart);
        Vec out(chart);
        auto r = m.apply(v.comps);
        out.comps = std::move(r);
        return out;
    }

    // eta ∘ A on 1-forms (the adjoint A*).
    Form coapply(const Form& eta) const {
        if (eta.degree() != 1) throw DegreeMismatch("coapply needs a 1-form");
        Form out(chart, 1);
        for (int j = 0; j < chart.dim(); ++j) {
            Scalar v(chart);
            for (int i = 0; i < chart.dim(); ++i) {
                Scalar e = eta.alt.coeff({i});
                if (!e.is_zero() && !m(i, j).is_zero()) v += e * m(i, j);
            }
            out.alt.add({j}, v);
        }
        return out;
    }

    Endo11 operator-() const { return Endo11(chart, -m); }
    friend Endo11 operator+(const Endo11& a, const Endo11& b) { return Endo11(a.chart, a.m + b.m); }
    friend Endo11 operator-(const Endo11& a, const Endo11& b) { return Endo11(a.chart, a.m - b.m); }
    friend Endo11 operator*(const Endo11& a, const Endo11& b) { return Endo11(a.chart, a.m * b.m); }
    friend bool operator==(const Endo11& a, const Endo11& b) { return a.chart == b.chart && a.m == b.m; }
    Endo11 scaled(const Scalar& s) const { return Endo11(chart, m.scaled(s)); }
};

inline Endo11 lie(const Vec& x, const Endo11& phi) {
    // (L_X Φ)(∂_j) = [X, Φ∂_j] − Φ[X, ∂_j]
    Endo11 out(phi.chart);
    for (int j = 0; j < phi.chart.dim(); ++j) {
        Vec col = lie_bracket(x, phi.apply(Vec::basis(phi.chart, j))) -
                  phi.apply(lie_bracket(x, Vec::basis(phi.chart, j)));
        for (int i = 0; i < phi.chart.dim(); ++i) out.m(i, j) = col.comps[static_cast<size_t>(i)];
    }
    return out;
}

// Nijenhuis torsion N_Φ(X,Y) = [ΦX,ΦY] − Φ[ΦX,Y] − Φ[X,ΦY] + Φ²[X,Y].
struct NijenhuisTorsion {
    Endo11 phi;

    Vec operator()(const Vec& x, const Vec& y) const {
        Vec px = phi.apply(x), py = phi.apply(y);
        return lie_bracket(px, py) - phi.apply(lie_bracket(px, y)) - phi.apply(lie_bracket(x, py)) +
               phi.apply(phi.apply(lie_bracket(x, y)));
    }

    bool vanishes() const {
        for (int i = 0; i < phi.chart.dim(); ++i)
            for (int j = i + 1; j < phi.chart.dim(); ++j)
                if (!(*this)(Vec::basis(phi.chart, i), Vec::basis(phi.chart, j)).is_zero()) return false;
        return true;
    }
};

inline NijenhuisTorsion nijenhuis11(const Endo11& phi) { return NijenhuisTorsion{phi}; }

// Bivector sharp with the first-slot convention: Λ♯η := Λ(η, −).
inline Vec sharp(const Multivec& lam, const Form& eta) {
    require_same_chart(lam.chart(), eta.chart());
    if (lam.degree() != 2 || eta.degree() != 1) throw DegreeMismatch("sharp needs a bivector and a 1-form");
    Vec out(lam.chart());
    for (const auto& [idx, c] : lam.alt.comps()) {
        int i = idx[0], j = idx[1];
        Scalar ei = eta.alt.coeff({i}), ej = eta.alt.coeff({j});
        // Λ^{ij}(η_i e_j − η_j e_i)
        if (!ei.is_zero()) out.comps[static_cast<size_t>(j)] += c * ei;
        if (!ej.is_zero()) out.comps[static_cast<size_t>(i)] -= c * ej;
    }
    return out;
}

// 2-form flat with the first-slot convention: Ω♭X := ι_X Ω.
inline Form flat(const Form& omega, const Vec& x) { return interior(x, omega); }

inline Mat sharp_matrix(const Multivec& lam) {
    Mat m(lam.chart(), lam.chart().dim(), lam.chart().dim());
    for (int a = 0; a < lam.chart().dim(); ++a) {
        Vec col = sharp(lam, Form::dcoord(lam.chart(), lam.chart().name(a)));
        for (int i = 0; i < lam.chart().dim(); ++i) m(i, a) = col.comps[static_cast<size_t>(i)];
    }
    return m;
}

inline Mat flat_matrix(const Form& omega) {
    Mat m(omega.chart(), omega.chart().dim(), omega.chart().dim());
    for (int a = 0; a < omega.chart().dim(); ++a) {
        Form col = flat(omega, Vec::basis(omega.chart(), a));
        for (int i = 0; i < omega.chart().dim(); ++i) m(i, a) = col.alt.coeff({i});
    }
    return m;
}

// Bivector with a prescribed sharp matrix (inverse of sharp_matrix).
inline Multivec bivector_from_sharp(const Chart& chart, const Mat& m) {
    Multivec lam(chart, 2);
    for (int i = 0; i < chart.dim(); ++i)
        for (int j = i + 1; j < chart.dim(); ++j) lam.alt.add({i, j}, m(j, i));
    return lam;
}

// Printing in the DSL's own syntax: "d<name>" for differentials, "@<name>"
// for coordinate vector fields, wedge written "^".
inline std::string to_string(const Alt& a, const std::string& prefix) {
    if (a.is_zero()) return "0";
    std::string out;
    for (const auto& [idx, c] : a.comps()) {
        std::string basis;
        for (int i : idx) {
            if (!basis.empty()) basis += "^";
            basis += prefix + a.chart().name(i);
        }
        std::string term;
        if (basis.empty())
            term = to_string(c);
        else if (c.is_one())
            term = basis;
        else
            term = "(" + to_string(c) + ")*" + basis;
        out += out.empty() ? term : " + " + term;
    }
    return out;
}

inline std::string to_string(const Form& f) { return to_string(f.alt, "d"); }
inline std::string to_string(const Multivec& m) { return to_string(m.alt, "@"); }
inline std::string to_string(const Vec& v) { return to_string(Multivec(v).alt, "@"); }

} // namespace djc
