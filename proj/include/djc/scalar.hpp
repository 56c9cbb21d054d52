#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "djc/chart.hpp"
#include "djc/error.hpp"
#include "djc/rational.hpp"

namespace djc {

// Exponent vector over a chart; one entry per coordinate.
using Expo = std::vector<int>;

// Graded lexicographic order, descending, so map::begin() is the leading term.
// Ties in total degree break lexicographically with earlier chart coordinates
// ranked higher.
struct GrlexDesc {
    bool operator()(const Expo& a, const Expo& b) const {
        int da = 0, db = 0;
        for (int e : a) da += e;
        for (int e : b) db += e;
        if (da != db) return da > db;
        return a > b;
    }
};

class Poly {
public:
    using Terms = std::map<Expo, CRat, GrlexDesc>;

    Poly() = default;
    explicit Poly(Chart chart) : chart_(std::move(chart)) {}

    Poly(Chart chart, const CRat& c) : chart_(std::move(chart)) {
        if (!c.is_zero()) terms_[Expo(static_cast<size_t>(chart_.dim()), 0)] = c;
    }

    static Poly constant(const Chart& chart, const CRat& c) { return Poly(chart, c); }

    static Poly coordinate(const Chart& chart, int idx) {
        Poly p(chart);
        Expo e(static_cast<size_t>(chart.dim()), 0);
        e[static_cast<size_t>(idx)] = 1;
        p.terms_[e] = CRat::one();
        return p;
    }

    static Poly coordinate(const Chart& chart, const std::string& name) {
        return coordinate(chart, chart.index_of(name));
    }

    const Chart& chart() const { return chart_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
    }

    CRat constant_value() const {
        if (terms_.empty()) return CRat::zero();
        return terms_.begin()->second;
    }

    bool is_one() const { return is_constant() && constant_value().is_one(); }

    int total_degree() const {
        if (terms_.empty()) return -1;
        return total_degree(terms_.begin()->first); // grlex leading term has max degree
    }

    const CRat& leading_coefficient() const {
        static const CRat kZero;
        return terms_.empty() ? kZero : terms_.begin()->second;
    }

    void add_term(const Expo& e, const CRat& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Poly operator-() const {
        Poly r(chart_);
        for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
        return r;
    }

    Poly& operator+=(const Poly& o) {
        require_same_chart(chart_, o.chart_);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        require_same_chart(chart_, o.chart_);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

    friend Poly operator*(const Poly& a, const Poly& b) {
        require_same_chart(a.chart_, b.chart_);
        Poly r(a.chart_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Expo e = ea;
                for (size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
                r.add_term(e, ca * cb);
            }
        return r;
    }

    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    Poly scaled(const CRat& c) const {
        Poly r(chart_);
        if (c.is_zero()) return r;
        for (const auto& [e, k] : terms_) r.terms_.emplace(e, k * c);
        return r;
    }

    friend bool operator==(const Poly& a, const Poly& b) {
        return a.chart_ == b.chart_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    Poly conj() const {
        Poly r(chart_);
        for (const auto& [e, c] : terms_) r.terms_.emplace(e, c.conj());
        return r;
    }

    Poly derivative(int idx) const {
        Poly r(chart_);
        for (const auto& [e, c] : terms_) {
            int k = e[static_cast<size_t>(idx)];
            if (k == 0) continue;
            Expo d = e;
            d[static_cast<size_t>(idx)] -= 1;
            r.add_term(d, c * CRat(k));
        }
        return r;
    }

    CRat evaluate(const SamplePoint& pt) const {
        require_same_chart(chart_, pt.chart);
        CRat total;
        for (const auto& [e, c] : terms_) {
            CRat v = c;
            for (size_t i = 0; i < e.size(); ++i)
                for (int k = 0; k < e[i]; ++k) v *= CRat(pt.value(static_cast<int>(i)));
            total += v;
        }
        return total;
    }

    // Ring morphism: every source coordinate maps either through `images`
    // (index -> polynomial on the target chart) or by name to a target
    // coordinate. Throws UnknownCoordinate when a used coordinate has no image.
    Poly mapped(const Chart& target, const std::map<int, Poly>& images) const {
        std::vector<std::optional<Poly>> image(static_cast<size_t>(chart_.dim()));
        for (const auto& [i, p] : images) {
            require_same_chart(p.chart(), target);
            image[static_cast<size_t>(i)] = p;
        }
        Poly r(target);
        for (const auto& [e, c] : terms_) {
            Poly term = Poly::constant(target, c);
            for (size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                Poly base;
                if (image[i]) {
                    base = *image[i];
                } else {
                    const std::string& nm = chart_.name(static_cast<int>(i));
                    if (!target.has(nm))
                        throw UnknownCoordinate("coordinate '" + nm + "' has no image in target chart");
                    base = Poly::coordinate(target, nm);
                }
                for (int k = 0; k < e[i]; ++k) term *= base;
            }
            r += term;
        }
        return r;
    }

    Poly transported(const Chart& target) const { return mapped(target, {}); }

    bool depends_on(int idx) const {
        for (const auto& [e, c] : terms_)
            if (e[static_cast<size_t>(idx)] > 0) return true;
        return false;
    }

    int degree_in(int idx) const {
        int d = -1;
        for (const auto& [e, c] : terms_) d = std::max(d, e[static_cast<size_t>(idx)]);
        return d;
    }

    // Univariate view in coordinate idx: degree -> coefficient polynomial.
    std::map<int, Poly> univariate_in(int idx) const {
        std::map<int, Poly> out;
        for (const auto& [e, c] : terms_) {
            Expo r = e;
            int k = r[static_cast<size_t>(idx)];
            r[static_cast<size_t>(idx)] = 0;
            auto it = out.find(k);
            if (it == out.end()) it = out.emplace(k, Poly(chart_)).first;
            it->second.add_term(r, c);
        }
        return out;
    }

    static Poly from_univariate(const Chart& chart, int idx, const std::map<int, Poly>& coeffs) {
        Poly r(chart);
        for (const auto& [k, p] : coeffs)
            for (const auto& [e, c] : p.terms()) {
                Expo f = e;
                f[static_cast<size_t>(idx)] += k;
                r.add_term(f, c);
            }
        return r;
    }

private:
    static int total_degree(const Expo& e) {
        int d = 0;
        for (int k : e) d += k;
        return d;
    }

    Chart chart_;
    Terms terms_;
};

namespace detail {

// Exact multivariate division; the caller guarantees divisibility.
inline Poly divexact(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw DivisionByZeroFunction("exact division by zero polynomial");
    Poly rem = a;
    Poly quot(a.chart());
    const auto& ltb = *b.terms().begin();
    while (!rem.is_zero()) {
        const auto& lta = *rem.terms().begin();
        Expo q = lta.first;
        for (size_t i = 0; i < q.size(); ++i) {
            q[i] -= ltb.first[i];
            if (q[i] < 0) throw Error("InexactDivision", "polynomial division was expected to be exact");
        }
        CRat c = lta.second / ltb.second;
        Poly t(a.chart());
        t.add_term(q, c);
        quot += t;
        rem -= t * b;
    }
    return quot;
}

inline Poly pow(const Poly& p, int n) {
    Poly r = Poly::constant(p.chart(), CRat::one());
    for (int i = 0; i < n; ++i) r *= p;
    return r;
}

// Pseudo-remainder of a by b, univariate in coordinate idx:
// lc(b)^(da-db+1) * a = q*b + r.
inline Poly pseudo_rem(const Poly& a, const Poly& b, int idx) {
    auto ub = b.univariate_in(idx);
    int db = ub.rbegin()->first;
    Poly lcb = ub.rbegin()->second;
    Poly r = a;
    int e = a.degree_in(idx) - db + 1;
    while (!r.is_zero()) {
        auto ur = r.univariate_in(idx);
        int dr = ur.rbegin()->first;
        if (dr < db) break;
        Poly lcr = ur.rbegin()->second;
        Poly shift(a.chart());
        Expo x(static_cast<size_t>(a.chart().dim()), 0);
        x[static_cast<size_t>(idx)] = dr - db;
        shift.add_term(x, CRat::one());
        r = lcb * r - lcr * shift * b;
        --e;
    }
    for (int i = 0; i < e; ++i) r = lcb * r;
    return r;
}

inline Poly gcd(const Poly& a, const Poly& b);

// Content of a with respect to coordinate idx (gcd of univariate coefficients).
inline Poly content_in(const Poly& a, int idx) {
    Poly c(a.chart());
    for (const auto& [k, coeff] : a.univariate_in(idx)) c = gcd(c, coeff);
    return c;
}

inline Poly monic(const Poly& a) {
    if (a.is_zero()) return a;
    return a.scaled(inverse(a.leading_coefficient()));
}

// Strips the common monomial factor (exponent-wise minimum).
inline Expo monomial_content(const Poly& a) {
    Expo m(static_cast<size_t>(a.chart().dim()), 0);
    bool first = true;
    for (const auto& [e, c] : a.terms()) {
        if (first) {
            m = e;
            first = false;
        } else {
            for (size_t i = 0; i < m.size(); ++i) m[i] = std::min(m[i], e[i]);
        }
    }
    return m;
}

inline Poly shift_down(const Poly& a, const Expo& m) {
    Poly r(a.chart());
    for (const auto& [e, c] : a.terms()) {
        Expo f = e;
        for (size_t i = 0; i < f.size(); ++i) f[i] -= m[i];
        r.add_term(f, c);
    }
    return r;
}

// Monic gcd over QQ(i)[x1..xn] via subresultant pseudo-remainder sequences.
inline Poly gcd(const Poly& a, const Poly& b) {
    if (a.is_zero()) return monic(b);
    if (b.is_zero()) return monic(a);
    require_same_chart(a.chart(), b.chart());
    const Chart& chart = a.chart();

    Expo ma = monomial_content(a), mb = monomial_content(b);
    Expo mg(ma.size());
    for (size_t i = 0; i < ma.size(); ++i) mg[i] = std::min(ma[i], mb[i]);
    Poly A = shift_down(a, ma), B = shift_down(b, mb);

    Poly xg(chart);
    xg.add_term(mg, CRat::one());

    int main_var = -1;
    for (int i = chart.dim() - 1; i >= 0; --i)
        if (A.depends_on(i) || B.depends_on(i)) {
            main_var = i;
            break;
        }
    if (main_var < 0) return monic(xg); // both constants

    Poly contA = content_in(A, main_var), contB = content_in(B, main_var);
    Poly cont = gcd(contA, contB);
    A = divexact(A, contA);
    B = divexact(B, contB);

    if (A.degree_in(main_var) < B.degree_in(main_var)) std::swap(A, B);
    Poly g = Poly::constant(chart, CRat::one());
    Poly h = g;
    for (;;) {
        int delta = A.degree_in(main_var) - B.degree_in(main_var);
        Poly R = pseudo_rem(A, B, main_var);
        if (R.is_zero()) break;
        if (R.degree_in(main_var) == 0) {
            B = Poly::constant(chart, CRat::one());
            break;
        }
        A = B;
        B = divexact(R, g * pow(h, delta));
        g = A.univariate_in(main_var).rbegin()->second;
        if (delta > 0) h = divexact(pow(g, delta), pow(h, delta - 1));
    }
    Poly pp = divexact(B, content_in(B, main_var));
    return monic(xg * cont * pp);
}

} // namespace detail

std::string to_string(const Poly& p);

// Exact rational function over a chart: gcd-reduced, denominator monic in
// graded lex, so equal functions have identical representations.
class Scalar {
public:
    Scalar() = default;
    explicit Scalar(const Chart& chart)
        : num_(chart), den_(Poly::constant(chart, CRat::one())) {}
    Scalar(const Chart& chart, const CRat& c)
        : num_(chart, c), den_(Poly::constant(chart, CRat::one())) {}
    Scalar(const Chart& chart, long n) : Scalar(chart, CRat(n)) {}

    explicit Scalar(Poly p) : num_(std::move(p)), den_(Poly::constant(num_.chart(), CRat::one())) {}

    Scalar(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
        require_same_chart(num_.chart(), den_.chart());
        if (den_.is_zero()) throw DivisionByZeroFunction("denominator is the zero polynomial");
        reduce();
    }

    static Scalar coordinate(const Chart& chart, const std::string& name) {
        return Scalar(Poly::coordinate(chart, name));
    }
    static Scalar iunit(const Chart& chart) { return Scalar(chart, CRat::iunit()); }

    const Chart& chart() const { return num_.chart(); }
    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_polynomial() const { return den_.is_one(); }
    bool is_constant() const { return num_.is_constant() && den_.is_one(); }
    CRat constant_value() const { return num_.constant_value() / den_.constant_value(); }
    bool is_real() const { return num_.conj() == num_ && den_.conj() == den_; }

    Scalar conj() const { return raw(num_.conj(), den_.conj()); }

    Scalar re() const {
        Scalar c = conj();
        return (*this + c).scaled_by_rat(Rat(1, 2));
    }
    Scalar im() const {
        Scalar c = conj();
        Scalar d = *this - c;
        return Scalar(d.num_.scaled(CRat(Rat(0), Rat(-1, 2))), d.den_);
    }

    Scalar operator-() const { return raw(-num_, den_); }

    friend Scalar operator+(const Scalar& a, const Scalar& b) {
        require_same_chart(a.chart(), b.chart());
        if (a.den_ == b.den_) return Scalar(a.num_ + b.num_, a.den_);
        return Scalar(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }
    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        require_same_chart(a.chart(), b.chart());
        if (a.den_.is_one() && b.den_.is_one()) return Scalar(a.num_ * b.num_);
        return Scalar(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Scalar operator/(const Scalar& a, const Scalar& b) {
        require_same_chart(a.chart(), b.chart());
        if (b.is_zero())
            throw DivisionByZeroFunction("division by a rational function that is identically zero");
        return Scalar(a.num_ * b.den_, a.den_ * b.num_);
    }

    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

    friend bool operator==(const Scalar& a, const Scalar& b) {
        return a.num_ == b.num_ && a.den_ == b.den_; // canonical form is a congruence
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    Scalar pow(int n) const {
        if (n < 0) return Scalar(chart(), CRat::one()) / pow(-n);
        Scalar r(chart(), CRat::one());
        for (int i = 0; i < n; ++i) r *= *this;
        return r;
    }

    Scalar derivative(const std::string& coord) const { return derivative(chart().index_of(coord)); }

    Scalar derivative(int idx) const {
        // quotient rule, then reduce
        Poly n = num_.derivative(idx) * den_ - num_ * den_.derivative(idx);
        return Scalar(std::move(n), den_ * den_);
    }

    // Bindings: coordinate name -> polynomial value on the reduced chart.
    // Surviving coordinates keep their names.
    Scalar substituted(const Chart& target, const std::map<std::string, Poly>& bindings) const {
        std::map<int, Poly> images;
        for (const auto& [name, value] : bindings) images[chart().index_of(name)] = value;
        Poly n = num_.mapped(target, images);
        Poly d = den_.mapped(target, images);
        if (d.is_zero())
            throw DenominatorVanishes("substitution makes the denominator identically zero");
        return Scalar(std::move(n), std::move(d));
    }

    Scalar transported(const Chart& target) const { return substituted(target, {}); }

    CRat evaluate(const SamplePoint& pt) const {
        CRat d = den_.evaluate(pt);
        if (d.is_zero())
            throw DenominatorVanishes("denominator vanishes at sample point " + pt.to_string());
        return num_.evaluate(pt) / d;
    }

    // Complexity proxy used by pivot selection.
    size_t weight() const { return num_.terms().size() + den_.terms().size(); }

private:
    Scalar scaled_by_rat(const Rat& r) const {
        return Scalar(num_.scaled(CRat(r)), den_);
    }

    static Scalar raw(Poly n, Poly d) {
        Scalar s;
        s.num_ = std::move(n);
        s.den_ = std::move(d);
        if (s.num_.is_zero()) s.den_ = Poly::constant(s.den_.chart(), CRat::one());
        return s; // caller guarantees canonical form
    }

    void reduce() {
        if (num_.is_zero()) {
            den_ = Poly::constant(den_.chart(), CRat::one());
            return;
        }
        if (!den_.is_one()) {
            if (den_.is_constant()) {
                num_ = num_.scaled(inverse(den_.constant_value()));
                den_ = Poly::constant(den_.chart(), CRat::one());
                return;
            }
            Poly g = detail::gcd(num_, den_);
            if (!g.is_one()) {
                num_ = detail::divexact(num_, g);
                den_ = detail::divexact(den_, g);
            }
            CRat lc = den_.leading_coefficient();
            if (!lc.is_one()) {
                CRat inv = inverse(lc);
                num_ = num_.scaled(inv);
                den_ = den_.scaled(inv);
            }
        }
    }

    Poly num_;
    Poly den_;
};

inline std::string to_string(const Poly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : p.terms()) {
        std::string mono;
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += p.chart().name(static_cast<int>(i));
            if (e[i] > 1) mono += "^" + std::to_string(e[i]);
        }
        std::string cs = to_string(c);
        std::string term;
        if (mono.empty()) {
            term = (cs.find_first_of("+-", 1) != std::string::npos && !c.is_real()) ? "(" + cs + ")" : cs;
        } else if (c.is_one()) {
            term = mono;
        } else if ((-c).is_one()) {
            term = "-" + mono;
        } else {
            bool needs_parens = !c.is_real() || cs.find_first_of("+-", 1) != std::string::npos;
            term = (needs_parens ? "(" + cs + ")" : cs) + "*" + mono;
        }
        if (first) {
            out = term;
            first = false;
        } else if (!term.empty() && term[0] == '-') {
            out += " - " + term.substr(1);
        } else {
            out += " + " + term;
        }
    }
    return out;
}

inline std::string to_string(const Scalar& s) {
    if (s.is_polynomial()) return to_string(s.num());
    return "(" + to_string(s.num()) + ")/(" + to_string(s.den()) + ")";
}

} // namespace djc
