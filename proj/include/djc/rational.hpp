#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "djc/error.hpp"

namespace djc {

using Rat = mpq_class;

// mpq_class(n, d) keeps the raw fraction; GMP comparisons need canonical form.
inline Rat make_rat(long num, long den) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// Gaussian rational a + b·i, the coefficient field of every polynomial here.
// Arithmetic is exact; i² = −1 by construction.
struct CRat {
    Rat re{0};
    Rat im{0};

    CRat() = default;
    CRat(long n) : re(n) {}
    CRat(const Rat& r) : re(r) {}
    CRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

    static CRat zero() { return CRat(); }
    static CRat one() { return CRat(1); }
    static CRat iunit() { return CRat(Rat(0), Rat(1)); }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }
    bool is_one() const { return re == 1 && im == 0; }

    CRat conj() const { return CRat(re, -im); }

    CRat operator-() const { return CRat(-re, -im); }

    CRat& operator+=(const CRat& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    CRat& operator-=(const CRat& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    CRat& operator*=(const CRat& o) {
        Rat r = re * o.re - im * o.im;
        Rat i = re * o.im + im * o.re;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }
    CRat& operator/=(const CRat& o) {
        if (o.is_zero()) throw DivisionByZeroFunction("division by zero coefficient");
        Rat n = o.re * o.re + o.im * o.im;
        Rat r = (re * o.re + im * o.im) / n;
        Rat i = (im * o.re - re * o.im) / n;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }

    friend CRat operator+(CRat a, const CRat& b) { return a += b; }
    friend CRat operator-(CRat a, const CRat& b) { return a -= b; }
    friend CRat operator*(CRat a, const CRat& b) { return a *= b; }
    friend CRat operator/(CRat a, const CRat& b) { return a /= b; }
    friend bool operator==(const CRat& a, const CRat& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const CRat& a, const CRat& b) { return !(a == b); }
};

inline CRat inverse(const CRat& c) { return CRat::one() / c; }

// Renders "3", "-1/2", "i", "2*i", "1/2-3*i" — the DSL's own literal syntax.
inline std::string to_string(const CRat& c) {
    auto rat_str = [](const Rat& r) { return r.get_str(); };
    if (c.is_zero()) return "0";
    std::string out;
    if (c.re != 0) out = rat_str(c.re);
    if (c.im != 0) {
        std::string im;
        if (c.im == 1)
            im = "i";
        else if (c.im == -1)
            im = "-i";
        else
            im = rat_str(c.im) + "*i";
        if (!out.empty() && im[0] != '-') out += "+";
        out += im;
    }
    return out;
}

} // namespace djc
