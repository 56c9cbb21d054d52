#pragma once

#include <random>

#include "djc/omni.hpp"

namespace djc {

// Deterministic generator for the randomized property suites: same seed,
// same values, on every platform (mt19937_64 is pinned by the standard).
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    int uniform(int lo, int hi) { // inclusive
        return static_cast<int>(eng_() % static_cast<uint64_t>(hi - lo + 1)) + lo;
    }

    bool chance(int percent) { return uniform(0, 99) < percent; }

    Rat rat(int max_num = 3, int max_den = 2) {
        return make_rat(uniform(-max_num, max_num), uniform(1, max_den));
    }

    CRat crat(bool complex_ok = true) {
        if (complex_ok && chance(40)) return CRat(rat(), rat());
        return CRat(rat());
    }

    Poly poly(const Chart& c, int max_degree, int max_terms, bool complex_ok = true) {
        Poly p(c);
        int terms = uniform(1, max_terms);
        for (int t = 0; t < terms; ++t) {
            Expo e(static_cast<size_t>(c.dim()), 0);
            int deg = uniform(0, max_degree);
            for (int k = 0; k < deg; ++k) ++e[static_cast<size_t>(uniform(0, c.dim() - 1))];
            p.add_term(e, crat(complex_ok));
        }
        return p;
    }

    Scalar scalar(const Chart& c, int max_degree = 2, int max_terms = 3, bool complex_ok = true) {
        return Scalar(poly(c, max_degree, max_terms, complex_ok));
    }

    Vec vec(const Chart& c, int max_degree = 2, bool complex_ok = true) {
        Vec v(c);
        for (int i = 0; i < c.dim(); ++i)
            if (chance(70)) v.comps[static_cast<size_t>(i)] = scalar(c, max_degree, 2, complex_ok);
        return v;
    }

    Form form(const Chart& c, int degree, int max_degree = 2, bool complex_ok = true) {
        Form f(c, degree);
        if (degree < 0) return f;
        // fill a few random sorted index tuples
        int count = uniform(1, std::max(1, c.dim()));
        for (int t = 0; t < count; ++t) {
            IndexTuple idx;
            while (static_cast<int>(idx.size()) < degree) {
                int i = uniform(0, c.dim() - 1);
                bool dup = false;
                for (int j : idx) dup = dup || (i == j);
                if (!dup) idx.push_back(i);
            }
            f.alt.add(std::move(idx), scalar(c, max_degree, 2, complex_ok));
        }
        return f;
    }

    Multivec multivec(const Chart& c, int degree, int max_degree = 2, bool complex_ok = true) {
        return Multivec(form(c, degree, max_degree, complex_ok).alt);
    }

    Derivation derivation(const Chart& c, int max_degree = 2, bool complex_ok = true) {
        return Derivation(vec(c, max_degree, complex_ok), scalar(c, max_degree, 2, complex_ok));
    }

    Jet jet(const Chart& c, int max_degree = 2, bool complex_ok = true) {
        return Jet(form(c, 1, max_degree, complex_ok), scalar(c, max_degree, 2, complex_ok));
    }

    OmniSection omni(const Chart& c, int max_degree = 2, bool complex_ok = true) {
        return OmniSection(derivation(c, max_degree, complex_ok), jet(c, max_degree, complex_ok));
    }

    AtiyahForm atiyah(const Chart& c, int degree, int max_degree = 2, bool complex_ok = true) {
        return AtiyahForm(form(c, degree, max_degree, complex_ok),
                          form(c, degree - 1, max_degree, complex_ok));
    }

    // d_D-exact (hence closed) Atiyah 2-form.
    AtiyahForm closed_atiyah2(const Chart& c, int max_degree = 2, bool complex_ok = false) {
        return atiyah_d(atiyah(c, 1, max_degree, complex_ok));
    }

private:
    std::mt19937_64 eng_;
};

} // namespace djc
