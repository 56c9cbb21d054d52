#pragma once

#include "djc/atiyah.hpp"

namespace djc {

// Chart (u, x^1..x^n, y^1..y^n) together with its complexified partner
// (u, z^1..z^n, zb^1..zb^n); scalars move between the two by the exact ring
// isomorphisms z = x + i y, x = (z + zb)/2.
struct HoloChart {
    Chart real; // (u, x.., y..)
    Chart cplx; // (u, z.., zb..)
    int n = 0;

    HoloChart() = default;
    explicit HoloChart(const Chart& r) : real(r) {
        if (r.dim() % 2 != 1 || r.dim() < 3)
            throw NotHoloChart("holomorphic chart needs coordinates (u, x^1..x^n, y^1..y^n)");
        n = (r.dim() - 1) / 2;
        std::vector<std::string> names{"u"};
        for (int i = 1; i <= n; ++i) names.push_back("z" + std::to_string(i));
        for (int i = 1; i <= n; ++i) names.push_back("zb" + std::to_string(i));
        cplx = Chart(names);
    }

    int u_real() const { return 0; }
    int x_real(int i) const { return 1 + i; }
    int y_real(int i) const { return 1 + n + i; }
    int u_cplx() const { return 0; }
    int z_cplx(int i) const { return 1 + i; }
    int zb_cplx(int i) const { return 1 + n + i; }

    Scalar to_cplx(const Scalar& s) const {
        require_same_chart(s.chart(), real);
        std::map<int, Poly> images;
        CRat half(Rat(1, 2)), mihalf(Rat(0), Rat(-1, 2)), ihalf(Rat(0), Rat(1, 2));
        for (int i = 0; i < n; ++i) {
            Poly z = Poly::coordinate(cplx, z_cplx(i)), zb = Poly::coordinate(cplx, zb_cplx(i));
            images[x_real(i)] = z.scaled(half) + zb.scaled(half);
            images[y_real(i)] = z.scaled(mihalf) + zb.scaled(ihalf);
        }
        images[u_real()] = Poly::coordinate(cplx, u_cplx());
        return Scalar(s.num().mapped(cplx, images), s.den().mapped(cplx, images));
    }

    Scalar to_real(const Scalar& s) const {
        require_same_chart(s.chart(), cplx);
        std::map<int, Poly> images;
        CRat iu(Rat(0), Rat(1));
        for (int i = 0; i < n; ++i) {
            Poly x = Poly::coordinate(real, x_real(i)), y = Poly::coordinate(real, y_real(i));
            images[z_cplx(i)] = x + y.scaled(iu);
            images[zb_cplx(i)] = x + y.scaled(-iu);
        }
        images[u_cplx()] = Poly::coordinate(real, u_real());
        return Scalar(s.num().mapped(real, images), s.den().mapped(real, images));
    }
};

// Pure-type representation of complex Atiyah forms over a HoloChart:
// generators dz^i (ids 0..n-1), dzb^i (ids n..2n-1), k = j + i du (id 2n,
// type (1,0)), kb = j − i du (id 2n+1, type (0,1)). Coefficients live on the
// complexified chart.
class PureAtiyah {
public:
    PureAtiyah() = default;
    PureAtiyah(HoloChart hc, int degree) : hc_(std::move(hc)), degree_(degree) {}

    const HoloChart& holo() const { return hc_; }
    int degree() const { return degree_; }
    const std::map<IndexTuple, Scalar>& comps() const { return comps_; }
    bool is_zero() const { return comps_.empty(); }

    int gen_count() const { return 2 * hc_.n + 2; }
    int id_k() const { return 2 * hc_.n; }
    int id_kb() const { return 2 * hc_.n + 1; }
    bool is_dz(int id) const { return id < hc_.n; }
    bool is_dzb(int id) const { return id >= hc_.n && id < 2 * hc_.n; }

    // bidegree contribution of one generator
    std::pair<int, int> gen_bidegree(int id) const {
        if (is_dz(id) || id == id_k()) return {1, 0};
        return {0, 1};
    }

    std::pair<int, int> key_bidegree(const IndexTuple& key) const {
        int r = 0, s = 0;
        for (int id : key) {
            auto [a, b] = gen_bidegree(id);
            r += a;
            s += b;
        }
        return {r, s};
    }

    void add(IndexTuple key, const Scalar& c) {
        require_same_chart(c.chart(), hc_.cplx);
        if (c.is_zero()) return;
        if (static_cast<int>(key.size()) != degree_)
            throw DegreeMismatch("component size does not match degree");
        int sign = sort_indices(key);
        if (sign == 0) return;
        Scalar v = sign > 0 ? c : -c;
        auto it = comps_.find(key);
        if (it == comps_.end())
            comps_.emplace(std::move(key), std::move(v));
        else {
            it->second += v;
            if (it->second.is_zero()) comps_.erase(it);
        }
    }

    PureAtiyah operator-() const {
        PureAtiyah r(hc_, degree_);
        for (const auto& [k, c] : comps_) r.comps_.emplace(k, -c);
        return r;
    }
    friend PureAtiyah operator+(PureAtiyah a, const PureAtiyah& b) {
        if (a.degree_ != b.degree_) throw DegreeMismatch("cannot combine different degrees");
        for (const auto& [k, c] : b.comps_) a.add(k, c);
        return a;
    }
    friend PureAtiyah operator-(PureAtiyah a, const PureAtiyah& b) { return a + (-b); }
    friend bool operator==(const PureAtiyah& a, const PureAtiyah& b) {
        return a.degree_ == b.degree_ && a.comps_ == b.comps_;
    }
    friend bool operator!=(const PureAtiyah& a, const PureAtiyah& b) { return !(a == b); }

    PureAtiyah scaled(const Scalar& s) const {
        PureAtiyah r(hc_, degree_);
        for (const auto& [k, c] : comps_) {
            Scalar v = c * s;
            if (!v.is_zero()) r.comps_.emplace(k, v);
        }
        return r;
    }

    PureAtiyah conj() const {
        // conjugation swaps dz <-> dzb and k <-> kb and conjugates
        // coefficients as functions (z <-> zb in the coordinates too)
        PureAtiyah r(hc_, degree_);
        std::map<int, Poly> swap_zzb;
        for (int i = 0; i < hc_.n; ++i) {
            swap_zzb[hc_.z_cplx(i)] = Poly::coordinate(hc_.cplx, hc_.zb_cplx(i));
            swap_zzb[hc_.zb_cplx(i)] = Poly::coordinate(hc_.cplx, hc_.z_cplx(i));
        }
        for (const auto& [k, c] : comps_) {
            IndexTuple key;
            for (int id : k) {
                if (is_dz(id))
                    key.push_back(id + hc_.n);
                else if (is_dzb(id))
                    key.push_back(id - hc_.n);
                else if (id == id_k())
                    key.push_back(id_kb());
                else
                    key.push_back(id_k());
            }
            Scalar cc = c.conj(); // conjugates coefficients of the rational function
            cc = Scalar(cc.num().mapped(hc_.cplx, swap_zzb), cc.den().mapped(hc_.cplx, swap_zzb));
            r.add(std::move(key), cc);
        }
        return r;
    }

private:
    HoloChart hc_;
    int degree_ = 0;
    std::map<IndexTuple, Scalar> comps_;
};

namespace dolbeault_detail {

// expansion of one real-chart 1-form generator into pure generators
inline std::vector<std::pair<int, CRat>> real_generator_image(const HoloChart& hc, int real_id) {
    CRat half(Rat(1, 2)), ihalf(Rat(0), Rat(1, 2)), mihalf(Rat(0), Rat(-1, 2));
    int n = hc.n;
    if (real_id == 0) return {{2 * n, mihalf}, {2 * n + 1, ihalf}};                   // du
    if (real_id <= n) return {{real_id - 1, half}, {n + real_id - 1, half}};          // dx_i
    return {{real_id - 1 - n, mihalf}, {real_id - 1, ihalf}};                         // dy_i
}

inline std::vector<std::pair<int, CRat>> jet_generator_image(const HoloChart& hc) {
    CRat half(Rat(1, 2));
    return {{2 * hc.n, half}, {2 * hc.n + 1, half}}; // j = (k + kb)/2
}

} // namespace dolbeault_detail

inline PureAtiyah to_pure(const HoloChart& hc, const AtiyahForm& w) {
    require_same_chart(w.chart(), hc.real);
    PureAtiyah out(hc, w.degree());
    auto expand = [&](const IndexTuple& tuple, bool with_jet, const Scalar& coeff) {
        std::vector<std::pair<IndexTuple, CRat>> acc{{IndexTuple{}, CRat::one()}};
        auto push = [&](const std::vector<std::pair<int, CRat>>& image) {
            std::vector<std::pair<IndexTuple, CRat>> next;
            for (const auto& [key, c] : acc)
                for (const auto& [id, f] : image) {
                    IndexTuple k = key;
                    k.push_back(id);
                    next.emplace_back(std::move(k), c * f);
                }
            acc = std::move(next);
        };
        for (int rid : tuple) push(dolbeault_detail::real_generator_image(hc, rid));
        if (with_jet) push(dolbeault_detail::jet_generator_image(hc));
        Scalar cc = hc.to_cplx(coeff);
        for (auto& [key, c] : acc) out.add(key, cc * Scalar(hc.cplx, c));
    };
    for (const auto& [t, c] : w.w0.alt.comps()) expand(t, false, c);
    for (const auto& [t, c] : w.w1.alt.comps()) expand(t, true, c);
    return out;
}

inline AtiyahForm from_pure(const PureAtiyah& p) {
    const HoloChart& hc = p.holo();
    int n = hc.n;
    int jet_marker = hc.real.dim(); // virtual index for j while expanding
    AtiyahForm out(hc.real, p.degree());
    CRat iu(Rat(0), Rat(1));
    auto image = [&](int id) -> std::vector<std::pair<int, CRat>> {
        if (p.is_dz(id)) return {{hc.x_real(id), CRat::one()}, {hc.y_real(id), iu}};
        if (p.is_dzb(id)) return {{hc.x_real(id - n), CRat::one()}, {hc.y_real(id - n), -iu}};
        if (id == p.id_k()) return {{jet_marker, CRat::one()}, {hc.u_real(), iu}};
        return {{jet_marker, CRat::one()}, {hc.u_real(), -iu}};
    };
    for (const auto& [key, coeff] : p.comps()) {
        std::vector<std::pair<IndexTuple, CRat>> acc{{IndexTuple{}, CRat::one()}};
        for (int id : key) {
            std::vector<std::pair<IndexTuple, CRat>> next;
            for (const auto& [k, c] : acc)
                for (const auto& [rid, f] : image(id)) {
                    IndexTuple t = k;
                    t.push_back(rid);
                    next.emplace_back(std::move(t), c * f);
                }
            acc = std::move(next);
        }
        Scalar rc = hc.to_real(coeff);
        for (auto& [t, c] : acc) {
            // move at most one jet marker to the end; drop duplicates
            int jets = 0;
            IndexTuple rest;
            int sign_moves = 0;
            for (size_t a = 0; a < t.size(); ++a) {
                if (t[a] == jet_marker) {
                    ++jets;
                    sign_moves += static_cast<int>(t.size() - 1 - a);
                } else {
                    rest.push_back(t[a]);
                }
            }
            if (jets > 1) continue;
            Scalar v = rc * Scalar(hc.real, c);
            if (sign_moves % 2) v = -v;
            if (jets == 0)
                out.w0.alt.add(std::move(rest), v);
            else
                out.w1.alt.add(std::move(rest), v);
        }
    }
    return out;
}

namespace dolbeault_detail {

// box c = (c − i c_u)/2,  boxbar c = (c + i c_u)/2
inline Scalar box(const HoloChart& hc, const Scalar& c) {
    Scalar cu = c.derivative(hc.u_cplx());
    return (c - cu * Scalar::iunit(hc.cplx)) * Scalar(hc.cplx, CRat(Rat(1, 2)));
}
inline Scalar boxbar(const HoloChart& hc, const Scalar& c) {
    Scalar cu = c.derivative(hc.u_cplx());
    return (c + cu * Scalar::iunit(hc.cplx)) * Scalar(hc.cplx, CRat(Rat(1, 2)));
}

// d_D of a single pure component, emitted via the callback.
template <typename Emit>
void d_component(const PureAtiyah& p, const IndexTuple& key, const Scalar& c, Emit&& emit) {
    const HoloChart& hc = p.holo();
    int n = hc.n;
    bool has_k = false, has_kb = false;
    IndexTuple e;
    for (int id : key) {
        if (id == p.id_k())
            has_k = true;
        else if (id == p.id_kb())
            has_kb = true;
        else
            e.push_back(id);
    }
    int esz = static_cast<int>(e.size());
    auto with_flags = [&](IndexTuple base, bool k, bool kb) {
        if (k) base.push_back(p.id_k());
        if (kb) base.push_back(p.id_kb());
        return base;
    };
    // coefficient derivatives: dz and dzb directions
    for (int i = 0; i < n; ++i) {
        Scalar dzc = c.derivative(hc.z_cplx(i));
        if (!dzc.is_zero()) {
            IndexTuple t{i};
            t.insert(t.end(), e.begin(), e.end());
            emit(with_flags(std::move(t), has_k, has_kb), dzc);
        }
        Scalar dzbc = c.derivative(hc.zb_cplx(i));
        if (!dzbc.is_zero()) {
            IndexTuple t{n + i};
            t.insert(t.end(), e.begin(), e.end());
            emit(with_flags(std::move(t), has_k, has_kb), dzbc);
        }
    }
    Scalar sign = Scalar(hc.cplx, (esz % 2) ? -1 : 1);
    if (!has_k && !has_kb) {
        emit(with_flags(e, true, false), sign * box(hc, c));
        emit(with_flags(e, false, true), sign * boxbar(hc, c));
    } else if (has_k && !has_kb) {
        emit(with_flags(e, true, true), -sign * boxbar(hc, c));
    } else if (!has_k && has_kb) {
        emit(with_flags(e, true, true), sign * box(hc, c));
    }
    // has_k && has_kb: only the coefficient-derivative terms
}

} // namespace dolbeault_detail

inline PureAtiyah pure_d(const PureAtiyah& p) {
    PureAtiyah out(p.holo(), p.degree() + 1);
    for (const auto& [key, c] : p.comps())
        dolbeault_detail::d_component(p, key, c,
                                      [&](IndexTuple k, const Scalar& v) { out.add(std::move(k), v); });
    return out;
}

// The (0,1)-raising component of d_D (the honest Dolbeault-Atiyah operator).
inline PureAtiyah dbar_D(const PureAtiyah& p) {
    PureAtiyah out(p.holo(), p.degree() + 1);
    for (const auto& [key, c] : p.comps()) {
        auto [r, s] = p.key_bidegree(key);
        dolbeault_detail::d_component(p, key, c, [&](IndexTuple k, const Scalar& v) {
            auto [ro, so] = out.key_bidegree(k);
            if (ro == r && so == s + 1) out.add(std::move(k), v);
        });
    }
    return out;
}

inline PureAtiyah partial_D(const PureAtiyah& p) { return pure_d(p) - dbar_D(p); }

inline PureAtiyah bidegree_project(const PureAtiyah& p, int r, int s) {
    PureAtiyah out(p.holo(), p.degree());
    for (const auto& [key, c] : p.comps()) {
        auto [kr, ks] = p.key_bidegree(key);
        if (kr == r && ks == s) out.add(key, c);
    }
    return out;
}

// Naive Dolbeault operator: dbar = sum_j dzb^j ∧ d/d zb^j (k and kb inert).
inline PureAtiyah dbar_naive(const PureAtiyah& p) {
    const HoloChart& hc = p.holo();
    PureAtiyah out(hc, p.degree() + 1);
    for (const auto& [key, c] : p.comps())
        for (int j = 0; j < hc.n; ++j) {
            Scalar dc = c.derivative(hc.zb_cplx(j));
            if (dc.is_zero()) continue;
            IndexTuple t{hc.n + j};
            t.insert(t.end(), key.begin(), key.end());
            out.add(std::move(t), dc);
        }
    return out;
}

// Polynomial dbar-antiderivative: iterate over zb variables in declared
// order, antidifferentiating termwise in the highest one present. The input
// must be exactly dbar-closed with every term carrying a dzb factor.
inline PureAtiyah dbar_poly_solve(const PureAtiyah& alpha) {
    const HoloChart& hc = alpha.holo();
    if (!dbar_naive(alpha).is_zero()) throw NotClosed("input is not dbar-closed");
    for (const auto& [key, c] : alpha.comps()) {
        bool has = false;
        for (int id : key) has = has || alpha.is_dzb(id);
        if (!has)
            throw NotClosed("dbar-closed input has a component without dzb factor; no primitive exists");
    }
    PureAtiyah beta(hc, alpha.degree() - 1);
    PureAtiyah rem = alpha;
    while (!rem.is_zero()) {
        // highest zb index present as a factor
        int m = -1;
        for (const auto& [key, c] : rem.comps())
            for (int id : key)
                if (rem.is_dzb(id)) m = std::max(m, id - hc.n);
        if (m < 0) throw Error("SolverInternal", "nonzero dbar-closed remainder without dzb factors");
        // split rem = dzb_m ∧ B + C and antidifferentiate B termwise in zb_m
        PureAtiyah binc(hc, alpha.degree() - 1);
        int zbm = hc.zb_cplx(m);
        for (const auto& [key, c] : rem.comps()) {
            int pos = -1;
            for (size_t a = 0; a < key.size(); ++a)
                if (key[a] == hc.n + m) pos = static_cast<int>(a);
            if (pos < 0) continue;
            IndexTuple rest;
            for (size_t a = 0; a < key.size(); ++a)
                if (static_cast<int>(a) != pos) rest.push_back(key[a]);
            Scalar v = (pos % 2) ? -c : c; // sign of moving dzb_m to the front
            // termwise antiderivative in zb_m
            Poly num(hc.cplx);
            if (!v.den().depends_on(zbm)) {
                for (const auto& [e, cc] : v.num().terms()) {
                    Expo f = e;
                    int k = f[static_cast<size_t>(zbm)];
                    f[static_cast<size_t>(zbm)] = k + 1;
                    num.add_term(f, cc / CRat(k + 1));
                }
                binc.add(std::move(rest), Scalar(num, v.den()));
            } else {
                throw Error("SolverInternal", "rational zb-dependence in solver input");
            }
        }
        beta = beta + binc;
        rem = rem - dbar_naive(binc);
    }
    return beta;
}

// Right inverse of dbar_D on exactly closed polynomial Atiyah forms of
// homogeneous degree. Two naive solves as in the vanishing theorem's proof,
// plus a zb-free correction of the first primitive solved by a triangular
// recursion in u (needed so the second stage stays in the image of dbar).
inline PureAtiyah dbar_D_solve(const PureAtiyah& w) {
    const HoloChart& hc = w.holo();
    if (!dbar_D(w).is_zero()) throw NotClosed("input is not dbar_D-closed");
    int deg = w.degree();
    // split w = A + B ∧ kb
    PureAtiyah A(hc, deg), B(hc, deg - 1);
    for (const auto& [key, c] : w.comps()) {
        bool kb = !key.empty() && key.back() == w.id_kb();
        if (kb) {
            IndexTuple rest(key.begin(), key.end() - 1);
            B.add(std::move(rest), c);
        } else {
            A.add(key, c);
        }
    }
    PureAtiyah P = A.is_zero() ? PureAtiyah(hc, deg - 1) : dbar_poly_solve(A);
    int psign = (deg % 2) ? 1 : -1; // (−1)^{|P|}, |P| = deg−1
    auto boxbar_form = [&](const PureAtiyah& f) {
        PureAtiyah out(hc, f.degree());
        for (const auto& [key, c] : f.comps()) out.add(key, dolbeault_detail::boxbar(hc, c));
        return out;
    };
    PureAtiyah R = B - boxbar_form(P).scaled(Scalar(hc.cplx, psign));
    // dzb-free residue of R is zb-independent (closedness); absorb it into P
    // by a zb-free H with boxbar H = (−1)^{|P|} (that residue)
    PureAtiyah R0(hc, deg - 1), Rplus(hc, deg - 1);
    for (const auto& [key, c] : R.comps()) {
        bool has = false;
        for (int id : key) has = has || R.is_dzb(id);
        (has ? Rplus : R0).add(key, c);
    }
    if (!R0.is_zero()) {
        PureAtiyah H(hc, deg - 1);
        int ui = hc.u_cplx();
        for (const auto& [key, c] : R0.comps()) {
            // solve h + i h_u = 2*(−1)^{|P|} c, descending in u-degree
            if (!c.is_polynomial()) throw Error("SolverInternal", "rational residue in solver");
            Poly rhs = c.num().scaled(CRat(2 * psign));
            Poly h(hc.cplx);
            auto by_u = rhs.univariate_in(ui);
            std::map<int, Poly> hu;
            int top = by_u.empty() ? -1 : by_u.rbegin()->first;
            for (int k = top; k >= 0; --k) {
                Poly rk(hc.cplx);
                auto it = by_u.find(k);
                if (it != by_u.end()) rk = it->second;
                auto ith = hu.find(k + 1);
                if (ith != hu.end())
                    rk -= ith->second.scaled(CRat(Rat(0), Rat(k + 1)));
                hu[k] = rk;
            }
            h = Poly::from_univariate(hc.cplx, ui, hu);
            H.add(key, Scalar(h));
        }
        P = P + H;
        R = Rplus; // boxbar H kills R0 exactly
        PureAtiyah check = R0 - boxbar_form(H).scaled(Scalar(hc.cplx, psign));
        if (!check.is_zero()) throw Error("SolverInternal", "u-recursion failed to absorb the residue");
    } else {
        R = Rplus;
    }
    PureAtiyah Q = R.is_zero() ? PureAtiyah(hc, deg - 2) : dbar_poly_solve(R);
    // rho = P + Q ∧ kb
    PureAtiyah rho = P;
    for (const auto& [key, c] : Q.comps()) {
        IndexTuple t = key;
        t.push_back(w.id_kb());
        rho.add(std::move(t), c);
    }
    if (dbar_D(rho) != w) throw Error("SolverInternal", "dbar_D primitive verification failed");
    return rho;
}

// Solve partial_D rho = w by conjugating, solving, conjugating back.
inline PureAtiyah partial_D_solve(const PureAtiyah& w) {
    if (!partial_D(w).is_zero()) throw NotClosed("input is not partial_D-closed");
    return dbar_D_solve(w.conj()).conj();
}

// ---------------------------------------------------------------------------
// The j + i du decomposition of the vanishing theorem's proof
// ---------------------------------------------------------------------------

// Ordinary complex form in du, dz, dzb over the complexified chart
// (du gets id 2n).
struct OrdForm {
    HoloChart hc;
    int degree = 0;
    std::map<IndexTuple, Scalar> comps;

    OrdForm() = default;
    OrdForm(HoloChart h, int d) : hc(std::move(h)), degree(d) {}

    void add(IndexTuple key, const Scalar& c) {
        if (c.is_zero()) return;
        int sign = sort_indices(key);
        if (sign == 0) return;
        Scalar v = sign > 0 ? c : -c;
        auto it = comps.find(key);
        if (it == comps.end())
            comps.emplace(std::move(key), std::move(v));
        else {
            it->second += v;
            if (it->second.is_zero()) comps.erase(it);
        }
    }

    bool is_zero() const { return comps.empty(); }
    friend bool operator==(const OrdForm& a, const OrdForm& b) {
        return a.degree == b.degree && a.comps == b.comps;
    }
};

struct KDecomposition {
    OrdForm w0;
    OrdForm w1;
};

// omega = w0 + w1 ∧ k with k = j + i du and w0, w1 ordinary complex forms.
inline KDecomposition k_decompose(const HoloChart& hc, const AtiyahForm& w) {
    require_same_chart(w.chart(), hc.real);
    int n = hc.n;
    int id_du = 2 * n;
    auto expand_ordinary = [&](const Form& f, OrdForm& out) {
        // real 1-form ids -> {du, dz, dzb} ids
        for (const auto& [t, c] : f.alt.comps()) {
            std::vector<std::pair<IndexTuple, CRat>> acc{{IndexTuple{}, CRat::one()}};
            for (int rid : t) {
                std::vector<std::pair<int, CRat>> img;
                if (rid == 0)
                    img = {{id_du, CRat::one()}};
                else if (rid <= n)
                    img = {{rid - 1, CRat(Rat(1, 2))}, {n + rid - 1, CRat(Rat(1, 2))}};
                else
                    img = {{rid - 1 - n, CRat(Rat(0), Rat(-1, 2))}, {rid - 1, CRat(Rat(0), Rat(1, 2))}};
                std::vector<std::pair<IndexTuple, CRat>> next;
                for (const auto& [k, cc] : acc)
                    for (const auto& [id, fr] : img) {
                        IndexTuple kk = k;
                        kk.push_back(id);
                        next.emplace_back(std::move(kk), cc * fr);
                    }
                acc = std::move(next);
            }
            Scalar base = hc.to_cplx(c);
            for (auto& [k, cc] : acc) out.add(std::move(k), base * Scalar(hc.cplx, cc));
        }
    };
    // w = w0r + w1r ∧ j, j = k − i du  =>  w0 = w0r − i w1r ∧ du, w1 = w1r
    OrdForm w0r(hc, w.degree()), w1r(hc, w.degree() - 1);
    expand_ordinary(w.w0, w0r);
    expand_ordinary(w.w1, w1r);
    OrdForm w0 = w0r;
    Scalar mi = -Scalar::iunit(hc.cplx);
    for (const auto& [key, c] : w1r.comps) {
        IndexTuple t = key;
        t.push_back(id_du);
        w0.add(std::move(t), c * mi);
    }
    return {std::move(w0), std::move(w1r)};
}

// Inverse of k_decompose (returns the Atiyah form on the real chart).
inline AtiyahForm k_recompose(const HoloChart& hc, const KDecomposition& kd) {
    int n = hc.n;
    int id_du = 2 * n;
    int jet_marker = hc.real.dim();
    AtiyahForm out(hc.real, kd.w0.degree);
    CRat iu(Rat(0), Rat(1));
    auto emit = [&](const IndexTuple& key, const Scalar& coeff, bool wedge_k) {
        // ids -> real ids; k = j + i du
        std::vector<std::pair<IndexTuple, CRat>> acc{{IndexTuple{}, CRat::one()}};
        auto push = [&](const std::vector<std::pair<int, CRat>>& img) {
            std::vector<std::pair<IndexTuple, CRat>> next;
            for (const auto& [k, c] : acc)
                for (const auto& [rid, f] : img) {
                    IndexTuple t = k;
                    t.push_back(rid);
                    next.emplace_back(std::move(t), c * f);
                }
            acc = std::move(next);
        };
        for (int id : key) {
            if (id == id_du)
                push({{hc.u_real(), CRat::one()}});
            else if (id < n)
                push({{hc.x_real(id), CRat::one()}, {hc.y_real(id), iu}});
            else
                push({{hc.x_real(id - n), CRat::one()}, {hc.y_real(id - n), -iu}});
        }
        if (wedge_k) push({{jet_marker, CRat::one()}, {hc.u_real(), iu}});
        Scalar base = hc.to_real(coeff);
        for (auto& [t, c] : acc) {
            int jets = 0, moves = 0;
            IndexTuple rest;
            for (size_t a = 0; a < t.size(); ++a) {
                if (t[a] == jet_marker) {
                    ++jets;
                    moves += static_cast<int>(t.size() - 1 - a);
                } else
                    rest.push_back(t[a]);
            }
            if (jets > 1) continue;
            Scalar v = base * Scalar(hc.real, c);
            if (moves % 2) v = -v;
            if (jets == 0)
                out.w0.alt.add(std::move(rest), v);
            else
                out.w1.alt.add(std::move(rest), v);
        }
    };
    for (const auto& [key, c] : kd.w0.comps) emit(key, c, false);
    for (const auto& [key, c] : kd.w1.comps) emit(key, c, true);
    return out;
}

} // namespace djc
