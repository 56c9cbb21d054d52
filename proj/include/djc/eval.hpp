#pragma once

#include "djc/dsl.hpp"
#include "djc/random_gen.hpp"

namespace djc::dsl {

// Chart-free values that acquire a chart on first contact with charted data:
// plain numbers and multiples of the unit jet / unit derivation.
struct PendingUnit {
    enum Kind { JetUnit, DerivUnit } kind;
    CRat coeff{1};
};

using Value = std::variant<CRat, Scalar, Vec, Form, Multivec, Endo11, Derivation, Jet, AtiyahForm,
                           OmniSection, Frame, JacobiPair, HomPoisson, GaugeEndo, GenContactOp,
                           HomGC, AlmostContact, JacobiInverse, PendingUnit, Chart>;

inline std::string value_kind(const Value& v) {
    static const char* names[] = {"number",    "scalar",     "vector",    "form",
                                  "multivec",  "endo",       "derivation", "jet",
                                  "atiyah",    "omni",       "frame",     "jacobi-pair",
                                  "hom-poisson", "gauge-endo", "gen-contact", "hom-gc",
                                  "almost-contact", "jacobi-inverse", "pending-unit", "chart"};
    return names[v.index()];
}

class Evaluator {
public:
    Evaluator() = default;

    void declare_chart(const std::string& name, Chart chart) {
        charts_[name] = std::move(chart);
        chart_order_.push_back(name);
    }

    const Chart& chart(const std::string& name) const {
        auto it = charts_.find(name);
        if (it == charts_.end()) throw UnknownIdentifier("chart '" + name + "' is not declared");
        return it->second;
    }

    const Chart& sole_chart() const {
        if (charts_.size() != 1)
            throw UnknownIdentifier("an unqualified literal needs a unique chart; qualify it");
        return charts_.begin()->second;
    }

    // chart owning coordinate `name`; must be unique across declared charts
    const Chart& chart_of_coordinate(const std::string& name) const {
        const Chart* found = nullptr;
        for (const auto& [cn, c] : charts_) {
            if (c.has(name)) {
                if (found) throw UnknownIdentifier("coordinate '" + name + "' is ambiguous; qualify it");
                found = &c;
            }
        }
        if (!found) throw UnknownCoordinate("no declared chart has coordinate '" + name + "'");
        return *found;
    }

    void declare_sample(const Chart& c, SamplePoint pt) { samples_[key_of(c)].push_back(std::move(pt)); }

    void set_extra_samples(int k, uint64_t seed) {
        extra_samples_ = k;
        extra_seed_ = seed;
    }

    void set_max_degree(int d) { max_degree_ = d; }

    void bind(const std::string& name, Value v) {
        check_degree(v);
        env_[name] = std::move(v);
    }

    bool has(const std::string& name) const { return env_.count(name) > 0; }

    const Value& lookup(const std::string& name) const {
        auto it = env_.find(name);
        if (it == env_.end()) throw UnknownIdentifier("'" + name + "' is not bound");
        return it->second;
    }

    Value eval(const Expr& e) {
        Value v = eval_raw(e);
        if (auto* f = std::get_if<Frame>(&v)) attach_samples(*f);
        return v;
    }

    // --- public helpers used by the runner -----------------------------

    Frame as_frame(const Value& v) const {
        if (auto* f = std::get_if<Frame>(&v)) return *f;
        throw Error("Type", "expected a frame, got " + value_kind(v));
    }

    JacobiPair as_jacobi(const Value& v) const {
        if (auto* j = std::get_if<JacobiPair>(&v)) return *j;
        throw Error("Type", "expected a Jacobi pair, got " + value_kind(v));
    }

    HomPoisson as_hom_poisson(const Value& v) const {
        if (auto* h = std::get_if<HomPoisson>(&v)) return *h;
        throw Error("Type", "expected a homogeneous Poisson pair, got " + value_kind(v));
    }

    static std::string to_display(const Value& v);

    void attach_samples(Frame& f) const {
        auto it = samples_.find(key_of(f.chart()));
        if (it != samples_.end())
            for (const auto& pt : it->second) f.declare_sample(pt);
        if (extra_samples_ > 0) {
            Rng rng(extra_seed_);
            for (int k = 0; k < extra_samples_; ++k) {
                std::vector<Rat> vals;
                for (int i = 0; i < f.chart().dim(); ++i) vals.push_back(rng.rat(4, 3));
                f.declare_sample(SamplePoint(f.chart(), std::move(vals)));
            }
        }
    }

private:
    static std::string key_of(const Chart& c) {
        std::string k;
        for (const auto& n : c.names()) k += n + ",";
        return k;
    }

    void check_degree(const Value& v) const;

    Value eval_raw(const Expr& e);
    Value eval_call(const Expr& e);
    Value binary(char op, Value a, Value b, const Expr& where);
    Value resolve_basis(const Chart& c, const std::string& name);

    std::map<std::string, Chart> charts_;
    std::vector<std::string> chart_order_;
    std::map<std::string, Value> env_;
    std::map<std::string, std::vector<SamplePoint>> samples_;
    int extra_samples_ = 0;
    uint64_t extra_seed_ = 0;
    int max_degree_ = 64;
};

// ---------------------------------------------------------------------------

inline std::string Evaluator::to_display(const Value& v) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, CRat>) return to_string(x);
            else if constexpr (std::is_same_v<T, Scalar>) return to_string(x);
            else if constexpr (std::is_same_v<T, Vec>) return to_string(x);
            else if constexpr (std::is_same_v<T, Form>) return to_string(x);
            else if constexpr (std::is_same_v<T, Multivec>) return to_string(x);
            else if constexpr (std::is_same_v<T, Derivation>) return to_string(x);
            else if constexpr (std::is_same_v<T, Jet>) return to_string(x);
            else if constexpr (std::is_same_v<T, AtiyahForm>) return to_string(x);
            else if constexpr (std::is_same_v<T, OmniSection>) return to_string(x);
            else if constexpr (std::is_same_v<T, Frame>) {
                std::string s = "frame{";
                for (int i = 0; i < x.size(); ++i) {
                    if (i) s += "; ";
                    s += to_string(x.generators()[static_cast<size_t>(i)]);
                }
                return s + "}";
            } else if constexpr (std::is_same_v<T, JacobiPair>)
                return "jacobi(" + to_string(x.lam) + "; " + to_string(x.e) + ")";
            else if constexpr (std::is_same_v<T, HomPoisson>)
                return "hom_poisson(" + to_string(x.pi) + "; " + to_string(x.z) + ")";
            else if constexpr (std::is_same_v<T, JacobiInverse>)
                return "(omega = " + to_string(x.omega) + ", theta = " + to_string(x.theta) + ")";
            else
                return "<" + std::string(typeid(T).name()) + ">";
        },
        v);
}

inline void Evaluator::check_degree(const Value& v) const {
    auto chk = [&](const Scalar& s) {
        if (s.num().total_degree() > max_degree_ || s.den().total_degree() > max_degree_)
            throw Error("MaxDegreeExceeded", "expression degree exceeds --max-degree");
    };
    if (auto* s = std::get_if<Scalar>(&v)) chk(*s);
    if (auto* f = std::get_if<Form>(&v))
        for (const auto& [i, c] : f->alt.comps()) chk(c);
    if (auto* m = std::get_if<Multivec>(&v))
        for (const auto& [i, c] : m->alt.comps()) chk(c);
}

inline Value Evaluator::resolve_basis(const Chart& c, const std::string& name) {
    // "d<coord>" differential, "<coord>" scalar, "j"/"one": handled elsewhere
    if (c.has(name)) return Scalar::coordinate(c, name);
    if (name.size() > 1 && name[0] == 'd' && c.has(name.substr(1)))
        return Form::dcoord(c, name.substr(1));
    throw UnknownIdentifier("'" + name + "' is neither bound nor a coordinate expression");
}

inline Value Evaluator::eval_raw(const Expr& e) {
    switch (e.kind) {
        case Expr::Number: {
            Rat r(e.text);
            r.canonicalize();
            return CRat(r);
        }
        case Expr::AtVec: {
            const Chart& c = chart_of_coordinate(e.text);
            return Vec::basis(c, e.text);
        }
        case Expr::Qualified: {
            auto dot = e.text.find('.');
            const Chart& c = chart(e.text.substr(0, dot));
            std::string member = e.text.substr(dot + 1);
            if (member == "j") return Value(Jet::unit(c));
            if (member == "one") return Value(Derivation::unit(c));
            return resolve_basis(c, member);
        }
        case Expr::Ident: {
            if (has(e.text)) return lookup(e.text);
            if (auto it = charts_.find(e.text); it != charts_.end()) return Value(it->second);
            if (e.text == "i") return CRat::iunit();
            if (e.text == "j") return Value(PendingUnit{PendingUnit::JetUnit, CRat::one()});
            if (e.text == "one") return Value(PendingUnit{PendingUnit::DerivUnit, CRat::one()});
            // coordinate or differential on the chart owning it
            for (const auto& [cn, c] : charts_) {
                if (c.has(e.text)) return Scalar::coordinate(chart_of_coordinate(e.text), e.text);
                if (e.text.size() > 1 && e.text[0] == 'd' && c.has(e.text.substr(1)))
                    return Form::dcoord(chart_of_coordinate(e.text.substr(1)), e.text.substr(1));
            }
            throw UnknownIdentifier("'" + e.text + "' is not bound");
        }
        case Expr::Unary: {
            Value v = eval_raw(*e.args[0]);
            return std::visit(
                [&](auto& x) -> Value {
                    using T = std::decay_t<decltype(x)>;
                    if constexpr (std::is_same_v<T, PendingUnit>)
                        return PendingUnit{x.kind, -x.coeff};
                    else if constexpr (std::is_same_v<T, CRat> || std::is_same_v<T, Scalar> ||
                                       std::is_same_v<T, Vec> || std::is_same_v<T, Form> ||
                                       std::is_same_v<T, Multivec> || std::is_same_v<T, Endo11> ||
                                       std::is_same_v<T, Derivation> || std::is_same_v<T, Jet> ||
                                       std::is_same_v<T, AtiyahForm> || std::is_same_v<T, OmniSection>)
                        return -x;
                    else
                        throw Error("Type", "cannot negate " + value_kind(v));
                },
                v);
        }
        case Expr::Binary:
            return binary(e.op, eval_raw(*e.args[0]), eval_raw(*e.args[1]), e);
        case Expr::Call:
            return eval_call(e);
    }
    throw Error("Internal", "unhandled expression kind");
}

} // namespace djc::dsl

#include "djc/eval_ops.hpp"
