#pragma once

// Operator dispatch and builtin functions of the DSL evaluator.
// Included from eval.hpp.

namespace djc::dsl {

namespace eval_detail {

inline long small_int(const CRat& c, const char* what) {
    if (!c.is_real() || c.re.get_den() != 1) throw Error("Type", std::string(what) + " must be an integer");
    if (!c.re.get_num().fits_slong_p()) throw Error("Type", std::string(what) + " is out of range");
    return c.re.get_num().get_si();
}

} // namespace eval_detail

inline Value Evaluator::binary(char op, Value a, Value b, const Expr& where) {
    using eval_detail::small_int;
    auto type_error = [&]() -> Value {
        throw Error("Type", std::string("operator '") + op + "' undefined for " + value_kind(a) +
                                " and " + value_kind(b));
    };

    // numbers
    if (auto* na = std::get_if<CRat>(&a)) {
        if (auto* nb = std::get_if<CRat>(&b)) {
            switch (op) {
                case '+': return *na + *nb;
                case '-': return *na - *nb;
                case '*': return *na * *nb;
                case '/': return *na / *nb;
                case '^': {
                    long k = small_int(*nb, "exponent");
                    CRat r = CRat::one();
                    for (long i = 0; i < std::abs(k); ++i) r *= *na;
                    if (k < 0) r = CRat::one() / r;
                    return r;
                }
            }
        }
    }

    // pending units: combine with numbers/scalars, materialize against charted values
    if (auto* pa = std::get_if<PendingUnit>(&a)) {
        if (auto* nb = std::get_if<CRat>(&b)) {
            if (op == '*') return PendingUnit{pa->kind, pa->coeff * *nb};
            if (op == '/') return PendingUnit{pa->kind, pa->coeff / *nb};
        }
        if (auto* pb = std::get_if<PendingUnit>(&b); pb && pa->kind == pb->kind && (op == '+' || op == '-')) {
            return PendingUnit{pa->kind, op == '+' ? pa->coeff + pb->coeff : pa->coeff - pb->coeff};
        }
    }
    if (auto* pb = std::get_if<PendingUnit>(&b)) {
        if (auto* na = std::get_if<CRat>(&a); na && op == '*') return PendingUnit{pb->kind, *na * pb->coeff};
    }

    auto materialize = [&](const PendingUnit& p, const Chart& c) -> Value {
        if (p.kind == PendingUnit::JetUnit) return Jet(Form(c, 1), Scalar(c, p.coeff));
        return Derivation(Vec(c), Scalar(c, p.coeff));
    };

    // find a chart from either side to materialize pendings / numbers
    auto chart_hint = [&](const Value& v) -> const Chart* {
        return std::visit(
            [](const auto& x) -> const Chart* {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, Scalar>) return &x.chart();
                else if constexpr (std::is_same_v<T, Vec>) return &x.chart;
                else if constexpr (std::is_same_v<T, Form> || std::is_same_v<T, Multivec>)
                    return &x.chart();
                else if constexpr (std::is_same_v<T, Endo11>) return &x.chart;
                else if constexpr (std::is_same_v<T, Derivation> || std::is_same_v<T, Jet> ||
                                   std::is_same_v<T, AtiyahForm> || std::is_same_v<T, OmniSection>)
                    return &x.chart();
                else
                    return nullptr;
            },
            v);
    };

    if (std::holds_alternative<PendingUnit>(a)) {
        const Chart* c = chart_hint(b);
        if (c) return binary(op, materialize(std::get<PendingUnit>(a), *c), b, where);
    }
    if (std::holds_alternative<PendingUnit>(b)) {
        const Chart* c = chart_hint(a);
        if (c) return binary(op, a, materialize(std::get<PendingUnit>(b), *c), where);
    }

    // numbers against charted values: promote to scalar on that chart
    if (std::holds_alternative<CRat>(a)) {
        const Chart* c = chart_hint(b);
        if (c) return binary(op, Scalar(*c, std::get<CRat>(a)), b, where);
    }
    if (std::holds_alternative<CRat>(b)) {
        const Chart* c = chart_hint(a);
        if (c) return binary(op, a, Scalar(*c, std::get<CRat>(b)), where);
    }

    auto* sa = std::get_if<Scalar>(&a);
    auto* sb = std::get_if<Scalar>(&b);

    switch (op) {
        case '^': {
            if (sa && sb) {
                if (!sb->is_constant()) throw Error("Type", "exponent must be constant");
                return sa->pow(static_cast<int>(small_int(sb->constant_value(), "exponent")));
            }
            if (auto* fa = std::get_if<Form>(&a)) {
                if (auto* fb = std::get_if<Form>(&b)) return wedge(*fa, *fb);
                if (auto* jb = std::get_if<Jet>(&b)) {
                    // form ∧ jet is defined for the unit jet direction only
                    if (jb->eta.is_zero())
                        return AtiyahForm(Form(fa->chart(), fa->degree() + 1), fa->scaled(jb->g));
                }
            }
            if (auto* va = std::get_if<Vec>(&a)) {
                if (auto* vb = std::get_if<Vec>(&b)) return wedge(Multivec(*va), Multivec(*vb));
                if (auto* mb = std::get_if<Multivec>(&b)) return wedge(Multivec(*va), *mb);
            }
            if (auto* ma = std::get_if<Multivec>(&a)) {
                if (auto* vb = std::get_if<Vec>(&b)) return wedge(*ma, Multivec(*vb));
                if (auto* mb = std::get_if<Multivec>(&b)) return wedge(*ma, *mb);
            }
            return type_error();
        }
        case '*': {
            if (sa && sb) return *sa * *sb;
            auto scale = [&](const Scalar& s, Value& v) -> Value {
                return std::visit(
                    [&](auto& x) -> Value {
                        using T = std::decay_t<decltype(x)>;
                        if constexpr (std::is_same_v<T, Vec> || std::is_same_v<T, Form> ||
                                      std::is_same_v<T, Multivec> || std::is_same_v<T, Endo11> ||
                                      std::is_same_v<T, Derivation> || std::is_same_v<T, Jet> ||
                                      std::is_same_v<T, AtiyahForm> || std::is_same_v<T, OmniSection>)
                            return x.scaled(s);
                        else
                            return type_error();
                    },
                    v);
            };
            if (sa) return scale(*sa, b);
            if (sb) return scale(*sb, a);
            return type_error();
        }
        case '/': {
            if (sa && sb) return *sa / *sb;
            if (sb) {
                Scalar inv = Scalar(sb->chart(), 1) / *sb;
                return binary('*', std::move(a), inv, where);
            }
            return type_error();
        }
        case '+':
        case '-': {
            bool minus = (op == '-');
            auto add2 = [&](auto x, auto y) -> Value { return minus ? Value(x - y) : Value(x + y); };
            if (sa && sb) return add2(*sa, *sb);
            if (auto* fa = std::get_if<Form>(&a)) {
                if (auto* fb = std::get_if<Form>(&b)) return add2(*fa, *fb);
                if (auto* jb = std::get_if<Jet>(&b)) {
                    if (fa->degree() == 1) return add2(Jet::form(*fa), *jb);
                }
                if (auto* wb = std::get_if<AtiyahForm>(&b)) return add2(AtiyahForm::embed(*fa), *wb);
            }
            if (auto* ja = std::get_if<Jet>(&a)) {
                if (auto* jb = std::get_if<Jet>(&b)) return add2(*ja, *jb);
                if (auto* fb = std::get_if<Form>(&b)) {
                    if (fb->degree() == 1) return add2(*ja, Jet::form(*fb));
                }
            }
            if (auto* va = std::get_if<Vec>(&a)) {
                if (auto* vb = std::get_if<Vec>(&b)) return add2(*va, *vb);
                if (auto* db = std::get_if<Derivation>(&b)) return add2(Derivation::vector(*va), *db);
                if (sb) return add2(Derivation::vector(*va), Derivation(Vec(sb->chart()), *sb));
            }
            if (auto* da = std::get_if<Derivation>(&a)) {
                if (auto* db = std::get_if<Derivation>(&b)) return add2(*da, *db);
                if (auto* vb = std::get_if<Vec>(&b)) return add2(*da, Derivation::vector(*vb));
                if (sb) return add2(*da, Derivation(Vec(sb->chart()), *sb));
            }
            if (sa) {
                if (auto* vb = std::get_if<Vec>(&b))
                    return add2(Derivation(Vec(sa->chart()), *sa), Derivation::vector(*vb));
                if (auto* db = std::get_if<Derivation>(&b))
                    return add2(Derivation(Vec(sa->chart()), *sa), *db);
            }
            if (auto* ma = std::get_if<Multivec>(&a)) {
                if (auto* mb = std::get_if<Multivec>(&b)) return add2(*ma, *mb);
                if (auto* vb = std::get_if<Vec>(&b)) return add2(*ma, Multivec(*vb));
            }
            if (auto* va2 = std::get_if<Vec>(&a)) {
                if (auto* mb = std::get_if<Multivec>(&b)) return add2(Multivec(*va2), *mb);
            }
            if (auto* wa = std::get_if<AtiyahForm>(&a)) {
                if (auto* wb = std::get_if<AtiyahForm>(&b)) return add2(*wa, *wb);
                if (auto* fb = std::get_if<Form>(&b)) return add2(*wa, AtiyahForm::embed(*fb));
                if (auto* jb = std::get_if<Jet>(&b)) {
                    if (wa->degree() == 1) return add2(*wa, AtiyahForm::from_jet(*jb));
                }
            }
            if (auto* oa = std::get_if<OmniSection>(&a)) {
                if (auto* ob = std::get_if<OmniSection>(&b)) return add2(*oa, *ob);
            }
            if (auto* ea = std::get_if<Endo11>(&a)) {
                if (auto* eb = std::get_if<Endo11>(&b)) return add2(*ea, *eb);
            }
            if (auto* ga = std::get_if<GaugeEndo>(&a)) {
                if (auto* gb = std::get_if<GaugeEndo>(&b)) return add2(*ga, *gb);
            }
            return type_error();
        }
    }
    return type_error();
}

inline Value Evaluator::eval_call(const Expr& e) {
    using eval_detail::small_int;
    const std::string& fn = e.text;
    auto argc = e.args.size();
    auto need = [&](size_t lo, size_t hi = 0) {
        size_t h = hi ? hi : lo;
        if (argc < lo || argc > h)
            throw Error("Type", fn + " takes " + std::to_string(lo) +
                                    (h != lo ? ".." + std::to_string(h) : "") + " arguments");
    };
    auto arg = [&](size_t i) { return eval(*e.args[i]); };
    auto arg_int = [&](size_t i) {
        Value v = arg(i);
        if (auto* n = std::get_if<CRat>(&v)) return small_int(*n, "argument");
        if (auto* s = std::get_if<Scalar>(&v); s && s->is_constant())
            return small_int(s->constant_value(), "argument");
        throw Error("Type", fn + " expects an integer argument");
    };
    auto raw_name = [&](size_t i) -> std::string {
        if (e.args[i]->kind != Expr::Ident)
            throw Error("Type", fn + " expects a bare name at argument " + std::to_string(i + 1));
        return e.args[i]->text;
    };
    auto get = [&]<typename T>(Value v, const char* what) -> T {
        if (auto* p = std::get_if<T>(&v)) return *p;
        throw Error("Type", fn + ": expected " + what + ", got " + value_kind(v));
    };
    auto as_scalar = [&](size_t i) -> Scalar {
        Value v = arg(i);
        if (auto* s = std::get_if<Scalar>(&v)) return *s;
        if (auto* n = std::get_if<CRat>(&v)) return Scalar(sole_chart(), *n);
        throw Error("Type", fn + ": expected scalar, got " + value_kind(v));
    };
    auto as_form = [&](Value v, int degree) -> Form {
        if (auto* f = std::get_if<Form>(&v)) {
            if (degree >= 0 && f->degree() != degree)
                throw Error("Type", fn + ": form has wrong degree");
            return *f;
        }
        if (auto* s = std::get_if<Scalar>(&v); s && degree <= 0) return Form::scalar(*s);
        throw Error("Type", fn + ": expected form, got " + value_kind(v));
    };
    auto as_derivation = [&](Value v) -> Derivation {
        if (auto* d = std::get_if<Derivation>(&v)) return *d;
        if (auto* x = std::get_if<Vec>(&v)) return Derivation::vector(*x);
        if (auto* p = std::get_if<PendingUnit>(&v); p && p->kind == PendingUnit::DerivUnit)
            return Derivation(Vec(sole_chart()), Scalar(sole_chart(), p->coeff));
        throw Error("Type", fn + ": expected derivation, got " + value_kind(v));
    };
    auto as_jet = [&](Value v) -> Jet {
        if (auto* j = std::get_if<Jet>(&v)) return *j;
        if (auto* f = std::get_if<Form>(&v); f && f->degree() == 1) return Jet::form(*f);
        if (auto* p = std::get_if<PendingUnit>(&v); p && p->kind == PendingUnit::JetUnit)
            return Jet(Form(sole_chart(), 1), Scalar(sole_chart(), p->coeff));
        throw Error("Type", fn + ": expected jet, got " + value_kind(v));
    };
    auto as_atiyah2 = [&](Value v) -> AtiyahForm {
        if (auto* w = std::get_if<AtiyahForm>(&v)) return *w;
        if (auto* f = std::get_if<Form>(&v); f && f->degree() == 2) return AtiyahForm::embed(*f);
        throw Error("Type", fn + ": expected an Atiyah 2-form, got " + value_kind(v));
    };
    auto as_omni = [&](Value v) -> OmniSection {
        if (auto* o = std::get_if<OmniSection>(&v)) return *o;
        throw Error("Type", fn + ": expected an omni section, got " + value_kind(v));
    };
    auto as_jacobi_args = [&]() -> JacobiPair {
        if (argc >= 1) {
            Value v0 = arg(0);
            if (auto* j = std::get_if<JacobiPair>(&v0)) return *j;
            if (argc >= 2) {
                Multivec lam = get.operator()<Multivec>(v0, "bivector");
                Vec ev = get.operator()<Vec>(arg(1), "vector");
                return JacobiPair(lam, ev);
            }
        }
        throw Error("Type", fn + " expects a Jacobi pair or (bivector, vector)");
    };
    auto chart_arg = [&](size_t i) -> Chart {
        Value v = arg(i);
        if (auto* c = std::get_if<Chart>(&v)) return *c;
        throw Error("Type", fn + ": expected a chart name, got " + value_kind(v));
    };

    if (fn == "deriv") {
        need(1, 2);
        Derivation d = as_derivation(arg(0));
        if (argc == 2) d.f = d.f + as_scalar(1);
        return d;
    }
    if (fn == "jet") {
        need(1, 2);
        Jet j = as_jet(arg(0));
        if (argc == 2) j.g = j.g + as_scalar(1);
        return j;
    }
    if (fn == "omni") {
        need(2);
        return OmniSection(as_derivation(arg(0)), as_jet(arg(1)));
    }
    if (fn == "atiyah") {
        need(2);
        Value w0 = arg(0), w1 = arg(1);
        Form f0 = as_form(w0, -1);
        if (auto* s = std::get_if<Scalar>(&w1)) return AtiyahForm(f0, Form::scalar(*s));
        return AtiyahForm(f0, as_form(w1, f0.degree() - 1));
    }
    if (fn == "frame") {
        need(1, 64);
        std::vector<OmniSection> gens;
        for (size_t i = 0; i < argc; ++i) gens.push_back(as_omni(arg(i)));
        return Frame(gens.front().chart(), std::move(gens));
    }
    if (fn == "conj") {
        need(1);
        Value v = arg(0);
        if (auto* s = std::get_if<Scalar>(&v)) return s->conj();
        if (auto* f = std::get_if<Form>(&v)) return f->conj();
        if (auto* m = std::get_if<Multivec>(&v)) return m->conj();
        if (auto* o = std::get_if<OmniSection>(&v)) return o->conj();
        if (auto* fr = std::get_if<Frame>(&v)) return fr->conj();
        if (auto* n = std::get_if<CRat>(&v)) return n->conj();
        throw Error("Type", "conj undefined for " + value_kind(v));
    }
    if (fn == "re" || fn == "im") {
        need(1);
        Scalar s = as_scalar(0);
        return fn == "re" ? s.re() : s.im();
    }
    if (fn == "pair") {
        need(2);
        return omni_pair(as_omni(arg(0)), as_omni(arg(1)));
    }
    if (fn == "jet_pair") {
        need(2);
        return jet_pair(as_jet(arg(0)), as_derivation(arg(1)));
    }
    if (fn == "dorfman") {
        need(2);
        return dorfman(as_omni(arg(0)), as_omni(arg(1)));
    }
    if (fn == "bfield" || fn == "bfield_unchecked") {
        need(2);
        AtiyahForm b = as_atiyah2(arg(0));
        Value x = arg(1);
        bool unchecked = (fn == "bfield_unchecked");
        if (auto* fr = std::get_if<Frame>(&x)) return bfield(b, *fr, unchecked);
        return bfield(b, as_omni(x), unchecked);
    }
    if (fn == "graph") {
        need(1);
        Value v = arg(0);
        if (auto* j = std::get_if<JacobiPair>(&v)) return graph_jacobi(j->lam, j->e);
        return graph_atiyah(as_atiyah2(v));
    }
    if (fn == "complex_graph") {
        need(1);
        JacobiPair j = as_jacobi_args();
        return graph_jacobi_complex(j.lam, j.e);
    }
    if (fn == "gauge_frame" || fn == "jet_frame") {
        need(0, 1);
        Chart c = argc ? chart_arg(0) : sole_chart();
        return fn == "gauge_frame" ? gauge_frame(c) : jet_frame(c);
    }
    if (fn == "eigenframe") {
        need(1);
        return eigenframe(get.operator()<GenContactOp>(arg(0), "generalized contact operator"));
    }
    if (fn == "build_frame") {
        need(1);
        return build_L_JZ(get.operator()<HomGC>(arg(0), "hom-gc structure"));
    }
    if (fn == "dazord") {
        need(1);
        return dazord_frame(as_hom_poisson(arg(0)));
    }
    if (fn == "star") {
        need(2);
        return star(as_frame(arg(0)), as_frame(arg(1)));
    }
    if (fn == "flat_product") {
        need(2);
        return flat_product(as_frame(arg(0)), as_frame(arg(1)));
    }
    if (fn == "backward_projection") {
        need(2);
        return backward_projection(as_frame(arg(0)), chart(raw_name(1)));
    }
    if (fn == "backward_embedding") {
        need(2, 16);
        std::vector<std::string> coords;
        for (size_t i = 1; i < argc; ++i) coords.push_back(raw_name(i));
        return backward_embedding(as_frame(arg(0)), coords);
    }
    if (fn == "varpi") {
        need(3);
        return varpi(as_frame(arg(0)), as_derivation(arg(1)), as_derivation(arg(2)));
    }
    if (fn == "jacobi") {
        need(2);
        return JacobiPair(get.operator()<Multivec>(arg(0), "bivector"),
                          get.operator()<Vec>(arg(1), "vector"));
    }
    if (fn == "hom_poisson") {
        need(2);
        return HomPoisson(get.operator()<Multivec>(arg(0), "bivector"),
                          get.operator()<Vec>(arg(1), "vector"));
    }
    if (fn == "hom_gc") {
        need(5);
        return HomGC(get.operator()<Endo11>(arg(0), "endomorphism"),
                     get.operator()<Multivec>(arg(1), "bivector"), as_form(arg(2), 2),
                     get.operator()<Vec>(arg(3), "vector"), as_form(arg(4), 1));
    }
    if (fn == "nacs") {
        need(3, 4);
        AlmostContact t(get.operator()<Endo11>(arg(0), "(1,1)-tensor"),
                        get.operator()<Vec>(arg(1), "vector"), as_form(arg(2), 1));
        if (argc == 4) t.g = as_scalar(3);
        return t;
    }
    if (fn == "nacs_normal") {
        need(1, 2);
        Scalar f = as_scalar(0);
        Chart c = argc == 2 ? chart_arg(1) : f.chart();
        return nacs_normal_form(c, f.chart() == c ? f : f.transported(c));
    }
    if (fn == "to_phi") {
        need(1);
        return nacs_to_phi(get.operator()<AlmostContact>(arg(0), "almost contact structure"));
    }
    if (fn == "gauge_transform") {
        need(2);
        return nacs_gauge_transform(get.operator()<AlmostContact>(arg(0), "almost contact structure"),
                                    as_scalar(1));
    }
    if (fn == "contact_k") {
        need(1);
        return GenContactOp::contact(as_jacobi_args());
    }
    if (fn == "complex_k") {
        need(1);
        return GenContactOp::complex_type(get.operator()<GaugeEndo>(arg(0), "gauge endomorphism"));
    }
    if (fn == "block_k") {
        need(3);
        GaugeEndo phi = get.operator()<GaugeEndo>(arg(0), "gauge endomorphism");
        JacobiPair j = get.operator()<JacobiPair>(arg(1), "Jacobi pair");
        AtiyahForm om = as_atiyah2(arg(2));
        return GenContactOp::from_blocks(phi, jacobi_sharp_matrix(j.lam, j.e), atiyah_flat_matrix(om));
    }
    if (fn == "kconj") { // B-field conjugation of an operator
        need(2);
        return get.operator()<GenContactOp>(arg(0), "generalized contact operator")
            .bfield_conjugated(as_atiyah2(arg(1)));
    }
    if (fn == "tens") {
        need(2);
        return Endo11::tensor(as_form(arg(0), 1), get.operator()<Vec>(arg(1), "vector"));
    }
    if (fn == "dtens") {
        need(2);
        return GaugeEndo::tensor(as_jet(arg(0)), as_derivation(arg(1)));
    }
    if (fn == "idT") {
        need(0, 1);
        return Endo11::identity(argc ? chart_arg(0) : sole_chart());
    }
    if (fn == "homogenize") {
        need(1);
        return homogenize(as_derivation(arg(0)));
    }
    if (fn == "homogenize_endo") {
        need(1);
        GaugeEndo phi = get.operator()<GaugeEndo>(arg(0), "gauge endomorphism");
        return homogenize_endo(phi.m, phi.chart);
    }
    if (fn == "d") {
        need(1);
        return d(as_form(arg(0), -1));
    }
    if (fn == "atiyah_d") {
        need(1);
        Value v = arg(0);
        if (auto* w = std::get_if<AtiyahForm>(&v)) return atiyah_d(*w);
        if (auto* f = std::get_if<Form>(&v)) return atiyah_d(AtiyahForm::embed(*f));
        if (auto* j = std::get_if<Jet>(&v)) return atiyah_d(AtiyahForm::from_jet(*j));
        if (auto* s = std::get_if<Scalar>(&v)) return AtiyahForm::from_jet(jet_prolong(*s));
        throw Error("Type", "atiyah_d undefined for " + value_kind(v));
    }
    if (fn == "j1") {
        need(1);
        return jet_prolong(as_scalar(0));
    }
    if (fn == "lie") {
        need(2);
        Vec x = get.operator()<Vec>(arg(0), "vector");
        Value t = arg(1);
        if (auto* f = std::get_if<Form>(&t)) return lie(x, *f);
        if (auto* v = std::get_if<Vec>(&t)) return lie(x, *v);
        if (auto* m = std::get_if<Multivec>(&t)) return lie(x, *m);
        if (auto* en = std::get_if<Endo11>(&t)) return lie(x, *en);
        throw Error("Type", "lie undefined for " + value_kind(t));
    }
    if (fn == "atiyah_lie") {
        need(2);
        return atiyah_lie(as_derivation(arg(0)), get.operator()<AtiyahForm>(arg(1), "Atiyah form"));
    }
    if (fn == "interior") {
        need(2);
        Value xv = arg(0), t = arg(1);
        if (auto* dv = std::get_if<Derivation>(&xv))
            return atiyah_interior(*dv, get.operator()<AtiyahForm>(t, "Atiyah form"));
        Vec x = get.operator()<Vec>(xv, "vector");
        if (auto* w = std::get_if<AtiyahForm>(&t)) return atiyah_interior(Derivation::vector(x), *w);
        return interior(x, as_form(t, -1));
    }
    if (fn == "schouten") {
        need(2);
        auto as_mv = [&](Value v) {
            if (auto* m = std::get_if<Multivec>(&v)) return *m;
            return Multivec(get.operator()<Vec>(v, "multivector"));
        };
        return schouten(as_mv(arg(0)), as_mv(arg(1)));
    }
    if (fn == "split_contact") {
        need(2, 3);
        if (argc == 2) return split_contact(as_hom_poisson(arg(0)), static_cast<int>(arg_int(1)));
        return split_contact(HomPoisson(get.operator()<Multivec>(arg(0), "bivector"),
                                        get.operator()<Vec>(arg(1), "vector")),
                             static_cast<int>(arg_int(2)));
    }
    if (fn == "split_lcs") {
        need(2, 3);
        if (argc == 2)
            return split_lcs(get.operator()<JacobiPair>(arg(0), "Jacobi pair"),
                             static_cast<int>(arg_int(1)));
        return split_lcs(JacobiPair(get.operator()<Multivec>(arg(0), "bivector"),
                                    get.operator()<Vec>(arg(1), "vector")),
                         static_cast<int>(arg_int(2)));
    }
    if (fn == "lcs_to_jacobi") {
        need(2);
        return lcs_to_jacobi(as_form(arg(0), 2), as_form(arg(1), 1));
    }
    if (fn == "invert_jacobi") {
        need(1);
        return invert_jacobi(as_jacobi_args());
    }
    if (fn == "invert_omega") {
        need(1);
        return invert_jacobi(as_jacobi_args()).omega;
    }
    if (fn == "invert_theta") {
        need(1);
        return invert_jacobi(as_jacobi_args()).theta;
    }
    if (fn == "lam_of") {
        need(1);
        return get.operator()<JacobiPair>(arg(0), "Jacobi pair").lam;
    }
    if (fn == "e_of") {
        need(1);
        return get.operator()<JacobiPair>(arg(0), "Jacobi pair").e;
    }
    if (fn == "pi_of") {
        need(1);
        return as_hom_poisson(arg(0)).pi;
    }
    if (fn == "z_of") {
        need(1);
        return as_hom_poisson(arg(0)).z;
    }
    if (fn == "dbar_d" || fn == "partial_d" || fn == "dbar_solve" || fn == "partial_solve") {
        need(1);
        AtiyahForm w = get.operator()<AtiyahForm>(arg(0), "Atiyah form");
        HoloChart hc(w.chart());
        PureAtiyah p = to_pure(hc, w);
        if (fn == "dbar_d") return from_pure(dbar_D(p));
        if (fn == "partial_d") return from_pure(partial_D(p));
        if (fn == "dbar_solve") return from_pure(dbar_D_solve(p));
        return from_pure(partial_D_solve(p));
    }
    if (fn == "bidegree") {
        need(3);
        AtiyahForm w = get.operator()<AtiyahForm>(arg(0), "Atiyah form");
        HoloChart hc(w.chart());
        return from_pure(bidegree_project(to_pure(hc, w), static_cast<int>(arg_int(1)),
                                          static_cast<int>(arg_int(2))));
    }
    if (fn == "canonical") {
        need(1, 3);
        std::string name = raw_name(0);
        long size = 1;
        Chart given;
        bool has_chart = false;
        for (size_t i = 1; i < argc; ++i) {
            Value v = arg(i);
            if (auto* c = std::get_if<Chart>(&v)) {
                given = *c;
                has_chart = true;
            } else {
                size = arg_int(i);
            }
        }
        int dn = static_cast<int>(size);
        auto odd_chart = [&](bool u_first) {
            if (has_chart) return given;
            if (u_first) {
                std::vector<std::string> names{"u"};
                if (dn == 1) {
                    names.push_back("x");
                    names.push_back("y");
                } else {
                    for (int i = 1; i <= dn; ++i) names.push_back("x" + std::to_string(i));
                    for (int i = 1; i <= dn; ++i) names.push_back("y" + std::to_string(i));
                }
                return Chart(names);
            }
            return Chart(detail::model_names_odd(dn));
        };
        auto even_chart = [&](bool xy) {
            if (has_chart) return given;
            std::vector<std::string> names;
            if (dn == 1) {
                names = xy ? std::vector<std::string>{"x", "y"} : std::vector<std::string>{"x", "p"};
            } else {
                for (int i = 1; i <= dn; ++i) names.push_back("x" + std::to_string(i));
                for (int i = 1; i <= dn; ++i) names.push_back((xy ? "y" : "p") + std::to_string(i));
            }
            return Chart(names);
        };
        if (name == "J_can") return canonical_jacobi(odd_chart(false));
        if (name == "hP_can") return canonical_hom_poisson(even_chart(false));
        if (name == "pi_can") return canonical_hom_poisson(even_chart(false)).pi;
        if (name == "Z_can") return canonical_hom_poisson(even_chart(false)).z;
        if (name == "Lam_can") return canonical_jacobi(odd_chart(false)).lam;
        if (name == "E_can") return canonical_jacobi(odd_chart(false)).e;
        if (name == "theta_can") return canonical_theta(odd_chart(false));
        if (name == "omega_can") return canonical_omega(odd_chart(false));
        if (name == "Theta_can") return canonical_Theta(even_chart(false));
        if (name == "Omega_can") return canonical_Omega(even_chart(false));
        if (name == "xi_can") return canonical_xi(even_chart(false));
        if (name == "phi_can") return canonical_phi(odd_chart(true));
        if (name == "A_can") return canonical_A(even_chart(true));
        if (name == "L_Cn") return canonical_L_Cn(even_chart(true));
        if (name == "L_RxCn") return canonical_L_RxCn(odd_chart(true));
        if (name == "L_can_odd") return canonical_L_odd(odd_chart(false));
        if (name == "L_can_ev") return canonical_L_ev(even_chart(false));
        throw UnknownName("no canonical structure named '" + name + "'");
    }
    throw UnknownIdentifier("unknown function '" + fn + "'");
}

} // namespace djc::dsl
