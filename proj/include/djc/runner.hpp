#pragma once

#include <chrono>
#include <future>

#include <json.hpp>

#include "djc/eval.hpp"
#include "djc/suites.hpp"

namespace djc::dsl {

struct RunOptions {
    uint64_t seed = 1;
    int extra_samples = 0;
    int max_degree = 64;
    bool parallel = false;
    bool timings = false; // real elapsed_ms in the structured report
};

struct CommandResult {
    std::string command;
    std::string verdict; // pass | fail | error
    std::vector<std::string> witnesses;
    long elapsed_ms = 0;
};

struct RunResult {
    std::vector<CommandResult> commands;
    int exit_code = 0; // 0 pass, 1 fail, 2 error
};

namespace runner_detail {

inline CommandResult execute_command(Evaluator& ev, const Command& cmd, const RunOptions& opt) {
    CommandResult res;
    res.command = cmd.name;
    auto t0 = std::chrono::steady_clock::now();
    auto finish = [&](const std::string& verdict) {
        res.verdict = verdict;
        res.elapsed_ms = static_cast<long>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                               std::chrono::steady_clock::now() - t0)
                                               .count());
        return res;
    };
    auto from_report = [&](const Report& rep) {
        res.witnesses = rep.witnesses();
        return finish(rep.pass() ? "pass" : "fail");
    };
    auto argn = [&](size_t lo, size_t hi = 0) {
        size_t h = hi ? hi : lo;
        if (cmd.args.size() < lo || cmd.args.size() > h)
            throw Error("Type", cmd.name + " takes " + std::to_string(lo) +
                                    (h != lo ? ".." + std::to_string(h) : "") + " arguments");
    };
    auto arg = [&](size_t i) { return ev.eval(*cmd.args[i]); };
    auto arg_int = [&](size_t i) -> long {
        Value v = arg(i);
        if (auto* n = std::get_if<CRat>(&v); n && n->is_real() && n->re.get_den() == 1)
            return n->re.get_num().get_si();
        throw Error("Type", cmd.name + " expects an integer argument");
    };

    try {
        const std::string& n = cmd.name;
        if (n == "check-jacobi") {
            argn(1, 2);
            JacobiPair j = cmd.args.size() == 1
                               ? ev.as_jacobi(arg(0))
                               : JacobiPair(std::get<Multivec>(arg(0)), std::get<Vec>(arg(1)));
            return from_report(check_jacobi_pair(j));
        }
        if (n == "check-hom-poisson") {
            argn(1, 2);
            HomPoisson h = cmd.args.size() == 1
                               ? ev.as_hom_poisson(arg(0))
                               : HomPoisson(std::get<Multivec>(arg(0)), std::get<Vec>(arg(1)));
            return from_report(check_hom_poisson(h));
        }
        if (n == "check-gcs") {
            argn(1);
            return from_report(check_gen_contact(std::get<GenContactOp>(arg(0))));
        }
        if (n == "check-hom-gc") {
            argn(1);
            return from_report(check_hom_gc(std::get<HomGC>(arg(0))));
        }
        if (n == "check-nacs") {
            argn(1);
            return from_report(check_nacs(std::get<AlmostContact>(arg(0))));
        }
        if (n == "check-dl-complex") {
            argn(1);
            return from_report(check_dl_complex(std::get<GaugeEndo>(arg(0))));
        }
        if (n == "check-isotropic") {
            argn(1);
            return from_report(check_isotropic(ev.as_frame(arg(0))));
        }
        if (n == "check-involutive") {
            argn(1);
            return from_report(check_involutive(ev.as_frame(arg(0))));
        }
        if (n == "frame-equal") {
            argn(2);
            bool eq = frame_equal(ev.as_frame(arg(0)), ev.as_frame(arg(1)));
            if (!eq) res.witnesses.push_back("frames span different subbundles");
            return finish(eq ? "pass" : "fail");
        }
        if (n == "classify") {
            argn(1, 2);
            auto cls = classify_dj(ev.as_frame(arg(0)));
            std::string kind = to_string(cls.kind);
            res.witnesses.push_back("kind = " + kind);
            if (cls.real_section)
                res.witnesses.push_back("real section = " + to_string(*cls.real_section));
            if (cmd.args.size() == 2) {
                if (cmd.args[1]->kind != Expr::Ident)
                    throw Error("Type", "classify expects an expected-kind name");
                return finish(kind == cmd.args[1]->text ? "pass" : "fail");
            }
            return finish("pass");
        }
        if (n == "eigenframe") {
            argn(1);
            Frame f = eigenframe(std::get<GenContactOp>(arg(0)));
            res.witnesses.push_back(Evaluator::to_display(Value(f)));
            return finish("pass");
        }
        if (n == "dorfman") {
            argn(2);
            OmniSection r = dorfman(std::get<OmniSection>(arg(0)), std::get<OmniSection>(arg(1)));
            res.witnesses.push_back(to_string(r));
            return finish("pass");
        }
        if (n == "star" || n == "flat-product") {
            argn(2);
            Frame f = n == "star" ? star(ev.as_frame(arg(0)), ev.as_frame(arg(1)))
                                  : flat_product(ev.as_frame(arg(0)), ev.as_frame(arg(1)));
            res.witnesses.push_back(Evaluator::to_display(Value(f)));
            return finish("pass");
        }
        if (n == "backward-projection") {
            argn(2);
            if (cmd.args[1]->kind != Expr::Ident) throw Error("Type", "expected a chart name");
            Frame f = backward_projection(ev.as_frame(arg(0)), ev.chart(cmd.args[1]->text));
            res.witnesses.push_back(Evaluator::to_display(Value(f)));
            return finish("pass");
        }
        if (n == "backward-embedding") {
            argn(2, 16);
            std::vector<std::string> coords;
            for (size_t i = 1; i < cmd.args.size(); ++i) {
                if (cmd.args[i]->kind != Expr::Ident) throw Error("Type", "expected coordinate names");
                coords.push_back(cmd.args[i]->text);
            }
            Frame f = backward_embedding(ev.as_frame(arg(0)), coords);
            res.witnesses.push_back(Evaluator::to_display(Value(f)));
            return finish("pass");
        }
        if (n == "split-contact" || n == "split-lcs") {
            argn(2, 3);
            JacobiPair out =
                n == "split-contact"
                    ? (cmd.args.size() == 2
                           ? split_contact(ev.as_hom_poisson(arg(0)), static_cast<int>(arg_int(1)))
                           : split_contact(HomPoisson(std::get<Multivec>(arg(0)), std::get<Vec>(arg(1))),
                                           static_cast<int>(arg_int(2))))
                    : (cmd.args.size() == 2
                           ? split_lcs(ev.as_jacobi(arg(0)), static_cast<int>(arg_int(1)))
                           : split_lcs(JacobiPair(std::get<Multivec>(arg(0)), std::get<Vec>(arg(1))),
                                       static_cast<int>(arg_int(2))));
            res.witnesses.push_back(Evaluator::to_display(Value(out)));
            return finish("pass");
        }
        if (n == "invert-jacobi") {
            argn(1);
            JacobiInverse inv = invert_jacobi(ev.as_jacobi(arg(0)));
            res.witnesses.push_back(Evaluator::to_display(Value(inv)));
            return finish("pass");
        }
        if (n == "solve-dbarD") {
            argn(1);
            AtiyahForm w = std::get<AtiyahForm>(arg(0));
            HoloChart hc(w.chart());
            AtiyahForm rho = from_pure(dbar_D_solve(to_pure(hc, w)));
            res.witnesses.push_back(to_string(rho));
            return finish("pass");
        }
        if (n == "suite-bracket") {
            argn(1);
            return from_report(bracket_suite(opt.seed, static_cast<int>(arg_int(0))));
        }
        if (n == "suite-dolbeault") {
            argn(1);
            return from_report(dolbeault_suite(opt.seed, static_cast<int>(arg_int(0))));
        }
        if (n == "suite-homogenize") {
            argn(1);
            return from_report(homogenize_suite(opt.seed, static_cast<int>(arg_int(0))));
        }
        throw UnknownIdentifier("unknown command '" + n + "'");
    } catch (const Error& err) {
        res.witnesses.push_back(err.what());
        return finish("error");
    } catch (const std::exception& err) {
        res.witnesses.push_back(std::string("internal: ") + err.what());
        return finish("error");
    }
}

} // namespace runner_detail

inline RunResult run(const Document& doc, const RunOptions& opt) {
    Evaluator ev;
    ev.set_extra_samples(opt.extra_samples, opt.seed);
    ev.set_max_degree(opt.max_degree);
    for (const auto& c : doc.charts) ev.declare_chart(c.name, Chart(c.coords));
    RunResult out;

    // bindings and samples run first, in source order; commands afterwards
    for (const auto& st : doc.order) {
        if (st.kind == Document::Stmt::SampleKind) {
            const auto& s = doc.samples[st.index];
            const Chart& c = s.chart.empty() ? ev.sole_chart() : ev.chart(s.chart);
            std::vector<Rat> vals(static_cast<size_t>(c.dim()), Rat(0));
            for (const auto& [coord, lit] : s.values) {
                Rat r(lit);
                r.canonicalize();
                vals[static_cast<size_t>(c.index_of(coord))] = r;
            }
            ev.declare_sample(c, SamplePoint(c, std::move(vals)));
        } else if (st.kind == Document::Stmt::BindingKind) {
            const auto& b = doc.bindings[st.index];
            ev.bind(b.name, ev.eval(*b.value));
        }
    }

    if (opt.parallel) {
        std::vector<std::future<CommandResult>> futs;
        for (const auto& cmd : doc.commands)
            futs.push_back(std::async(std::launch::async, [&ev, &cmd, &opt] {
                return runner_detail::execute_command(ev, cmd, opt);
            }));
        for (auto& f : futs) out.commands.push_back(f.get());
    } else {
        for (const auto& cmd : doc.commands)
            out.commands.push_back(runner_detail::execute_command(ev, cmd, opt));
    }

    for (const auto& r : out.commands) {
        if (r.verdict == "error") out.exit_code = 2;
        if (r.verdict == "fail" && out.exit_code == 0) out.exit_code = 1;
    }
    return out;
}

inline nlohmann::ordered_json to_json(const RunResult& rr, const RunOptions& opt) {
    nlohmann::ordered_json root;
    root["commands"] = nlohmann::ordered_json::array();
    for (const auto& r : rr.commands) {
        nlohmann::ordered_json c;
        c["command"] = r.command;
        c["verdict"] = r.verdict;
        c["witnesses"] = r.witnesses;
        c["elapsed_ms"] = opt.timings ? r.elapsed_ms : 0;
        root["commands"].push_back(std::move(c));
    }
    root["exit_code"] = rr.exit_code;
    return root;
}

} // namespace djc::dsl
