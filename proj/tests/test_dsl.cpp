#include <catch2/catch_amalgamated.hpp>

#include "djc/runner.hpp"

using namespace djc;
using namespace djc::dsl;

TEST_CASE("parser basics") {
    SECTION("smoke document") {
        Document doc = parse("chart (x, p, u);\n"
                             "J = canonical(J_can, d=1);\n"
                             "check jacobi J;\n");
        CHECK(doc.charts.size() == 1);
        CHECK(doc.bindings.size() == 1);
        REQUIRE(doc.commands.size() == 1);
        CHECK(doc.commands[0].name == "check-jacobi");
    }
    SECTION("duplicate coordinates are a syntax error") {
        CHECK_THROWS_AS(parse("chart (x, x);"), SyntaxError);
    }
    SECTION("errors carry the source location") {
        try {
            parse("chart (x, p);\nq = ;\n");
            FAIL("expected SyntaxError");
        } catch (const SyntaxError& e) {
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }
    SECTION("hyphenated command heads") {
        Document doc = parse("chart (x, p, u);\n"
                             "J = canonical(J_can, d=1);\n"
                             "check hom-poisson canonical(hP_can, d=1);\n"
                             "invert-jacobi J;\n"
                             "backward embedding complex_graph(J) u;\n");
        REQUIRE(doc.commands.size() == 3);
        CHECK(doc.commands[0].name == "check-hom-poisson");
        CHECK(doc.commands[1].name == "invert-jacobi");
        CHECK(doc.commands[2].name == "backward-embedding");
    }
}

TEST_CASE("evaluation") {
    SECTION("expressions build the canonical contact data") {
        Document doc = parse(
            "chart (x, p, u);\n"
            "theta = du - p*dx;\n"
            "omega = atiyah_d(theta);\n"
            "check involutive graph(omega);\n"
            "frame-equal graph(omega) graph(canonical(omega_can, d=1));\n");
        RunOptions opt;
        RunResult rr = run(doc, opt);
        CHECK(rr.exit_code == 0);
    }
    SECTION("unknown identifiers exit with code 2") {
        Document doc = parse("chart (x, p, u);\ncheck jacobi missing;\n");
        CHECK(run(doc, {}).exit_code == 2);
    }
    SECTION("failing checks exit with code 1") {
        Document doc = parse("chart (x, p, u);\n"
                             "H = hom_poisson(canonical(pi_can, d=1), 0*@x);\n"
                             "check hom-poisson H;\n");
        // pi_can lives on the default (x, p) chart; the zero field too
        Document doc2 = parse("chart (x, p);\n"
                              "H = hom_poisson(canonical(pi_can, d=1), 0*@x);\n"
                              "check hom-poisson H;\n");
        CHECK(run(doc2, {}).exit_code == 1);
    }
    SECTION("sample declarations reach the frames") {
        Document doc = parse("chart (x, p, u);\n"
                             "sample (x=1, p=1/2, u=-2);\n"
                             "J = canonical(J_can, d=1);\n"
                             "check involutive complex_graph(J);\n");
        CHECK(run(doc, {}).exit_code == 0);
    }
}

TEST_CASE("runner reports") {
    std::string src = "chart (x, p, u);\n"
                      "J = canonical(J_can, d=1);\n"
                      "check jacobi J;\n"
                      "invert-jacobi J;\n";
    Document doc = parse(src);
    RunOptions opt;

    SECTION("byte-identical structured reports across runs") {
        std::string r1 = to_json(run(doc, opt), opt).dump(2);
        std::string r2 = to_json(run(doc, opt), opt).dump(2);
        CHECK(r1 == r2);
    }
    SECTION("parallel execution assembles the same report") {
        RunOptions par = opt;
        par.parallel = true;
        CHECK(to_json(run(doc, par), par).dump(2) == to_json(run(doc, opt), opt).dump(2));
    }
    SECTION("witness expressions are re-parseable in the DSL grammar") {
        Document failing = parse("chart (x, p, u);\n"
                                 "Lam = @x^@p + x*(@x^@u);\n"
                                 "check jacobi Lam 0*@x;\n");
        RunResult rr = run(failing, opt);
        REQUIRE(rr.exit_code == 1);
        REQUIRE(!rr.commands[0].witnesses.empty());
        // the witness has the shape "<label> = <expr>"; the expression part
        // must parse in the DSL's own grammar
        std::string w = rr.commands[0].witnesses.front();
        auto pos = w.rfind(" = ");
        REQUIRE(pos != std::string::npos);
        std::string exprsrc = w.substr(pos + 3);
        Parser p("chart (x, p, u); q = " + exprsrc + ";");
        CHECK_NOTHROW(p.parse());
    }
}

namespace {

// random canonical-form documents for the round-trip property
ExprPtr random_expr(Rng& rng, int depth) {
    auto mk = [](Expr e) { return std::make_shared<Expr>(std::move(e)); };
    if (depth == 0 || rng.chance(35)) {
        switch (rng.uniform(0, 3)) {
            case 0: {
                Expr e;
                e.kind = Expr::Number;
                e.text = std::to_string(rng.uniform(0, 12));
                return mk(std::move(e));
            }
            case 1: {
                Expr e;
                e.kind = Expr::Ident;
                e.text = std::string(1, static_cast<char>('a' + rng.uniform(0, 5)));
                return mk(std::move(e));
            }
            case 2: {
                Expr e;
                e.kind = Expr::AtVec;
                e.text = std::string(1, static_cast<char>('x' + rng.uniform(0, 2)));
                return mk(std::move(e));
            }
            default: {
                Expr e;
                e.kind = Expr::Qualified;
                e.text = "C.d" + std::string(1, static_cast<char>('x' + rng.uniform(0, 2)));
                return mk(std::move(e));
            }
        }
    }
    switch (rng.uniform(0, 2)) {
        case 0: {
            Expr e;
            e.kind = Expr::Binary;
            const char ops[] = {'+', '-', '*', '/', '^'};
            e.op = ops[rng.uniform(0, 4)];
            e.args = {random_expr(rng, depth - 1), random_expr(rng, depth - 1)};
            return mk(std::move(e));
        }
        case 1: {
            Expr e;
            e.kind = Expr::Unary;
            e.op = '-';
            e.args = {random_expr(rng, depth - 1)};
            return mk(std::move(e));
        }
        default: {
            Expr e;
            e.kind = Expr::Call;
            e.text = "fn" + std::to_string(rng.uniform(0, 3));
            int n = rng.uniform(1, 3);
            for (int i = 0; i < n; ++i) {
                e.kwnames.push_back(rng.chance(25) ? std::string(1, static_cast<char>('d' + i)) : "");
                e.args.push_back(random_expr(rng, depth - 1));
            }
            return mk(std::move(e));
        }
    }
}

} // namespace

TEST_CASE("print-parse round trip on randomized documents") {
    Rng rng(99);
    for (int t = 0; t < 25; ++t) {
        Document doc;
        doc.charts.push_back({"C", {"x", "y", "zz"}});
        int nb = rng.uniform(1, 4);
        for (int i = 0; i < nb; ++i) {
            doc.bindings.push_back({"b" + std::to_string(i), random_expr(rng, 3)});
            doc.order.push_back({Document::Stmt::BindingKind, doc.bindings.size() - 1});
        }
        if (rng.chance(50)) {
            doc.samples.push_back({"C", {{"x", "1/2"}, {"y", "-3"}, {"zz", "0"}}});
            doc.order.push_back({Document::Stmt::SampleKind, doc.samples.size() - 1});
        }
        Command cmd;
        cmd.name = rng.chance(50) ? "check-jacobi" : "frame-equal";
        cmd.args.push_back(random_expr(rng, 0));
        doc.commands.push_back(cmd);
        doc.order.push_back({Document::Stmt::CommandKind, 0});

        std::string once = print(doc);
        Document reparsed = parse(once);
        CHECK(print(reparsed) == once);
    }
}
