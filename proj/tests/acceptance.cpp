// Acceptance criteria: exact-identity and oracle-based checks, one printed
// line per criterion. Exits nonzero when any criterion fails its identity or
// its stated time budget.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>

#include "djc/suites.hpp"

using namespace djc;

namespace {

int failures = 0;

template <typename F>
void criterion(int number, const std::string& label, long budget_ms, F&& body) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string note;
    try {
        ok = body();
    } catch (const std::exception& e) {
        note = std::string(" [") + e.what() + "]";
    }
    long ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                    t0)
                  .count();
    bool in_budget = ms < budget_ms;
    if (!ok || !in_budget) ++failures;
    std::cout << "criterion " << number << " (" << label << "): " << (ok ? "pass" : "FAIL")
              << (in_budget ? "" : " [over time budget]") << " — " << ms << " ms of " << budget_ms
              << note << "\n";
}

bool run_gallery() {
    bool ok = true;
    for (int d : {1, 2}) {
        Chart c(detail::model_names_odd(d));
        ok = ok && check_jacobi_pair(canonical_jacobi(c)).pass();
        Chart e(detail::model_names_even(d));
        ok = ok && check_hom_poisson(canonical_hom_poisson(e)).pass();
    }
    Chart c3(detail::model_names_odd(1));
    ok = ok && check_gen_contact(GenContactOp::contact(canonical_jacobi(c3))).pass();
    Chart cuxy({"u", "x", "y"});
    ok = ok && check_gen_contact(GenContactOp::complex_type(canonical_phi(cuxy))).pass();
    for (int n : {1, 2}) {
        std::vector<std::string> names{"u"};
        for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
        for (int i = 1; i <= n; ++i) names.push_back("y" + std::to_string(i));
        Chart cc(names);
        ok = ok && check_dl_complex(canonical_phi(cc)).pass();
    }
    Scalar x = Scalar::coordinate(cuxy, "x"), y = Scalar::coordinate(cuxy, "y");
    for (const Scalar& f : {Scalar(cuxy), x, x * y})
        ok = ok && check_nacs(nacs_normal_form(cuxy, f)).pass();
    return ok;
}

bool run_splitting() {
    Chart cn({"a", "b"});
    HomPoisson hn = canonical_hom_poisson(cn);
    JacobiPair jv = canonical_jacobi(Chart(detail::model_names_odd(1)));
    JacobiPair jx = split_contact(hn, 1);
    bool ok = frame_equal(flat_product(dazord_frame(hn), graph_jacobi(jv.lam, jv.e)),
                          graph_jacobi(jx.lam, jx.e));
    Chart cm({"a", "b", "e"});
    JacobiPair jn = canonical_jacobi(cm);
    JacobiPair jl = split_lcs(jn, 1);
    Frame lv = dazord_frame(canonical_hom_poisson(Chart(detail::model_names_even(1))));
    ok = ok && frame_equal(flat_product(graph_jacobi(jn.lam, jn.e), lv),
                           graph_jacobi(jl.lam, jl.e));
    return ok;
}

bool run_eigenbundles() {
    Chart c3(detail::model_names_odd(1));
    Frame eig = eigenframe(GenContactOp::contact(canonical_jacobi(c3)));
    AtiyahForm iom = canonical_omega(c3).scaled(Scalar::iunit(c3));
    bool ok = frame_equal(eig, bfield(iom, gauge_frame(c3)));

    Chart c2(detail::model_names_even(1));
    HomPoisson hp = canonical_hom_poisson(c2);
    HomGC symplectic(Endo11(c2), hp.pi, canonical_Omega(c2), hp.z, Form(c2, 1));
    AtiyahForm ixi = canonical_xi(c2).scaled(Scalar::iunit(c2));
    ok = ok && frame_equal(build_L_JZ(symplectic), bfield(ixi, gauge_frame(c2)));
    return ok;
}

bool run_transversals() {
    Chart cn({"a", "b"});
    JacobiPair jx = split_contact(canonical_hom_poisson(cn), 1);
    Frame lx = graph_jacobi_complex(jx.lam, jx.e);
    if (!check_isotropic(lx).pass() || !check_involutive(lx).pass()) return false;
    if (classify_dj(backward_embedding(lx, {"a", "b"})).kind != DJClass::GeneralizedContact)
        return false;
    auto cls = classify_dj(backward_embedding(lx, {"x", "p", "u"}));
    if (cls.kind != DJClass::HomGCType || !cls.real_section) return false;
    return !cls.real_section->d.f.evaluate(SamplePoint::origin(cn)).is_zero();
}

bool run_cli_suite() {
    std::string dir = DJC_DSL_DIR;
    std::string cli = DJC_CLI_PATH;
    const char* docs[] = {"gallery.dsl",    "bracket.dsl",     "splitting.dsl", "eigenbundle.dsl",
                          "transversal.dsl", "dolbeault.dsl",  "homogenization.dsl"};
    for (const char* doc : docs) {
        std::string cmd = cli + " run " + dir + "/" + doc + " > /dev/null";
        int rc = std::system(cmd.c_str());
        if (rc != 0) {
            std::cout << "  [" << doc << " exited " << rc << "]\n";
            return false;
        }
    }
    return true;
}

} // namespace

int main() {
    criterion(1, "canonical gallery", 10000, run_gallery);
    criterion(2, "bracket calculus, 100 random sections", 30000,
              [] { return bracket_suite(2026, 100).pass(); });
    criterion(3, "splitting identities", 10000, run_splitting);
    criterion(4, "eigenbundle identities", 5000, run_eigenbundles);
    criterion(5, "transversal and leaf classification", 10000, run_transversals);
    criterion(6, "dolbeault-atiyah solver, 50 random forms", 30000,
              [] { return dolbeault_suite(2026, 50).pass(); });
    criterion(7, "homogenization, 20 random operators", 20000,
              [] { return homogenize_suite(2026, 20).pass(); });
    criterion(8, "full CLI suite", 120000, run_cli_suite);
    if (failures) {
        std::cout << failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all acceptance criteria pass\n";
    return 0;
}
