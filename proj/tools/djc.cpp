// Command line front end: parse a structure-definition document, run its
// checks and constructions, print a human-readable report and optionally a
// machine-readable one.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "djc/runner.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw djc::Error("IO", "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Dirac-Jacobi / generalized contact calculus"};
    app.require_subcommand(1);

    std::string file;
    std::string report_path;
    uint64_t seed = 1;
    int samples = 0;
    int max_degree = 64;
    bool parallel = false;
    bool timings = false;

    CLI::App* run = app.add_subcommand("run", "run a document");
    run->add_option("file", file, "document path")->required();
    run->add_option("--report", report_path, "write a machine-readable report to this path");
    run->add_option("--seed", seed, "seed for the randomized property suites");
    run->add_option("--samples", samples, "extra pseudo-random sample points per frame");
    run->add_option("--max-degree", max_degree, "degree guardrail for bound expressions");
    run->add_flag("--parallel", parallel, "run independent commands concurrently");
    run->add_flag("--timings", timings, "real elapsed_ms in the structured report");

    CLI::App* print = app.add_subcommand("print", "parse a document and print its canonical form");
    print->add_option("file", file, "document path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        std::string src = slurp(file);
        djc::dsl::Document doc = djc::dsl::parse(src);
        if (print->parsed()) {
            std::cout << djc::dsl::print(doc);
            return 0;
        }
        djc::dsl::RunOptions opt;
        opt.seed = seed;
        opt.extra_samples = samples;
        opt.max_degree = max_degree;
        opt.parallel = parallel;
        opt.timings = timings;
        djc::dsl::RunResult rr = djc::dsl::run(doc, opt);
        for (const auto& r : rr.commands) {
            std::cout << "[" << r.verdict << "] " << r.command << " (" << r.elapsed_ms << " ms)\n";
            for (const auto& w : r.witnesses) std::cout << "    " << w << "\n";
        }
        if (!report_path.empty()) {
            std::ofstream out(report_path);
            out << djc::dsl::to_json(rr, opt).dump(2) << "\n";
        }
        return rr.exit_code;
    } catch (const djc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}
