// Command-line entry point: runs verification suites and writes JSON/CSV
// reports. Exit code 0 iff every requested suite passed, 1 on suite failure,
// 2 on usage errors, 3 on I/O failure.

#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "kelvin/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    for (const auto& a : args) {
        if (a == "-h" || a == "--help") {
            std::printf(
                "kelvin-verify --suite <pde2d|ie2d|pde3d|ie3d|identities|kelvin|inequalities|all>\n"
                "              [--p P] [--mu MU] [--sigma S] [--center x,y[,z]]\n"
                "              [--tol REL] [--out PATH] [--format json|csv] [--seed N]\n\n"
                "Runs the named verification suite over the given bubble parameters (or the\n"
                "built-in parameter grid when none are given) and writes a structured report.\n");
            return 0;
        }
    }

    kelvin::RunConfig rc;
    try {
        rc = kelvin::parse_args(args);
    } catch (const kelvin::CliError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    }

    std::vector<kelvin::VerificationReport> reps;
    try {
        reps = kelvin::run_suites(rc);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "suite execution failed: %s\n", e.what());
        return 1;
    }

    bool all_passed = true;
    for (const auto& r : reps) {
        all_passed = all_passed && r.passed;
        std::printf("[%s] %s  (%zu records, %zu integral checks)\n", r.passed ? "PASS" : "FAIL",
                    r.suite_id.c_str(), r.records.size(), r.integrals.size());
        for (const auto& f : r.failures) std::printf("    failure: %s\n", f.c_str());
    }

    if (!rc.output_path.empty()) {
        try {
            kelvin::emit_reports(reps, rc);
            std::printf("report written to %s\n", rc.output_path.c_str());
        } catch (const std::exception& e) {
            std::fprintf(stderr, "report write failed: %s\n", e.what());
            return 3;
        }
    }
    return all_passed ? 0 : 1;
}
