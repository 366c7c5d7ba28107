// Acceptance gate: runs every criterion at its pinned tolerance and prints one
// pass/fail line per criterion. Exit code is the number of failed criteria.

#include <cstdio>

#include "kelvin/acceptance.hpp"

int main() {
    const auto results = kelvin::run_acceptance(42);
    int failed = 0;
    for (const auto& c : results) {
        std::printf("[%s] criterion %2d: %s\n", c.passed ? "PASS" : "FAIL", c.index,
                    c.title.c_str());
        if (!c.passed) {
            ++failed;
            for (const auto& rep : c.reports) {
                if (rep.passed) continue;
                for (const auto& r : rep.records)
                    if (!kelvin::record_within_tolerance(rep, r))
                        std::printf("    %s: %s rel_err=%.3e (tol %.0e)\n", rep.suite_id.c_str(),
                                    r.equation_id.c_str(), r.rel_err,
                                    kelvin::equation_tolerance(rep, r.equation_id));
                for (const auto& [name, chk] : rep.integrals)
                    if (!kelvin::integral_within_tolerance(chk))
                        std::printf("    %s: %s computed=%.10g expected=%.10g (tol %.0e)\n",
                                    rep.suite_id.c_str(), name.c_str(), chk.computed, chk.expected,
                                    chk.tolerance);
                for (const auto& f : rep.failures)
                    std::printf("    %s: failure %s\n", rep.suite_id.c_str(), f.c_str());
            }
        }
    }
    std::printf("%zu/%zu criteria passed\n", results.size() - failed, results.size());
    return failed;
}
