// One line per acceptance criterion; exit status 1 if any fails.

#include <cstdio>
#include <string>
#include <vector>

#include "tal/suites.hpp"

namespace {

struct Criterion {
    const char* label;
    const char* suite;
    double time_limit;  // seconds, 0 for none
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"definiteness checks agree (200 DFAs, < 60 s)", "thm1", 60},
        {"local R-triviality vs forbidden configurations, Dyck witness", "thm2", 0},
        {"benchmark classification 8/8", "benchmarks", 0},
        {"ltl_to_dfa oracle (100 formulas, |w| <= 8, < 120 s)", "ltl-dfa", 120},
        {"locally testable formulas (m = 2, |w| <= 8)", "thm3", 0},
        {"bounded-lookback rewrites and separation", "props", 0},
        {"compiler oracle (binary32, exhaustive 10, spot 100/500)", "compiler", 0},
        {"fixed precision (masked rows, non-associativity, row sums within 1 step per addition)", "fixed-precision", 0},
        {"sampler (counts n <= 10, chi-square p > 0.01)", "sampler", 0},
    };
    int failures = 0;
    for (const Criterion& c : criteria) {
        tal::SuiteOptions options;
        options.seed = 7;
        std::string summary;
        bool pass = false;
        double seconds = 0.0;
        try {
            const tal::SuiteReport r = tal::run_suite(c.suite, options);
            seconds = r.seconds;
            pass = r.pass && (c.time_limit == 0 || r.seconds < c.time_limit);
            summary = r.summary;
        } catch (const std::exception& e) {
            summary = std::string("error: ") + e.what();
        }
        failures += !pass;
        std::printf("%s  %s: %s [%.2f s]\n", pass ? "PASS" : "FAIL", c.label, summary.c_str(), seconds);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
