#pragma once

// Named invariant suites: randomized and exhaustive cross-checks between
// independent routes to the same answer. Each suite reports a pass/fail
// verdict, a one-line summary and JSON details.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tal/dfa.hpp"
#include "tal/json.hpp"

namespace tal {

struct SuiteOptions {
    std::size_t trials = 0;  // 0: the suite's default corpus size
    std::uint64_t seed = 7;
    unsigned jobs = 1;
};

struct SuiteReport {
    std::string name;
    bool pass = false;
    std::string summary;
    double seconds = 0.0;
    Json details;
};

/// thm1, thm2, benchmarks, ltl-dfa, thm3, props, compiler, fixed-precision,
/// sampler.
const std::vector<std::string>& suite_names();

/// ContractError for unknown names.
SuiteReport run_suite(std::string_view name, const SuiteOptions& options = {});

Json to_json(const SuiteReport& r);

/// Random complete DFAs over 1–3 letters with 1–5 states, minimized.
std::vector<Dfa> random_minimal_corpus(std::size_t count, std::uint64_t seed);

/// (ab)* with a sink, and the depth-2 Dyck automaton with a sink (a opens,
/// b closes): both in the state numbering of their drawings.
Dfa alternating_ab_dfa();
Dfa dyck2_dfa();

}  // namespace tal
