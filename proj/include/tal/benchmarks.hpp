#pragma once

// The eight benchmark languages, two per definability class.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tal/dfa.hpp"
#include "tal/formula.hpp"

namespace tal {

enum class FragmentClass {
    LtlY,         // LTL[Y]
    LtlP,         // LTL[P]
    LtlYPOnly,    // LTL[Y,P], neither LTL[Y] nor LTL[P]
    LtlSOnly,     // LTL[S], not LTL[Y,P]
};

const char* class_name(FragmentClass c) noexcept;

struct BenchmarkLanguage {
    std::string id;
    std::string description;
    Dfa dfa;                         // minimal, complete
    std::optional<Formula> formula;  // defining formula, absent for dyck-depth-2
    FragmentClass fragment;

    const Alphabet& alphabet() const noexcept { return dfa.alphabet(); }
};

/// Registry in presentation order: ends-a, ends-ab, starts-a, subseq-ab,
/// alt-ab, factor-ab, rdet-poly, dyck-depth-2.
const std::vector<BenchmarkLanguage>& benchmarks();

/// Lookup by id; "ends-with-a", "ends-with-ab" and "starts-with-a" are
/// accepted as aliases. ContractError for unknown ids.
const BenchmarkLanguage& benchmark(std::string_view id);

}  // namespace tal
