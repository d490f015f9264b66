#pragma once

// Fragment classification of regular languages (through the algebraic
// checks) and of formulas (through the operators they use).

#include <optional>
#include <string>

#include "tal/benchmarks.hpp"
#include "tal/json.hpp"
#include "tal/semigroup.hpp"

namespace tal {

enum class Tri { Yes, No, Unknown };
const char* tri_name(Tri t) noexcept;

struct FragmentReport {
    bool definite = false;   // LTL[Y]
    bool yptl = false;       // LTL[Y,P], via local R-triviality
    bool star_free = false;  // aperiodic
    Tri ltl_p = Tri::Unknown;
    /// How ltl_p was decided: "not-yptl", "curated:<id>" or "undecided".
    std::string ltl_p_basis = "undecided";

    std::size_t minimal_states = 0;
    std::size_t semigroup_size = 0;
    DefiniteVerdict definite_witness;
    PermutationVerdict permutation_witness;
    RTrivialVerdict r_witness;
    std::optional<ConfigWitness> config;
    /// Witness words of the elements named in the verdicts above.
    struct Words {
        Word s, e;       // right-zero failure s·e ≠ e
        Word permuting;  // element with a permuted subset
        Word idempotent, x, y;  // R-class collision in eSe
    } words;
};

/// Runs every check on the minimal DFA of d. ltl_p is No when the language
/// is not LTL[Y,P]-definable; otherwise it is Unknown unless d is equivalent
/// to a benchmark language over the same alphabet, whose curated verdict is
/// used.
FragmentReport classify_language(const Dfa& d, std::size_t budget = kDefaultElementBudget);

/// The curated report fields for a benchmark: definite, yptl, star_free and
/// a definite ltl_p verdict. Witness fields are left empty.
FragmentReport classify_benchmark(std::string_view id);
FragmentReport expected_report(FragmentClass c);

/// The decidable fields (definite, yptl, star_free) agree.
bool same_decidable_fields(const FragmentReport& a, const FragmentReport& b);

enum class MaskPattern { BooleanOnly, LocalOnly, GlobalOnly, Hybrid };
const char* pattern_name(MaskPattern p) noexcept;

struct MaskRequirement {
    MaskPattern pattern = MaskPattern::BooleanOnly;
    int k = 0;  // largest local window; 0 when no local heads are needed

    friend bool operator==(const MaskRequirement&, const MaskRequirement&) = default;
    std::string to_string() const;
};

/// Y and Y^k call for local heads (Y counts as k = 1), P and Ystar for
/// global heads. MOD is position-only and ignored. Throws ContractError on
/// U and on S, which no mask pattern covers.
MaskRequirement classify_formula(const Formula& f);

Json to_json(const FragmentReport& r, const Alphabet& alphabet);

}  // namespace tal
