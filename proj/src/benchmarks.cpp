#include "tal/benchmarks.hpp"

#include "tal/error.hpp"

namespace tal {

const char* class_name(FragmentClass c) noexcept {
    switch (c) {
        case FragmentClass::LtlY: return "LTL[Y]";
        case FragmentClass::LtlP: return "LTL[P]";
        case FragmentClass::LtlYPOnly: return "LTL[Y,P]-only";
        case FragmentClass::LtlSOnly: return "LTL[S]-only";
    }
    return "?";
}

namespace {

constexpr State X = kNoState;

BenchmarkLanguage make(std::string id, std::string description, Dfa dfa,
                       std::optional<std::string> formula, FragmentClass fragment) {
    std::optional<Formula> f;
    if (formula) f = parse_formula(*formula, dfa.alphabet());
    return {std::move(id), std::move(description), minimize(dfa), std::move(f), fragment};
}

std::vector<BenchmarkLanguage> build() {
    const Alphabet ab{"a", "b"};
    const Alphabet abc{"a", "b", "c"};
    const Alphabet abcd{"a", "b", "c", "d"};
    std::vector<BenchmarkLanguage> r;
    r.push_back(make("ends-a", "strings ending with a (Σ*a)",
                     Dfa(ab, 2, 0, {false, true}, {1, 0, 1, 0}), "Y a", FragmentClass::LtlY));
    r.push_back(make("ends-ab", "strings ending with ab (Σ*ab)",
                     Dfa(ab, 3, 0, {false, false, true}, {1, 0, 1, 2, 1, 0}), "Y (b & Y a)",
                     FragmentClass::LtlY));
    r.push_back(make("starts-a", "strings starting with a (aΣ*)",
                     Dfa(ab, 3, 0, {false, true, false}, {1, 2, 1, 1, 2, 2}), "P (a & !P true)",
                     FragmentClass::LtlP));
    r.push_back(make("subseq-ab", "strings with ab as a subsequence (Σ*aΣ*bΣ*)",
                     Dfa(ab, 3, 0, {false, false, true}, {1, 0, 1, 2, 2, 2}), "P (b & P a)",
                     FragmentClass::LtlP));
    r.push_back(make("alt-ab", "repetitions of ab ((ab)*)",
                     Dfa::complete(ab, 2, 0, {true, false}, {1, X, X, 0}),
                     "!P true | (P (a & !P true) & Y b & !P (a & Y a) & !P (b & Y b))",
                     FragmentClass::LtlYPOnly));
    r.push_back(make("factor-ab", "strings with ab as a factor (Σ*abΣ*) over {a,b,c}",
                     Dfa(abc, 3, 0, {false, false, true}, {1, 0, 0, 1, 2, 0, 2, 2, 2}),
                     "P (b & Y a)", FragmentClass::LtlYPOnly));
    // {a,b,d}* a {c,d}*: 0 = before the last a, 1 = just read an a,
    // 2 = in the {c,d} tail after a c, 3 = sink.
    r.push_back(make("rdet-poly", "right-deterministic polynomial {a,b,d}*a{c,d}*",
                     Dfa(abcd, 4, 0, {false, true, true, false},
                         {1, 0, 3, 0, 1, 0, 2, 1, 3, 3, 2, 2, 3, 3, 3, 3}),
                     "((c | d) S a) & !P (a & P c)", FragmentClass::LtlSOnly));
    r.push_back(make("dyck-depth-2", "bounded Dyck, nesting depth 2 ((a(ab)*b)*)",
                     Dfa::complete(ab, 3, 0, {true, false, false}, {1, X, 2, 0, X, 1}),
                     std::nullopt, FragmentClass::LtlSOnly));
    return r;
}

}  // namespace

const std::vector<BenchmarkLanguage>& benchmarks() {
    static const std::vector<BenchmarkLanguage> registry = build();
    return registry;
}

const BenchmarkLanguage& benchmark(std::string_view id) {
    if (id == "ends-with-a") id = "ends-a";
    if (id == "ends-with-ab") id = "ends-ab";
    if (id == "starts-with-a") id = "starts-a";
    for (const auto& b : benchmarks()) {
        if (b.id == id) return b;
    }
    throw ContractError("unknown benchmark '" + std::string(id) + "'");
}

}  // namespace tal
