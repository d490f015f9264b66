#include <doctest.h>

#include "tal/classifier.hpp"
#include "tal/error.hpp"

using namespace tal;
using namespace tal::ltl;

TEST_CASE("registry entries are consistent") {
    CHECK(benchmarks().size() == 8);
    CHECK(*benchmark("ends-a").formula == Y(atom("a")));
    CHECK(benchmark("alt-ab").fragment == FragmentClass::LtlYPOnly);
    CHECK_FALSE(benchmark("dyck-depth-2").formula.has_value());
    CHECK(benchmark("rdet-poly").alphabet().tokens() == std::vector<std::string>{"a", "b", "c", "d"});
    CHECK(&benchmark("ends-with-a") == &benchmark("ends-a"));
    CHECK_THROWS_AS(benchmark("nope"), ContractError);

    for (const auto& b : benchmarks()) {
        CAPTURE(b.id);
        CHECK(minimize(b.dfa) == b.dfa);
        if (b.formula) CHECK(equivalent(b.dfa, ltl_to_dfa(*b.formula, b.alphabet())).equal);
    }
}

TEST_CASE("registry languages match their set definitions") {
    auto check = [](std::string_view id, auto&& member) {
        const auto& b = benchmark(id);
        for_each_word(b.alphabet().size(), 8, [&](const Word& w) {
            CAPTURE(b.alphabet().render(w));
            CHECK(b.dfa.accepts(w) == member(b.alphabet().render(w)));
        });
    };
    check("ends-a", [](const std::string& s) { return !s.empty() && s.back() == 'a'; });
    check("ends-ab", [](const std::string& s) { return s.size() >= 2 && s.substr(s.size() - 2) == "ab"; });
    check("starts-a", [](const std::string& s) { return !s.empty() && s.front() == 'a'; });
    check("subseq-ab", [](const std::string& s) {
        const auto a = s.find('a');
        return a != std::string::npos && s.find('b', a) != std::string::npos;
    });
    check("alt-ab", [](const std::string& s) {
        if (s.size() % 2) return false;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] != (i % 2 ? 'b' : 'a')) return false;
        }
        return true;
    });
    check("factor-ab", [](const std::string& s) { return s.find("ab") != std::string::npos; });
    check("rdet-poly", [](const std::string& s) {
        const auto a = s.rfind('a');
        if (a == std::string::npos) return false;
        return s.substr(0, a).find('c') == std::string::npos &&
               s.find_first_not_of("cd", a + 1) == std::string::npos;
    });
    check("dyck-depth-2", [](const std::string& s) {
        int depth = 0;
        for (char c : s) {
            depth += c == 'a' ? 1 : -1;
            if (depth < 0 || depth > 2) return false;
        }
        return depth == 0;
    });
}

TEST_CASE("language classification") {
    for (const auto& b : benchmarks()) {
        CAPTURE(b.id);
        const FragmentReport got = classify_language(b.dfa);
        const FragmentReport want = classify_benchmark(b.id);
        CHECK(same_decidable_fields(got, want));
        CHECK(got.ltl_p == want.ltl_p);
        if (got.definite) CHECK(got.yptl);
        if (got.yptl) CHECK(got.star_free);
        if (b.formula) {
            CHECK(same_decidable_fields(classify_language(ltl_to_dfa(*b.formula, b.alphabet())), want));
        }
    }
    const FragmentReport ea = classify_language(benchmark("ends-a").dfa);
    CHECK(ea.definite);
    CHECK(ea.ltl_p == Tri::No);
    CHECK(ea.ltl_p_basis == "curated:ends-a");

    const FragmentReport dy = classify_language(benchmark("dyck-depth-2").dfa);
    CHECK_FALSE(dy.yptl);
    CHECK(dy.star_free);
    CHECK(dy.ltl_p == Tri::No);
    CHECK(dy.ltl_p_basis == "not-yptl");
    REQUIRE(dy.config);

    // A locally testable language outside the registry: ltl_p is undecided.
    const Alphabet ab{"a", "b"};
    const FragmentReport other = classify_language(ltl_to_dfa(P(atom("a") & Y(atom("a"))), ab));
    CHECK(other.yptl);
    CHECK(other.ltl_p == Tri::Unknown);

    // Parity is not star-free.
    const FragmentReport parity = classify_language(Dfa(ab, 2, 0, {true, false}, {1, 0, 0, 1}));
    CHECK_FALSE(parity.star_free);
    CHECK_FALSE(parity.yptl);

    const Json j = to_json(dy, ab);
    CHECK(j["yptl_definable"] == "no");
    CHECK(j["witnesses"]["forbidden_configuration"]["x"] == "ab");
}

TEST_CASE("formula classification") {
    CHECK(classify_formula(Y(atom("a"))) == MaskRequirement{MaskPattern::LocalOnly, 1});
    CHECK(classify_formula(P(atom("a") & !P(top()))) == MaskRequirement{MaskPattern::GlobalOnly, 0});
    CHECK(classify_formula(P(atom("b") & Y(atom("a")))) == MaskRequirement{MaskPattern::Hybrid, 1});
    CHECK(classify_formula(atom("a") | !atom("b")) == MaskRequirement{MaskPattern::BooleanOnly, 0});
    CHECK(classify_formula(Yk(4, atom("a")) & P(atom("b"))) == MaskRequirement{MaskPattern::Hybrid, 4});
    CHECK(classify_formula(Ystar(atom("a"))).pattern == MaskPattern::GlobalOnly);
    CHECK(classify_formula(mod(2, 1) & Y(atom("a"))).pattern == MaskPattern::LocalOnly);
    CHECK(classify_formula(Yk(3, atom("a"))).to_string() == "local-only(3)");
    CHECK_THROWS_AS(classify_formula(U(atom("a"), atom("b"))), ContractError);
    CHECK_THROWS_AS(classify_formula(S(atom("a"), atom("b"))), ContractError);

    // Expanded pure-Y formulas need only 1-local heads.
    for (int k = 1; k <= 4; ++k) {
        const MaskRequirement m = classify_formula(expand_bounded(Yk(k, atom("a") & Yk(2, atom("b")))));
        CHECK(m == MaskRequirement{MaskPattern::LocalOnly, 1});
    }
}
