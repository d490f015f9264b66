#include <doctest.h>

#include <set>

#include "tal/error.hpp"
#include "tal/formula.hpp"

using namespace tal;
using namespace tal::ltl;

namespace {

const Alphabet ab{"a", "b"};

bool acc(const Formula& f, std::string_view w) { return accepts(f, ab, ab.parse_word(w)); }

bool same_language(const Formula& f, const Formula& g, const Alphabet& sigma, std::size_t max_len) {
    Evaluator ef(f, sigma), eg(g, sigma);
    bool same = true;
    for_each_word(sigma.size(), max_len, [&](const Word& w) {
        same = same && ef.accepts(w) == eg.accepts(w);
    });
    return same;
}

}  // namespace

TEST_CASE("parse produces the expected trees") {
    CHECK(parse_formula("Y a", ab) == Y(atom("a")));
    CHECK(parse_formula("P (a & !P true)", ab) == P(atom("a") & !P(top())));
    CHECK(parse_formula("Y^3 b", ab) == Yk(3, atom("b")));
    CHECK(parse_formula("Ystar a") == Ystar(atom("a")));
    CHECK(parse_formula("MOD(3, 5)") == mod(3, 2));
    CHECK(parse_formula("a | b & a") == (atom("a") | (atom("b") & atom("a"))));
    CHECK(parse_formula("a S b S a") == S(atom("a"), S(atom("b"), atom("a"))));
    CHECK(parse_formula("a | b S a") == S(atom("a") | atom("b"), atom("a")));
    CHECK(parse_formula("!!a") == !!atom("a"));
    CHECK(parse_formula("  Y\n(a)  ") == Y(atom("a")));
}

TEST_CASE("parse errors carry positions") {
    CHECK_THROWS_AS(parse_formula("Y^0 a", ab), ParseError);
    CHECK_THROWS_AS(parse_formula("MOD(0,1)"), ParseError);
    CHECK_THROWS_AS(parse_formula("c", ab), ParseError);
    CHECK_THROWS_AS(parse_formula("(a & b"), ParseError);
    CHECK_THROWS_AS(parse_formula(""), ParseError);
    CHECK_THROWS_AS(parse_formula("a b"), ParseError);
    CHECK_THROWS_AS(parse_formula("P"), ParseError);
    try {
        parse_formula("a &\n  # b");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 3);
    }
}

TEST_CASE("printing round-trips") {
    const std::vector<std::string> sources = {
        "true", "false", "a", "!a", "Y a", "Y^2 (a & b)", "Ystar !b", "P (a | Y b)",
        "a S (b U a)", "MOD(4,3) & Y a", "(a S b) S a", "!(a & b) | P P a",
    };
    for (const auto& src : sources) {
        const Formula f = parse_formula(src);
        CAPTURE(src);
        CHECK(parse_formula(f.to_string()) == f);
    }
    CHECK(Y(atom("a")).to_string() == "Y a");
    CHECK((atom("a") & !atom("b")).to_string() == "(a & !b)");
    CHECK(Yk(2, atom("a")).to_string() == "Y^2 a");

    Rng rng(11);
    RandomFormulaSpec spec{{"a", "b", "c"},
                           {Op::Not, Op::And, Op::Or, Op::Yesterday, Op::BoundedYesterday,
                            Op::StarYesterday, Op::Past, Op::Since, Op::Until, Op::Mod},
                           12};
    for (int i = 0; i < 300; ++i) {
        const Formula f = random_formula(spec, rng);
        CAPTURE(f.to_string());
        CHECK(parse_formula(f.to_string()) == f);
    }
}

TEST_CASE("operator depth") {
    CHECK(operator_depth(atom("a")) == 0);
    CHECK(operator_depth(Y(P(atom("a")))) == 2);
    CHECK(operator_depth(atom("a") & atom("b")) == 0);
    CHECK(operator_depth(Yk(5, atom("a"))) == 1);
    CHECK(operator_depth(S(Y(atom("a")), atom("b"))) == 2);
    CHECK(operator_depth(mod(2, 1) & !Ystar(mod(3, 0))) == 1);
}

TEST_CASE("evaluation follows the satisfaction relation") {
    const Formula first_a = P(atom("a") & !P(top()));
    CHECK(evaluate(first_a, ab, ab.parse_word("ab"), 3));
    CHECK_FALSE(evaluate(first_a, ab, ab.parse_word("ba"), 3));
    CHECK(evaluate(Y(atom("a")), ab, ab.parse_word("ba"), 3));
    CHECK_FALSE(evaluate(Y(atom("a")), ab, Word{}, 1));
    CHECK(evaluate(mod(2, 0), ab, ab.parse_word("abab"), 4));
    CHECK(evaluate(mod(2, 0), ab, ab.parse_word("abbbba"), 4));
    CHECK_FALSE(evaluate(mod(2, 0), ab, ab.parse_word("abab"), 3));
    CHECK_FALSE(evaluate(atom("a"), ab, ab.parse_word("a"), 2));
    CHECK_THROWS_AS(evaluate(top(), ab, ab.parse_word("ab"), 4), ContractError);
    CHECK_THROWS_AS(evaluate(top(), ab, ab.parse_word("ab"), 0), ContractError);

    CHECK(acc(Y(atom("a")), "ba"));
    CHECK(acc(top(), ""));
    CHECK_FALSE(acc(bot(), ""));
    CHECK(acc(Y(atom("b") & Y(atom("a"))), "aab"));
    CHECK(acc(Y(atom("b") & Y(atom("a"))), "bab"));
    CHECK_FALSE(acc(Y(atom("b") & Y(atom("a"))), "abb"));

    // a S b: some b earlier, only a's since.
    const Formula since = S(atom("a"), atom("b"));
    CHECK(acc(since, "b"));
    CHECK(acc(since, "baa"));
    CHECK(acc(since, "bab"));
    CHECK(acc(since, "bbb"));
    CHECK_FALSE(acc(since, "aa"));
    CHECK(acc(since, "bba"));
    CHECK_FALSE(acc(since, ""));

    // Until is never satisfiable at N+1.
    CHECK_FALSE(acc(U(top(), top()), "ab"));
    CHECK(evaluate(U(atom("a"), atom("b")), ab, ab.parse_word("aab"), 1));
    CHECK_FALSE(evaluate(U(atom("a"), atom("b")), ab, ab.parse_word("aba"), 3));

    // Y^k and Ystar against their definitions.
    CHECK(acc(Yk(2, atom("a")), "ab"));
    CHECK_FALSE(acc(Yk(2, atom("a")), "abb"));
    CHECK(acc(Ystar(atom("a")), "abbbb"));
}

TEST_CASE("atoms outside the alphabet are false") {
    CHECK_FALSE(acc(P(atom("z")), "abab"));
    CHECK(acc(!atom("z"), ""));
}

// A bare atom reads the first token, so the property is checked on formulas
// whose top operator looks strictly into the past.
TEST_CASE("past formulas are constant at position 1") {
    Rng rng(5);
    RandomFormulaSpec spec{{"a", "b"},
                           {Op::Not, Op::And, Op::Or, Op::Yesterday, Op::BoundedYesterday,
                            Op::StarYesterday, Op::Past, Op::Since},
                           8};
    for (int i = 0; i < 200; ++i) {
        const Formula g = random_formula(spec, rng);
        const Formula f = std::vector<Formula>{Y(g), P(g), Yk(2, g), Ystar(g), S(atom("a"), g)}[i % 5];
        Evaluator e(f, ab);
        const bool at_empty = e.at(Word{}, 1);
        for_each_word(2, 4, [&](const Word& w) {
            if (!w.empty()) CHECK(e.at(w, 1) == at_empty);
        });
    }
}

TEST_CASE("expand_bounded") {
    CHECK(expand_bounded(Yk(2, atom("a"))) == (Y(atom("a")) | Y(Y(atom("a")))));
    CHECK(expand_bounded(Yk(1, atom("a"))) == Y(atom("a")));
    CHECK(expand_bounded(Ystar(atom("a"))) == P(atom("a")));
    CHECK(expand_bounded(!Yk(2, Ystar(atom("b")))) ==
          !(Y(P(atom("b"))) | Y(Y(P(atom("b"))))));

    for (int k = 1; k <= 5; ++k) {
        const Formula psi = P(Y(atom("a")));
        CHECK(operator_depth(expand_bounded(Yk(k, psi))) == operator_depth(psi) + k);
    }

    const Alphabet abc{"a", "b", "c"};
    Rng rng(99);
    RandomFormulaSpec spec{{"a", "b", "c"},
                           {Op::Not, Op::And, Op::Or, Op::Yesterday, Op::BoundedYesterday,
                            Op::StarYesterday, Op::Past, Op::Since, Op::Mod},
                           8};
    for (int i = 0; i < 60; ++i) {
        const Formula f = random_formula(spec, rng);
        const Formula g = expand_bounded(f);
        CAPTURE(f.to_string());
        CHECK_FALSE(contains(g, Op::BoundedYesterday));
        CHECK_FALSE(contains(g, Op::StarYesterday));
        CHECK(same_language(f, g, abc, 6));
    }
}

TEST_CASE("rewrite_with_mod") {
    const Formula a = atom("a");
    const Formula expected =
        (mod(2, 1) & Yk(2, mod(2, 0) & a)) | (mod(2, 0) & Yk(2, mod(2, 1) & a));
    CHECK(rewrite_with_mod(Y(a), 2, 2) == expected);
    CHECK(rewrite_with_mod(P(a), 3, 4) == P(a));
    CHECK(same_language(rewrite_with_mod(Y(a), 2, 2), Y(a), ab, 10));

    CHECK_THROWS_AS(rewrite_with_mod(S(a, a), 2, 2), ContractError);
    CHECK_THROWS_AS(rewrite_with_mod(Ystar(a), 2, 2), ContractError);
    CHECK_THROWS_AS(rewrite_with_mod(U(a, a), 2, 2), ContractError);
    CHECK_THROWS_AS(rewrite_with_mod(Y(a), 1, 2), ContractError);
    CHECK_THROWS_AS(rewrite_with_mod(Y(a), 3, 2), ContractError);

    const std::vector<Formula> samples = {
        Y(a), Y(Y(atom("b"))), P(atom("b") & Y(a)), !Y(a) | P(Y(atom("b"))),
        Y(atom("b") & Y(a)),
    };
    for (const auto& f : samples) {
        for (int k = 2; k <= 3; ++k) {
            for (int m = k; m <= k + 1; ++m) {
                CAPTURE(f.to_string());
                CAPTURE(k);
                CAPTURE(m);
                CHECK(same_language(rewrite_with_mod(f, k, m), f, ab, 8));
            }
        }
    }
}

TEST_CASE("locally testable formulas") {
    CHECK(locally_testable_formula(LocalKind::Factor, {"a", "b"}, 2) == P(atom("b") & Y(atom("a"))));
    CHECK(locally_testable_formula(LocalKind::Prefix, {"a"}, 2) == P(atom("a") & !P(top())));
    CHECK(locally_testable_formula(LocalKind::Suffix, {"a"}, 2) == Y(atom("a")));
    CHECK(locally_testable_formula(LocalKind::Prefix, {}, 1) == top());
    CHECK_THROWS_AS(locally_testable_formula(LocalKind::Factor, {"a"}, 2), ContractError);
    CHECK_THROWS_AS(locally_testable_formula(LocalKind::Suffix, {"a", "b"}, 2), ContractError);

    // Brute-force set definitions for m = 3 over {a,b}.
    for (const auto& u : all_words(2, 3)) {
        const std::vector<std::string> toks = {ab.token(u[0]), ab.token(u[1]), ab.token(u[2])};
        Evaluator e(locally_testable_formula(LocalKind::Factor, toks, 3), ab);
        for_each_word(2, 7, [&](const Word& w) {
            const bool has = std::search(w.begin(), w.end(), u.begin(), u.end()) != w.end();
            CHECK(e.accepts(w) == has);
        });
    }
    for (const auto& u : all_words(2, 2)) {
        const std::vector<std::string> toks = {ab.token(u[0]), ab.token(u[1])};
        Evaluator pre(locally_testable_formula(LocalKind::Prefix, toks, 3), ab);
        Evaluator suf(locally_testable_formula(LocalKind::Suffix, toks, 3), ab);
        for_each_word(2, 7, [&](const Word& w) {
            const bool p = w.size() >= 2 && std::equal(u.begin(), u.end(), w.begin());
            const bool s = w.size() >= 2 && std::equal(u.begin(), u.end(), w.end() - 2);
            CHECK(pre.accepts(w) == p);
            CHECK(suf.accepts(w) == s);
        });
    }
}

TEST_CASE("enumeration") {
    EnumerationSpec spec;
    spec.atoms = {"a"};
    spec.unary = {Op::Not};
    spec.binary = {};
    spec.max_size = 3;
    // true, false, a, and one and two negations of each
    CHECK(enumerate_formulas(spec).size() == 9);

    spec.unary = {Op::Past};
    spec.max_depth = 1;
    // P P x is excluded by the depth bound
    CHECK(enumerate_formulas(spec).size() == 6);

    spec.unary = {Op::Not, Op::Past};
    spec.binary = {Op::And};
    spec.max_size = 5;
    spec.max_depth = 3;
    const auto all = enumerate_formulas(spec);
    std::set<Formula> distinct(all.begin(), all.end());
    CHECK(distinct.size() == all.size());
    for (const auto& f : all) CHECK(f.size() <= 5);

    spec.budget = 10;
    CHECK_THROWS_AS(enumerate_formulas(spec), ResourceError);
}

TEST_CASE("contract violations") {
    CHECK_THROWS_AS(Formula::bounded_yesterday(0, top()), ContractError);
    CHECK_THROWS_AS(Formula::mod(0, 0), ContractError);
    CHECK_THROWS_AS(Formula::atom(""), ContractError);
    CHECK(Formula::mod(3, 7).residue() == 1);
}
