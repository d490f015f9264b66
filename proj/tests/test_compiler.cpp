#include <doctest.h>

#include "tal/compiler.hpp"
#include "tal/error.hpp"
#include "tal/rng.hpp"

using namespace tal;

namespace {

const Alphabet ab{"a", "b"};

CompiledModel build(const char* text, const Alphabet& sigma = ab) { return compile(parse_formula(text), sigma); }

VerifyReport check(const char* text, std::size_t exhaustive = 8, const Alphabet& sigma = ab) {
    const CompiledModel c = build(text, sigma);
    return verify_compiled(c.model, parse_formula(text), exhaustive, 60, 20, 7, 1, true);
}

}  // namespace

TEST_CASE("layer count and masks") {
    {
        const CompiledModel c = build("Y a");
        CHECK(c.model.layers.size() == 1);
        const MaskCensus m = mask_census(c.model);
        CHECK(m.global_heads == 0);
        CHECK(m.local_heads == std::vector<int>{1});
    }
    {
        const CompiledModel c = build("P (a & !P true)");
        CHECK(c.model.layers.size() == 2);
        const MaskCensus m = mask_census(c.model);
        CHECK(m.global_heads == 2);
        CHECK(m.local_heads.empty());
    }
    {
        const MaskCensus m = mask_census(build("P (b & Y a)").model);
        CHECK(m.global_heads == 1);
        CHECK(m.local_heads == std::vector<int>{1});
    }
    {
        const MaskCensus m = mask_census(build("Y^4 a & P b").model);
        CHECK(m.global_heads == 1);
        CHECK(m.local_heads == std::vector<int>{4});
    }
    {
        const CompiledModel c = build("a | !b");
        CHECK(c.model.layers.size() == 1);
        CHECK(c.model.layers[0].heads.empty());
    }
}

TEST_CASE("layers follow operator depth, expanded or not") {
    for (const char* text : {"Y^3 (a & Y b)", "Ystar (Y a)", "P (Y^2 a) | Y b"}) {
        const Formula f = parse_formula(text);
        const Formula g = expand_bounded(f);
        CHECK(compile(f, ab).model.layers.size() == static_cast<std::size_t>(operator_depth(f)));
        CHECK(compile(g, ab).model.layers.size() == static_cast<std::size_t>(operator_depth(g)));
        CHECK(verify_compiled(compile(g, ab).model, f, 8, 0, 0, 1).ok());
    }
}

TEST_CASE("shared subformulas get one channel") {
    const CompiledModel c = build("Y a & (Y a | P Y a)");
    CHECK(c.plan.width() == 6);  // const, a, Y a, P Y a, |, &
}

TEST_CASE("compiled models agree with the semantics") {
    for (const char* text : {"Y a", "Y (b & Y a)", "P (a & !P true)", "P (b & P a)", "P (b & Y a)",
                             "!P true | (P (a & !P true) & Y b & !P (a & Y a) & !P (b & Y b))", "Y^3 b",
                             "Ystar (a & Y^2 b)", "true", "false", "!Y true", "a"}) {
        CAPTURE(text);
        const VerifyReport r = check(text);
        CHECK(r.mismatches.empty());
        CHECK(r.margin_violations == 0);
    }
    const VerifyReport bot = check("false");
    CHECK(bot.accepted == 0);
}

TEST_CASE("random formulas") {
    RandomFormulaSpec spec{{"a", "b", "c"},
                           {Op::Not, Op::And, Op::Or, Op::Yesterday, Op::BoundedYesterday, Op::StarYesterday,
                            Op::Past},
                           9};
    const Alphabet abc{"a", "b", "c"};
    Rng rng(11);
    for (int i = 0; i < 40; ++i) {
        const Formula f = random_formula(spec, rng);
        CAPTURE(f.to_string());
        const CompiledModel c = compile(f, abc);
        CHECK(c.model.layers.size() == static_cast<std::size_t>(std::max(1, operator_depth(f))));
        CHECK(verify_compiled(c.model, f, 6, 40, 10, i, 1, true).ok());
    }
}

TEST_CASE("verification finds broken models") {
    CompiledModel c = build("P (b & Y a)");
    c.model.classifier.above = false;
    const VerifyReport r = verify_compiled(c.model, parse_formula("P (b & Y a)"), 4, 0, 0, 1);
    CHECK(r.mismatches.size() == r.checked);
    CHECK(!r.ok());
}

TEST_CASE("report is independent of jobs") {
    const CompiledModel c = build("P (b & Y a)");
    const Formula f = parse_formula("P (b & Y a)");
    const VerifyReport one = verify_compiled(c.model, f, 6, 50, 30, 3, 1);
    const VerifyReport four = verify_compiled(c.model, f, 6, 50, 30, 3, 4);
    CHECK(one.checked == four.checked);
    CHECK(one.accepted == four.accepted);
    CHECK(to_json(one, ab) == to_json(four, ab));
}

TEST_CASE("rejections") {
    CHECK_THROWS_AS(build("a S b"), ContractError);
    CHECK_THROWS_AS(build("a U b"), ContractError);
    CHECK_THROWS_AS(build("MOD(2,0)"), ContractError);
    CompileParams weak;
    weak.score_gain = 2.0;
    CHECK_THROWS_AS(compile(parse_formula("P a"), ab, weak), ContractError);
    CompileParams coarse;
    coarse.fp = FpFormat(3, 2);  // exp(C) saturates at 14
    CHECK_THROWS_AS(compile(parse_formula("P a"), ab, coarse), ContractError);
    CompileParams narrow;
    narrow.max_width = 3;
    CHECK_THROWS_AS(compile(parse_formula("Y (a & Y b)"), ab, narrow), ResourceError);
}

TEST_CASE("margin") {
    CHECK(concentration_margin({}) > 0.99);
    CompileParams p;
    p.score_gain = 10.0;
    p.max_length = 1000;
    CHECK(concentration_margin(p) > 0.95);
}

TEST_CASE("JSON round trip keeps behaviour") {
    const CompiledModel c = build("P (b & Y a) | Y^2 b");
    const Model back = model_from_json(model_to_json(c.model));
    CHECK(model_to_json(back) == model_to_json(c.model));
    CHECK(verify_compiled(back, parse_formula("P (b & Y a) | Y^2 b"), 8, 0, 0, 1).ok());
}

TEST_CASE("absent atoms never fire") {
    const CompiledModel c = build("P z | Y a");
    CHECK(verify_compiled(c.model, parse_formula("P z | Y a"), 7, 0, 0, 1).ok());
}
