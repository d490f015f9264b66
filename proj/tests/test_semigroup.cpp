#include <doctest.h>

#include <set>

#include "tal/error.hpp"
#include "tal/semigroup.hpp"

using namespace tal;

namespace {

const Alphabet ab{"a", "b"};
constexpr State X = kNoState;

Dfa alt_ab() { return minimize(Dfa::complete(ab, 2, 0, {true, false}, {1, X, X, 0})); }
Dfa dyck2() { return Dfa::complete(ab, 3, 0, {true, false, false}, {1, X, 2, 0, X, 1}); }
Dfa ends_a() { return Dfa(ab, 2, 0, {false, true}, {1, 0, 1, 0}); }
Dfa starts_a() { return Dfa(ab, 3, 0, {false, true, false}, {1, 2, 1, 1, 2, 2}); }
Dfa even_a() { return Dfa(ab, 2, 0, {true, false}, {1, 0, 0, 1}); }
Dfa one_state() { return Dfa(ab, 1, 0, {true}, {0, 0}); }

// Literal definition: for each idempotent e, the monoid eSe with identity e
// is R-trivial iff distinct elements generate distinct principal right ideals
// x·eSe.
bool literal_locally_r_trivial(const Semigroup& sg) {
    for (std::size_t e : sg.idempotents()) {
        std::set<std::size_t> local;
        for (std::size_t s = 0; s < sg.size(); ++s) local.insert(sg.product(sg.product(e, s), e));
        std::set<std::set<std::size_t>> ideals;
        for (std::size_t x : local) {
            std::set<std::size_t> ideal;
            for (std::size_t m : local) ideal.insert(sg.product(x, m));
            if (!ideals.insert(ideal).second) return false;
        }
    }
    return true;
}

std::vector<Dfa> random_minimal_corpus(std::size_t count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Dfa> out;
    while (out.size() < count) {
        const Alphabet sigma = letters(1 + tal::uniform_below(rng, 3));
        out.push_back(minimize(random_dfa(sigma, 1 + tal::uniform_below(rng, 5), rng)));
    }
    return out;
}

}  // namespace

TEST_CASE("transition semigroup") {
    const Semigroup s = Semigroup::of(ends_a());
    CHECK(s.size() == 2);
    CHECK(s.element(s.generator(0)) == Transformation{1, 1});
    CHECK(s.element(s.generator(1)) == Transformation{0, 0});
    CHECK(s.idempotents().size() == 2);

    const Semigroup one = Semigroup::of(one_state());
    CHECK(one.size() == 1);
    CHECK(one.idempotents() == std::vector<std::size_t>{0});

    // aΣ*: states 0 (start), 1 (accept-all), 2 (sink); t_a fixes both absorbing states.
    const Semigroup st = Semigroup::of(starts_a());
    const Transformation& ta = st.element(st.generator(0));
    CHECK(ta[1] == 1);
    CHECK(ta[2] == 2);

    // Witness words induce their elements; products agree with composition.
    const Dfa dy = dyck2();
    const Semigroup sg = Semigroup::of(dy);
    for (std::size_t i = 0; i < sg.size(); ++i) {
        for (State q = 0; q < dy.size(); ++q) CHECK(dy.run_from(q, sg.witness(i)) == sg.element(i)[q]);
        for (std::size_t j = 0; j < sg.size(); ++j)
            CHECK(sg.element(sg.product(i, j)) == compose(sg.element(i), sg.element(j)));
    }
    // Witnesses are shortest: BFS order is non-decreasing in length.
    for (std::size_t i = 1; i < sg.size(); ++i) CHECK(sg.witness(i - 1).size() <= sg.witness(i).size());

    // (ab)*: t_ab is idempotent.
    const Dfa alt = alt_ab();
    const Semigroup sa = Semigroup::of(alt);
    Transformation tab(alt.size());
    for (State q = 0; q < alt.size(); ++q) tab[q] = alt.run_from(q, ab.parse_word("ab"));
    const auto i_ab = sa.find(tab);
    REQUIRE(i_ab);
    CHECK(sa.is_idempotent(*i_ab));
    CHECK(sa.product(*i_ab, *i_ab) == *i_ab);

    CHECK_THROWS_AS(Semigroup::of(dy, 3), ResourceError);
}

TEST_CASE("definiteness") {
    CHECK(is_definite(Semigroup::of(ends_a())).definite);
    const DefiniteVerdict v = is_definite(Semigroup::of(starts_a()));
    CHECK_FALSE(v.definite);
    const Semigroup st = Semigroup::of(starts_a());
    CHECK(st.product(v.s, v.e) != v.e);
    CHECK_FALSE(is_definite(Semigroup::of(alt_ab())).definite);
    CHECK(is_definite(Semigroup::of(one_state())).definite);

    CHECK(is_nonpermutational(Semigroup::of(ends_a())).nonpermutational);
    const PermutationVerdict p = is_nonpermutational(st);
    CHECK_FALSE(p.nonpermutational);
    CHECK(p.element == st.generator(0));
    CHECK(p.subset == std::vector<State>{1, 2});

    CHECK(definiteness_order(ends_a()) == 1u);
    CHECK(definiteness_order(starts_a()) == std::nullopt);
    CHECK(definiteness_order(one_state()) == 0u);
    // Σ*ab is 2-definite.
    const Dfa ends_ab(ab, 3, 0, {false, false, true}, {1, 0, 1, 2, 1, 0});
    CHECK(definiteness_order(ends_ab) == 2u);
}

TEST_CASE("local R-triviality and forbidden configurations") {
    const Dfa dy = dyck2();
    CHECK_FALSE(is_locally_r_trivial(Semigroup::of(dy)).locally_r_trivial);
    const auto w = find_forbidden_config(dy);
    REQUIRE(w);
    CHECK(w->q == 0);
    CHECK(w->q2 == 1);
    CHECK(ab.render(w->u) == "a");
    CHECK(ab.render(w->v) == "b");
    CHECK(ab.render(w->x) == "ab");
    CHECK(check_config(dy, *w));

    CHECK(is_locally_r_trivial(Semigroup::of(alt_ab())).locally_r_trivial);
    CHECK_FALSE(find_forbidden_config(alt_ab()));
    CHECK_FALSE(find_forbidden_config(one_state()));
    CHECK(is_locally_r_trivial(Semigroup::of(ends_a())).locally_r_trivial);

    const RTrivialVerdict r = is_locally_r_trivial(Semigroup::of(dy));
    const Semigroup sg = Semigroup::of(dy);
    CHECK(sg.is_idempotent(r.e));
    CHECK(r.x != r.y);
    CHECK(sg.product(sg.product(r.e, r.x), r.e) == r.x);
    CHECK(sg.product(sg.product(r.e, r.y), r.e) == r.y);
}

TEST_CASE("aperiodicity") {
    CHECK(is_aperiodic(Semigroup::of(dyck2())));
    CHECK_FALSE(is_aperiodic(Semigroup::of(even_a())));
    CHECK(is_aperiodic(Semigroup::of(one_state())));
    CHECK(is_aperiodic(Semigroup::of(alt_ab())));
}

TEST_CASE("theorem agreement on random automata") {
    for (const Dfa& d : random_minimal_corpus(200, 77)) {
        const Semigroup sg = Semigroup::of(d);
        const DefiniteVerdict def = is_definite(sg);
        const PermutationVerdict perm = is_nonpermutational(sg);
        const bool suffix = definiteness_order(d).has_value();
        CHECK(def.definite == perm.nonpermutational);
        CHECK(def.definite == suffix);
        if (!def.definite) CHECK(sg.product(def.s, def.e) != def.e);

        const RTrivialVerdict lr = is_locally_r_trivial(sg);
        const auto config = find_forbidden_config(d);
        CHECK(lr.locally_r_trivial == !config.has_value());
        CHECK(lr.locally_r_trivial == literal_locally_r_trivial(sg));
        if (config) CHECK(check_config(d, *config));

        const bool aperiodic = is_aperiodic(sg);
        if (def.definite) CHECK(lr.locally_r_trivial);
        if (lr.locally_r_trivial) CHECK(aperiodic);
    }
}

TEST_CASE("json") {
    const Semigroup sg = Semigroup::of(dyck2());
    const Json j = to_json(sg, ab, 3);
    CHECK(j["size"] == sg.size());
    CHECK(j["elements"].size() == 3);
    CHECK(j["truncated"] == true);
    CHECK(j["elements"][0]["witness"] == "a");
    const Json c = to_json(*find_forbidden_config(dyck2()), ab);
    CHECK(c.dump() == R"({"q":0,"q_prime":1,"u":"a","v":"b","x":"ab"})");
}
