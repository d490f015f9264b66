#include <doctest.h>

#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>

#include "tal/error.hpp"
#include "tal/model.hpp"
#include "tal/rng.hpp"

using namespace tal;
using Rational = boost::multiprecision::cpp_rational;
using boost::multiprecision::cpp_int;

namespace {

// Exact-rational reference rounding, independent of FpFormat's internals.
Rational exact(double x) {
    int e = 0;
    const double f = std::frexp(x, &e);
    const auto m = static_cast<long long>(std::ldexp(f, 60));
    Rational r(m);
    if (e - 60 >= 0) r *= Rational(cpp_int(1) << (e - 60));
    else r /= Rational(cpp_int(1) << (60 - e));
    return r;
}

double reference_round(const Rational& x, int ebits, int mbits) {
    if (x == 0) return 0.0;
    const int emax = (1 << (ebits - 1)) - 1, emin = 1 - emax;
    const Rational ax = x < 0 ? Rational(-x) : x;
    int e = 0;  // floor(log2 |x|)
    Rational p(1);
    while (p * 2 <= ax) { p *= 2; ++e; }
    while (p > ax) { p /= 2; --e; }
    e = std::max(e, emin);
    const int qexp = e - mbits;
    const Rational quantum = qexp >= 0 ? Rational(cpp_int(1) << qexp) : Rational(1) / Rational(cpp_int(1) << -qexp);
    const Rational scaled = ax / quantum;
    cpp_int fl = numerator(scaled) / denominator(scaled);
    const Rational rem = scaled - Rational(fl);
    if (rem > Rational(1, 2) || (rem == Rational(1, 2) && (fl & 1) == 1)) ++fl;
    double out = std::ldexp(static_cast<double>(fl), qexp);
    const double maxf = std::ldexp(2.0 - std::ldexp(1.0, -mbits), emax);
    if (out > maxf) out = maxf;
    return x < 0 ? -out : out;
}

double random_value(Rng& rng, const FpFormat& fp, int spread) {
    const double mag = std::ldexp(1.0 + uniform_unit(rng), static_cast<int>(uniform_below(rng, 2 * spread + 1)) - spread);
    return fp.round((rng() & 1) ? mag : -mag);
}

Matrix from_rows(std::vector<std::vector<double>> rows) {
    Matrix m(rows.size(), rows.at(0).size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
    return m;
}

Head simple_head(Mask mask) {
    // d = 2: scores C*x0 at key positions, values copy x1.
    return Head{from_rows({{1, 0}}), from_rows({{1, 0}}), from_rows({{0, 1}}), from_rows({{0}, {1}}), mask};
}

}  // namespace

TEST_CASE("format rounding") {
    const FpFormat tiny(4, 3);
    CHECK(tiny.round(0.0L) == 0.0);
    CHECK(tiny.round(1.0L + 1.0L / 32) == 1.0);
    CHECK(tiny.round(1.0L + 1.0L / 16) == 1.0);      // tie, to even
    CHECK(tiny.round(1.0L + 3.0L / 16) == 1.25);     // tie, to even
    CHECK(tiny.max_finite() == 240.0);
    CHECK(tiny.round(1e6L) == 240.0);
    CHECK(tiny.round(-1e6L) == -240.0);
    CHECK(tiny.min_subnormal() == std::ldexp(1.0, -9));
    CHECK(tiny.round(std::ldexp(1.0L, -11)) == 0.0);
    CHECK(std::signbit(tiny.round(-std::ldexp(1.0L, -11))));
    CHECK(tiny.add(tiny.add(8, 0.5), 0.5) == 8.0);
    CHECK(tiny.add(8, tiny.add(0.5, 0.5)) == 9.0);
    CHECK(tiny.representable(0.875));
    CHECK_FALSE(tiny.representable(0.9375 + 0.03125));
    CHECK(tiny.name() == "e4m3");
    CHECK_THROWS_AS(FpFormat(1, 3), ContractError);
    CHECK_THROWS_AS(FpFormat(8, 0), ContractError);
    CHECK_THROWS_AS(FpFormat(12, 3), ContractError);
    CHECK(FpFormat::binary32().max_finite() == static_cast<double>(std::numeric_limits<float>::max()));
}

TEST_CASE("primitive operations match exact rounding") {
    Rng rng(1234);
    for (const auto& [eb, mb] : std::vector<std::pair<int, int>>{{8, 23}, {5, 10}, {4, 3}, {11, 30}, {3, 2}}) {
        const FpFormat fp(eb, mb);
        const int spread = std::min(fp.emax() / 2, 20);
        CAPTURE(fp.name());
        for (int i = 0; i < 1000; ++i) {
            const double a = random_value(rng, fp, spread), b = random_value(rng, fp, spread);
            CAPTURE(a);
            CAPTURE(b);
            CHECK(fp.add(a, b) == reference_round(exact(a) + exact(b), eb, mb));
            CHECK(fp.sub(a, b) == reference_round(exact(a) - exact(b), eb, mb));
            CHECK(fp.mul(a, b) == reference_round(exact(a) * exact(b), eb, mb));
            CHECK(fp.div(a, b) == reference_round(exact(a) / exact(b), eb, mb));
        }
    }
    const FpFormat b32 = FpFormat::binary32();
    for (int i = 0; i < 1000; ++i) {
        const float a = static_cast<float>(random_value(rng, b32, 30));
        const float b = static_cast<float>(random_value(rng, b32, 30));
        CHECK(b32.add(a, b) == static_cast<double>(a + b));
        CHECK(b32.mul(a, b) == static_cast<double>(a * b));
        CHECK(b32.div(a, b) == static_cast<double>(a / b));
        CHECK(b32.sqrt(std::fabs(a)) == static_cast<double>(std::sqrt(std::fabs(a))));
    }
    // Midpoint detection in the generic path: 1 + 2^-11 + 2^-40 in e5m10.
    const FpFormat half(5, 10);
    CHECK(half.add(1.0 + std::ldexp(1.0, -11), std::ldexp(1.0, -40)) == 1.0 + std::ldexp(1.0, -10));
    CHECK(half.exp(0.0) == 1.0);
    CHECK(half.exp(20.0) == half.max_finite());
    CHECK(b32.exp(1.0) == static_cast<double>(static_cast<float>(std::exp(1.0L))));
}

TEST_CASE("masks") {
    for (int k : {1, 2, 4}) {
        const auto m = materialize(Mask::local(k), 64);
        for (std::size_t n = 1; n <= 64; ++n)
            for (std::size_t j = 1; j <= 64; ++j)
                CHECK(m[n - 1][j - 1] == ((std::max<long>(1, static_cast<long>(n) - k) <= static_cast<long>(j) && j < n) ? 1 : 0));
    }
    const auto g = materialize(Mask::global(), 64);
    for (std::size_t n = 1; n <= 64; ++n)
        for (std::size_t j = 1; j <= 64; ++j) CHECK(g[n - 1][j - 1] == (j < n ? 1 : 0));
    CHECK_THROWS_AS(Mask::local(0), ContractError);
}

TEST_CASE("attention forward") {
    const FpFormat fp = FpFormat::binary32();
    // Columns: positions 1..4; row 0 = key feature, row 1 = value.
    const Matrix x = from_rows({{1, 1, 1, 1}, {0.25, 0.5, 1, 2}});

    AttentionDetail det;
    const Matrix o1 = attention_forward(x, simple_head(Mask::local(1)), fp, &det);
    CHECK(o1(0, 0) == 0.0);
    CHECK(o1(0, 1) == 0.25);
    CHECK(o1(0, 3) == 1.0);

    const Matrix o2 = attention_forward(x, simple_head(Mask::local(2)), fp, &det);
    CHECK(det.alpha(3, 0) == 0.0);
    CHECK(det.alpha(3, 1) == 0.5);
    CHECK(det.alpha(3, 2) == 0.5);
    CHECK(det.alpha(3, 3) == 0.0);
    CHECK(o2(0, 3) == 0.75);

    const Matrix og = attention_forward(x, simple_head(Mask::global()), fp, &det);
    CHECK(og(0, 0) == 0.0);
    for (std::size_t m = 0; m < 3; ++m) CHECK(det.alpha(3, m) == fp.div(1, 3));

    // Dimension mismatch.
    CHECK_THROWS_AS(attention_forward(from_rows({{1, 2}}), simple_head(Mask::global()), fp), ContractError);
}

TEST_CASE("attention invariants on random inputs") {
    // Weights are kept small so that no score overflows exp in either format.
    Rng rng(55);
    for (const FpFormat& fp : {FpFormat::binary32(), FpFormat(5, 10)}) {
        for (int trial = 0; trial < 30; ++trial) {
            const std::size_t d = 3, cols = 1 + uniform_below(rng, 12);
            Matrix x(d, cols);
            for (std::size_t r = 0; r < d; ++r)
                for (std::size_t c = 0; c < cols; ++c) x(r, c) = random_value(rng, fp, 1);
            auto rand_m = [&](std::size_t rr, std::size_t cc) {
                Matrix m(rr, cc);
                for (std::size_t r = 0; r < rr; ++r)
                    for (std::size_t c = 0; c < cc; ++c) m(r, c) = fp.mul(0.125, random_value(rng, fp, 1));
                return m;
            };
            const Mask mask = trial % 2 ? Mask::global() : Mask::local(1 + static_cast<int>(uniform_below(rng, 3)));
            const Head h{rand_m(2, d), rand_m(2, d), rand_m(2, d), rand_m(d, 2), mask};
            AttentionDetail det;
            const Matrix o = attention_forward(x, h, fp, &det);
            const double step = std::ldexp(1.0, -fp.mantissa_bits());
            for (std::size_t n = 1; n <= cols; ++n) {
                double sum = 0.0;
                std::size_t terms = 0;
                for (std::size_t m = 1; m <= cols; ++m) {
                    if (!mask.allows(n, m)) CHECK(det.alpha(n - 1, m - 1) == 0.0);
                    sum += det.alpha(n - 1, m - 1);
                    terms += mask.allows(n, m);
                }
                if (terms == 0) {
                    CHECK(sum == 0.0);
                    for (std::size_t r = 0; r < 2; ++r) CHECK(o(r, n - 1) == 0.0);
                } else {
                    CHECK(std::fabs(sum - 1.0) <= static_cast<double>(terms + 1) * step);
                }
            }
            // Causality: changing a later column leaves earlier outputs intact.
            if (cols >= 2) {
                Matrix y = x;
                for (std::size_t r = 0; r < d; ++r) y(r, cols - 1) = fp.add(y(r, cols - 1), 1.0);
                const Matrix oy = attention_forward(y, h, fp);
                for (std::size_t c = 0; c + 1 < cols; ++c)
                    for (std::size_t r = 0; r < 2; ++r) CHECK(oy(r, c) == o(r, c));
            }
            CHECK(attention_forward(x, h, fp) == o);
        }
    }
}

TEST_CASE("multi-head combination") {
    const FpFormat fp = FpFormat::binary32();
    const Matrix x = from_rows({{1, 0.5, 0.25}, {2, 4, 0.5}});
    const Head one = simple_head(Mask::global());
    CHECK(multi_head(x, {one}, fp) == matmul(one.wout, attention_forward(x, one, fp), fp));

    Head half = one;
    half.wout = from_rows({{0}, {0.5}});
    CHECK(multi_head(x, {half, half}, fp) == multi_head(x, {one}, fp));

    const Matrix mixed = multi_head(x, {simple_head(Mask::global()), simple_head(Mask::local(1))}, fp);
    CHECK_FALSE(mixed == multi_head(x, {simple_head(Mask::global())}, fp));
    CHECK_FALSE(mixed == multi_head(x, {simple_head(Mask::local(1))}, fp));
}

TEST_CASE("layer norm and ffn") {
    const FpFormat fp = FpFormat::binary32();
    const Matrix y = layer_norm(from_rows({{1, 3}, {3, 3}}), fp);
    CHECK(std::fabs(y(0, 0) + 1.0) < 1e-4);
    CHECK(std::fabs(y(1, 0) - 1.0) < 1e-4);
    CHECK(y(0, 1) == 0.0);

    Ffn f{{Gate::threshold(0, 0), Gate::negation(1, 0), Gate::conjunction(2, 0, 1), Gate::disjunction(3, 0, 1),
           Gate::constant(4, 0.25)}};
    const Matrix h = from_rows({{0.8, 0.2}, {0, 0}, {1, 1}, {0, 0}, {0, 0}});
    const Matrix out = add(h, f.apply(h, fp), fp);
    CHECK(out == from_rows({{1, 0}, {0, 1}, {0, 0}, {1, 1}, {0.25, 0.25}}));
}

TEST_CASE("model json round trip") {
    Model m{FpFormat::binary32(), Alphabet{"a", "b"}, 2, {{1, 0}, {0, 0}, {0, 1}}, {}, {0, 0.5, true}};
    Layer l;
    l.heads.push_back(simple_head(Mask::local(2)));
    l.heads.push_back(simple_head(Mask::global()));
    l.ffn.gates = {Gate::threshold(0, 0), Gate::constant(1, 0.1f)};
    m.layers.push_back(l);
    m.validate();
    const Json j = model_to_json(m);
    const Model back = model_from_json(j);
    CHECK(model_to_json(back) == j);
    CHECK(j["layers"][0]["ffn"][1]["value"] == decimal(static_cast<double>(0.1f)));
    const Word w = m.alphabet.parse_word("abba");
    CHECK(model_run(back, w) == model_run(m, w));

    Json bad = j;
    bad["layers"][0]["heads"][0]["wq"][0][0] = "0.1";  // not exact in binary32
    CHECK_THROWS_AS(model_from_json(bad), FormatError);
    bad = j;
    bad["layers"][0]["heads"][0]["mask"] = "diagonal";
    CHECK_THROWS_AS(model_from_json(bad), FormatError);
    bad = j;
    bad["classifier"]["channel"] = 9;
    CHECK_THROWS_AS(model_from_json(bad), FormatError);
    CHECK_THROWS_AS(model_from_json(Json::parse("{}")), FormatError);
}
