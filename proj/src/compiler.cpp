#include "tal/compiler.hpp"

#include <mutex>

#include "tal/error.hpp"
#include "tal/parallel.hpp"
#include "tal/rng.hpp"

namespace tal {

double concentration_margin(const CompileParams& p) {
    const FpFormat& fp = p.fp;
    const long double e = fp.exp(fp.round(p.score_gain));
    const long double total = e + static_cast<long double>(p.max_length);
    // A saturated denominator would hide the loss of mass, so report 0.
    if (total > fp.max_finite()) return 0.0;
    return static_cast<double>(e / total);
}

namespace {

void plan_node(const Formula& f, ChannelPlan& plan) {
    if (plan.channel.count(f) || f.op() == Op::Top) return;
    if (is_unary(f.op()) || is_binary(f.op())) plan_node(f.lhs(), plan);
    if (is_binary(f.op())) plan_node(f.rhs(), plan);
    plan.order.push_back(f);
    plan.channel.emplace(f, plan.order.size());
    plan.level.emplace(f, operator_depth(f));
}

std::size_t channel_of(const ChannelPlan& plan, const Formula& f) {
    return f.op() == Op::Top ? 0 : plan.channel.at(f);
}

Mask mask_for(const Formula& g) {
    switch (g.op()) {
        case Op::Yesterday: return Mask::local(1);
        case Op::BoundedYesterday: return Mask::local(g.bound());
        default: return Mask::global();  // P, Ystar
    }
}

// Value of a depth-0 subformula at a position holding `symbol` (-1 at EOS).
bool token_value(const Formula& f, const Alphabet& alphabet, int symbol) {
    switch (f.op()) {
        case Op::Top: return true;
        case Op::Bot: return false;
        case Op::Atom: {
            const auto s = alphabet.find(f.token());
            return s && static_cast<int>(*s) == symbol;
        }
        case Op::Not: return !token_value(f.lhs(), alphabet, symbol);
        case Op::And: return token_value(f.lhs(), alphabet, symbol) && token_value(f.rhs(), alphabet, symbol);
        case Op::Or: return token_value(f.lhs(), alphabet, symbol) || token_value(f.rhs(), alphabet, symbol);
        default: throw Error("token_value on a temporal formula");
    }
}

}  // namespace

CompiledModel compile(const Formula& f, const Alphabet& alphabet, const CompileParams& params) {
    for (Op bad : {Op::Until, Op::Since, Op::Mod}) {
        if (contains(f, bad))
            throw ContractError(std::string("compile: operator ") + op_name(bad) + " is not supported");
    }
    const double margin = concentration_margin(params);
    if (!(margin >= 0.75))
        throw ContractError("compile: score gain " + decimal(params.score_gain) + " gives margin " +
                            decimal(margin) + " < 3/4 for length " + std::to_string(params.max_length) +
                            " in format " + params.fp.name());
    const double gain = params.fp.round(params.score_gain);

    CompiledModel out{Model{params.fp, alphabet, 0, {}, {}, {}}, {}};
    ChannelPlan& plan = out.plan;
    plan_node(f, plan);
    const std::size_t d = plan.width();
    if (d > params.max_width)
        throw ResourceError("compile: " + std::to_string(d) + " channels exceed the width budget of " +
                            std::to_string(params.max_width));

    Model& m = out.model;
    m.d = d;
    for (int symbol = 0; symbol <= static_cast<int>(alphabet.size()); ++symbol) {
        const int s = symbol < static_cast<int>(alphabet.size()) ? symbol : -1;  // last row: EOS
        std::vector<double> e(d, 0.0);
        e[0] = 1.0;
        for (std::size_t c = 1; c < d; ++c) {
            const Formula& g = plan.order[c - 1];
            if (plan.level.at(g) == 0) e[c] = token_value(g, alphabet, s) ? 1.0 : 0.0;
        }
        m.encoder.push_back(std::move(e));
    }

    const int layers = std::max(1, operator_depth(f));
    for (int l = 1; l <= layers; ++l) {
        Layer layer;
        // Heads for the temporal subformulas at this depth, thresholded by the FFN.
        for (const Formula& g : plan.order) {
            if (!is_temporal(g.op()) || plan.level.at(g) != l) continue;
            const std::size_t child = channel_of(plan, g.lhs()), target = plan.channel.at(g);
            Head h{Matrix(1, d), Matrix(1, d), Matrix(1, d), Matrix(d, 1), mask_for(g)};
            h.wq(0, 0) = gain;
            h.wk(0, child) = 1.0;
            h.wv(0, child) = 1.0;
            h.wout(target, 0) = 1.0;
            layer.heads.push_back(std::move(h));
            layer.ffn.gates.push_back(Gate::threshold(target, target));
        }
        // Boolean subformulas at this depth, children first.
        for (const Formula& g : plan.order) {
            if (is_temporal(g.op()) || plan.level.at(g) != l) continue;
            const std::size_t target = plan.channel.at(g);
            switch (g.op()) {
                case Op::Not: layer.ffn.gates.push_back(Gate::negation(target, channel_of(plan, g.lhs()))); break;
                case Op::And:
                    layer.ffn.gates.push_back(
                        Gate::conjunction(target, channel_of(plan, g.lhs()), channel_of(plan, g.rhs())));
                    break;
                case Op::Or:
                    layer.ffn.gates.push_back(
                        Gate::disjunction(target, channel_of(plan, g.lhs()), channel_of(plan, g.rhs())));
                    break;
                default: throw Error("compile: unexpected node " + g.to_string());
            }
        }
        m.layers.push_back(std::move(layer));
    }
    m.classifier = Classifier{channel_of(plan, f), 0.5, true};
    m.validate();
    return out;
}

MaskCensus mask_census(const Model& m) {
    MaskCensus c;
    for (const Layer& l : m.layers) {
        for (const Head& h : l.heads) {
            if (h.mask.kind == MaskKind::Global) ++c.global_heads;
            else c.local_heads.push_back(h.mask.k);
        }
    }
    return c;
}

namespace {

std::size_t count_margin_violations(const Model& m, const ModelTrace& t) {
    std::size_t bad = 0;
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
        for (const Head& h : m.layers[l].heads) {
            for (std::size_t r = 0; r < h.wout.rows(); ++r) {
                bool written = false;
                for (std::size_t c = 0; c < h.wout.cols(); ++c) written = written || h.wout(r, c) != 0.0;
                if (!written) continue;
                const Matrix& att = t.attention[l];
                for (std::size_t col = 0; col < att.cols(); ++col) {
                    const double v = att(r, col);
                    if (v > 0.25 && v < 0.75) ++bad;
                }
            }
        }
    }
    return bad;
}

}  // namespace

VerifyReport verify_compiled(const Model& model, const Formula& f, std::size_t exhaustive_len,
                             std::size_t spot_len, std::size_t spot_count, std::uint64_t seed,
                             unsigned jobs, bool check_margins) {
    VerifyReport r;
    r.exhaustive_len = exhaustive_len;
    r.spot_len = spot_len;
    r.spot_count = spot_count;
    r.seed = seed;
    const Alphabet& sigma = model.alphabet;
    std::vector<Word> words;
    for_each_word(sigma.size(), exhaustive_len, [&](const Word& w) { words.push_back(w); });
    for (std::size_t i = 0; i < spot_count; ++i) {
        Rng rng(derive_seed(seed, i));
        Word w(spot_len);
        for (Symbol& s : w) s = static_cast<Symbol>(uniform_below(rng, sigma.size()));
        words.push_back(std::move(w));
    }

    const Evaluator oracle(f, sigma);
    struct Outcome {
        bool expected = false;
        bool got = false;
        std::size_t margin_violations = 0;
    };
    std::vector<Outcome> outcomes(words.size());
    parallel_for(words.size(), jobs, [&](std::size_t i) {
        Outcome& o = outcomes[i];
        o.expected = oracle.accepts(words[i]);
        if (check_margins) {
            const ModelTrace t = model_run_traced(model, words[i]);
            o.got = t.accepted;
            o.margin_violations = count_margin_violations(model, t);
        } else {
            o.got = model_run(model, words[i]);
        }
    });
    for (std::size_t i = 0; i < words.size(); ++i) {
        ++r.checked;
        r.accepted += outcomes[i].got;
        r.margin_violations += outcomes[i].margin_violations;
        if (outcomes[i].got != outcomes[i].expected) r.mismatches.push_back({words[i], outcomes[i].expected});
    }
    return r;
}

Json to_json(const VerifyReport& r, const Alphabet& alphabet, std::size_t max_mismatches) {
    Json mism = Json::array();
    for (std::size_t i = 0; i < std::min(max_mismatches, r.mismatches.size()); ++i)
        mism.push_back({{"string", alphabet.render(r.mismatches[i].word)}, {"expected", r.mismatches[i].expected}});
    return {{"ok", r.ok()},
            {"exhaustive_len", r.exhaustive_len},
            {"spot_len", r.spot_len},
            {"spot_count", r.spot_count},
            {"seed", r.seed},
            {"checked", r.checked},
            {"accepted", r.accepted},
            {"mismatch_count", r.mismatches.size()},
            {"mismatches", std::move(mism)},
            {"margin_violations", r.margin_violations}};
}

Json to_json(const MaskCensus& c) { return {{"global_heads", c.global_heads}, {"local_heads", c.local_heads}}; }

}  // namespace tal
