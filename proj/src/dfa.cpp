#include "tal/dfa.hpp"

#include <fstream>
#include <map>
#include <numeric>
#include <queue>
#include <unordered_map>

#include "tal/error.hpp"

namespace tal {

// ---------------------------------------------------------------------------
// Dfa

Dfa::Dfa(Alphabet alphabet, std::size_t states, State init, std::vector<bool> finals,
         std::vector<State> delta)
    : alphabet_(std::move(alphabet)), init_(init), finals_(std::move(finals)), delta_(std::move(delta)) {
    if (states == 0) throw ContractError("a DFA needs at least one state");
    if (states >= kNoState) throw ContractError("too many states");
    if (finals_.size() != states)
        throw ContractError("finals has " + std::to_string(finals_.size()) + " entries, expected " +
                            std::to_string(states));
    if (delta_.size() != states * alphabet_.size())
        throw ContractError("transition table has " + std::to_string(delta_.size()) +
                            " entries, expected " + std::to_string(states * alphabet_.size()));
    if (init_ >= states) throw ContractError("initial state out of range");
    for (State t : delta_) {
        if (t >= states) throw ContractError("transition target " + std::to_string(t) + " out of range");
    }
}

Dfa Dfa::complete(Alphabet alphabet, std::size_t states, State init, std::vector<bool> finals,
                  std::vector<State> delta, bool* completed) {
    const bool partial = std::find(delta.begin(), delta.end(), kNoState) != delta.end();
    if (completed) *completed = partial;
    if (partial) {
        const auto sink = static_cast<State>(states);
        for (State& t : delta) {
            if (t == kNoState) t = sink;
        }
        delta.insert(delta.end(), alphabet.size(), sink);
        finals.push_back(false);
        ++states;
    }
    return Dfa(std::move(alphabet), states, init, std::move(finals), std::move(delta));
}

State Dfa::run_from(State q, WordView w) const {
    for (Symbol a : w) {
        if (a >= alphabet_.size()) throw ContractError("symbol outside the alphabet");
        q = next(q, a);
    }
    return q;
}

RunResult Dfa::run(WordView w) const {
    RunResult r;
    r.trace.reserve(w.size() + 1);
    State q = init_;
    r.trace.push_back(q);
    for (Symbol a : w) {
        if (a >= alphabet_.size()) throw ContractError("symbol outside the alphabet");
        q = next(q, a);
        r.trace.push_back(q);
    }
    r.accepted = finals_[q];
    return r;
}

// ---------------------------------------------------------------------------
// Minimization and equivalence

std::vector<State> reachable_states(const Dfa& d) {
    std::vector<bool> seen(d.size(), false);
    std::vector<State> order{d.init()};
    seen[d.init()] = true;
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (Symbol a = 0; a < d.alphabet().size(); ++a) {
            const State t = d.next(order[i], a);
            if (!seen[t]) {
                seen[t] = true;
                order.push_back(t);
            }
        }
    }
    return order;
}

Dfa minimize(const Dfa& d) {
    const std::size_t sigma = d.alphabet().size();
    const std::vector<State> reach = reachable_states(d);

    // Moore refinement over the reachable states: a state's class is refined
    // by the classes of its successors until the number of classes is stable.
    std::vector<State> cls(d.size(), 0);
    for (State q : reach) cls[q] = d.is_final(q) ? 1 : 0;
    std::size_t classes = 0;
    for (;;) {
        std::map<std::vector<State>, State> ids;
        std::vector<State> next(d.size(), 0);
        std::vector<State> sig(sigma + 1);
        for (State q : reach) {
            sig[0] = cls[q];
            for (Symbol a = 0; a < sigma; ++a) sig[a + 1] = cls[d.next(q, a)];
            next[q] = ids.emplace(sig, static_cast<State>(ids.size())).first->second;
        }
        cls = std::move(next);
        if (ids.size() == classes) break;
        classes = ids.size();
    }

    // Canonical numbering: BFS over classes from the initial class.
    std::vector<State> number(classes, kNoState);
    std::vector<State> representative;
    number[cls[d.init()]] = 0;
    representative.push_back(d.init());
    for (std::size_t i = 0; i < representative.size(); ++i) {
        for (Symbol a = 0; a < sigma; ++a) {
            const State c = cls[d.next(representative[i], a)];
            if (number[c] == kNoState) {
                number[c] = static_cast<State>(representative.size());
                representative.push_back(d.next(representative[i], a));
            }
        }
    }
    std::vector<bool> finals(representative.size());
    std::vector<State> delta(representative.size() * sigma);
    for (std::size_t i = 0; i < representative.size(); ++i) {
        finals[i] = d.is_final(representative[i]);
        for (Symbol a = 0; a < sigma; ++a)
            delta[i * sigma + a] = number[cls[d.next(representative[i], a)]];
    }
    return Dfa(d.alphabet(), representative.size(), 0, std::move(finals), std::move(delta));
}

Dfa complement(const Dfa& d) {
    std::vector<bool> finals = d.finals();
    finals.flip();
    return Dfa(d.alphabet(), d.size(), d.init(), std::move(finals), d.table());
}

Equivalence equivalent(const Dfa& a, const Dfa& b) {
    if (!(a.alphabet() == b.alphabet()))
        throw ContractError("equivalence check needs identical alphabets");
    const std::size_t sigma = a.alphabet().size();
    const std::size_t nb = b.size();
    auto key = [nb](State p, State q) { return static_cast<std::size_t>(p) * nb + q; };

    struct Visit {
        std::size_t parent;
        Symbol via;
    };
    std::unordered_map<std::size_t, Visit> seen;
    std::queue<std::pair<State, State>> frontier;
    const std::size_t start = key(a.init(), b.init());
    seen.emplace(start, Visit{start, 0});
    frontier.emplace(a.init(), b.init());
    while (!frontier.empty()) {
        const auto [p, q] = frontier.front();
        frontier.pop();
        if (a.is_final(p) != b.is_final(q)) {
            Word w;
            for (std::size_t k = key(p, q); k != start;) {
                const Visit& v = seen.at(k);
                w.push_back(v.via);
                k = v.parent;
            }
            std::reverse(w.begin(), w.end());
            return {false, std::move(w)};
        }
        for (Symbol s = 0; s < sigma; ++s) {
            const State p2 = a.next(p, s), q2 = b.next(q, s);
            if (seen.emplace(key(p2, q2), Visit{key(p, q), s}).second) frontier.emplace(p2, q2);
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// Past-time formulas to automata

namespace {

struct Closure {
    // Subformulas in post-order (children first), structurally deduplicated.
    std::vector<Formula> nodes;
    std::vector<int> lhs, rhs;
    std::vector<int> symbol;     // atoms: token index or -1
    std::vector<int> temporal;   // index into the state bit vector, or -1
    int bits = 0;
    int period = 1;              // lcm of MOD moduli
};

int add_node(Closure& c, std::map<Formula, int>& index, const Formula& f, const Alphabet& sigma) {
    if (auto it = index.find(f); it != index.end()) return it->second;
    int l = -1, r = -1;
    if (is_unary(f.op()) || is_binary(f.op())) l = add_node(c, index, f.lhs(), sigma);
    if (is_binary(f.op())) r = add_node(c, index, f.rhs(), sigma);
    const int id = static_cast<int>(c.nodes.size());
    c.nodes.push_back(f);
    c.lhs.push_back(l);
    c.rhs.push_back(r);
    int sym = -1;
    if (f.op() == Op::Atom) {
        if (auto s = sigma.find(f.token())) sym = *s;
    }
    c.symbol.push_back(sym);
    const bool latch = f.op() == Op::Yesterday || f.op() == Op::Past || f.op() == Op::Since;
    c.temporal.push_back(latch ? c.bits++ : -1);
    if (f.op() == Op::Mod) c.period = std::lcm(c.period, f.modulus());
    index.emplace(f, id);
    return id;
}

}  // namespace

Dfa ltl_to_dfa(const Formula& input, const Alphabet& alphabet, std::size_t state_budget) {
    if (contains(input, Op::Until)) throw ContractError("ltl_to_dfa: U is not supported");
    const Formula f = expand_bounded(input);

    Closure c;
    std::map<Formula, int> index;
    add_node(c, index, f, alphabet);
    const std::size_t n = c.nodes.size();
    const int root = static_cast<int>(n - 1);

    // A state is (latched bits at position p, p mod period) with p the next
    // position to be read; values[] holds every subformula at p.
    using Key = std::vector<std::uint8_t>;
    auto values_at = [&](const Key& key, int symbol, std::vector<std::uint8_t>& v) {
        const int pos = key.back();
        for (std::size_t i = 0; i < n; ++i) {
            const Formula& g = c.nodes[i];
            bool x = false;
            switch (g.op()) {
                case Op::Top: x = true; break;
                case Op::Bot: x = false; break;
                case Op::Atom: x = symbol >= 0 && c.symbol[i] == symbol; break;
                case Op::Mod: x = pos % g.modulus() == g.residue(); break;
                case Op::Not: x = !v[c.lhs[i]]; break;
                case Op::And: x = v[c.lhs[i]] && v[c.rhs[i]]; break;
                case Op::Or: x = v[c.lhs[i]] || v[c.rhs[i]]; break;
                default: x = key[c.temporal[i]] != 0; break;
            }
            v[i] = x;
        }
    };
    auto successor = [&](const Key& key, const std::vector<std::uint8_t>& v) {
        Key out(key.size());
        for (std::size_t i = 0; i < n; ++i) {
            const int bit = c.temporal[i];
            if (bit < 0) continue;
            const bool now = key[bit] != 0;
            switch (c.nodes[i].op()) {
                case Op::Yesterday: out[bit] = v[c.lhs[i]]; break;
                case Op::Past: out[bit] = v[c.lhs[i]] || now; break;
                default: out[bit] = v[c.rhs[i]] || (v[c.lhs[i]] && now); break;  // Since
            }
        }
        out.back() = static_cast<std::uint8_t>((key.back() + 1) % c.period);
        return out;
    };

    if (c.period > 255) throw ResourceError("ltl_to_dfa: MOD period too large");
    const std::size_t sigma = alphabet.size();
    Key start(static_cast<std::size_t>(c.bits) + 1, 0);
    start.back() = static_cast<std::uint8_t>(1 % c.period);
    std::map<Key, State> ids{{start, 0}};
    std::vector<Key> keys{start};
    std::vector<State> delta;
    std::vector<bool> finals;
    std::vector<std::uint8_t> v(n);
    for (std::size_t i = 0; i < keys.size(); ++i) {
        const Key key = keys[i];
        values_at(key, -1, v);
        finals.push_back(v[root] != 0);
        for (Symbol a = 0; a < sigma; ++a) {
            values_at(key, a, v);
            Key next = successor(key, v);
            auto [it, fresh] = ids.emplace(next, static_cast<State>(keys.size()));
            if (fresh) {
                if (keys.size() >= state_budget)
                    throw ResourceError("ltl_to_dfa exceeded " + std::to_string(state_budget) + " states");
                keys.push_back(std::move(next));
            }
            delta.push_back(it->second);
        }
    }
    return Dfa(alphabet, keys.size(), 0, std::move(finals), std::move(delta));
}

// ---------------------------------------------------------------------------
// Counting and sampling

BigInt count_slice(const Dfa& d, std::size_t n) {
    std::vector<BigInt> cur(d.size()), nxt(d.size());
    for (State q = 0; q < d.size(); ++q) cur[q] = d.is_final(q) ? 1 : 0;
    for (std::size_t r = 1; r <= n; ++r) {
        for (State q = 0; q < d.size(); ++q) {
            nxt[q] = 0;
            for (Symbol a = 0; a < d.alphabet().size(); ++a) nxt[q] += cur[d.next(q, a)];
        }
        std::swap(cur, nxt);
    }
    return cur[d.init()];
}

SliceSampler::SliceSampler(const Dfa& d, std::size_t max_len) : dfa_(d) {
    counts_.assign(max_len + 1, std::vector<BigInt>(d.size()));
    for (State q = 0; q < d.size(); ++q) counts_[0][q] = d.is_final(q) ? 1 : 0;
    for (std::size_t r = 1; r <= max_len; ++r) {
        for (State q = 0; q < d.size(); ++q) {
            BigInt& c = counts_[r][q];
            for (Symbol a = 0; a < d.alphabet().size(); ++a) c += counts_[r - 1][d.next(q, a)];
        }
    }
}

const BigInt& SliceSampler::count(std::size_t n) const {
    if (n > max_len()) throw ContractError("length beyond the sampler's table");
    return counts_[n][dfa_.init()];
}

Word SliceSampler::sample(std::size_t n, Rng& rng) const {
    const BigInt& total = count(n);
    if (total == 0) throw ContractError("cannot sample from an empty slice (length " + std::to_string(n) + ")");
    // Unrank a uniform index: at each step skip over the blocks of words
    // that start with a smaller token.
    BigInt x = uniform_below(rng, total);
    Word w;
    w.reserve(n);
    State q = dfa_.init();
    for (std::size_t r = n; r > 0; --r) {
        for (Symbol a = 0; a < dfa_.alphabet().size(); ++a) {
            const BigInt& block = counts_[r - 1][dfa_.next(q, a)];
            if (x < block) {
                w.push_back(a);
                q = dfa_.next(q, a);
                break;
            }
            x -= block;
        }
    }
    return w;
}

Word sample_slice(const Dfa& d, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    return SliceSampler(d, n).sample(n, rng);
}

BigInt uniform_below(Rng& rng, const BigInt& bound) {
    if (bound <= 0) throw ContractError("uniform_below needs a positive bound");
    const std::size_t bits = msb(bound) + 1;
    const std::size_t words = (bits + 63) / 64;
    const std::size_t spare = words * 64 - bits;
    for (;;) {
        BigInt x = 0;
        for (std::size_t i = 0; i < words; ++i) {
            std::uint64_t chunk = rng();
            if (i == 0 && spare > 0) chunk >>= spare;
            x <<= 64;
            x |= chunk;
        }
        if (x < bound) return x;
    }
}

// ---------------------------------------------------------------------------
// Generation and serialization

Alphabet letters(std::size_t size) {
    if (size == 0 || size > 26) throw ContractError("letters() supports 1..26 tokens");
    std::vector<std::string> toks;
    for (std::size_t i = 0; i < size; ++i) toks.emplace_back(1, static_cast<char>('a' + i));
    return Alphabet(std::move(toks));
}

Dfa random_dfa(const Alphabet& alphabet, std::size_t states, Rng& rng) {
    std::vector<State> delta(states * alphabet.size());
    for (State& t : delta) t = static_cast<State>(tal::uniform_below(rng, states));
    std::vector<bool> finals(states);
    for (std::size_t q = 0; q < states; ++q) finals[q] = (rng() & 1) != 0;
    return Dfa(alphabet, states, 0, std::move(finals), std::move(delta));
}

LoadedDfa dfa_from_json(const Json& j) {
    try {
        if (!j.is_object()) throw FormatError("DFA JSON must be an object");
        const auto tokens = j.at("alphabet").get<std::vector<std::string>>();
        const auto states = j.at("states").get<std::size_t>();
        const auto init = j.at("init").get<std::size_t>();
        if (states == 0) throw FormatError("DFA must have at least one state");
        if (init >= states) throw FormatError("init " + std::to_string(init) + " out of range");
        Alphabet alphabet(tokens);
        std::vector<bool> finals(states, false);
        for (const auto& f : j.at("finals")) {
            const auto q = f.get<std::size_t>();
            if (q >= states) throw FormatError("final state " + std::to_string(q) + " out of range");
            finals[q] = true;
        }
        std::vector<State> delta(states * alphabet.size(), kNoState);
        for (const auto& [src, row] : j.at("delta").items()) {
            std::size_t q = 0;
            try {
                std::size_t used = 0;
                q = std::stoul(src, &used);
                if (used != src.size()) throw std::invalid_argument(src);
            } catch (const std::logic_error&) {
                throw FormatError("delta key '" + src + "' is not a state index");
            }
            if (q >= states) throw FormatError("delta state " + src + " out of range");
            for (const auto& [tok, dst] : row.items()) {
                const auto a = alphabet.find(tok);
                if (!a) throw FormatError("delta token '" + tok + "' not in the alphabet");
                const auto t = dst.get<std::size_t>();
                if (t >= states) throw FormatError("delta target " + std::to_string(t) + " out of range");
                delta[q * alphabet.size() + *a] = static_cast<State>(t);
            }
        }
        LoadedDfa out{Dfa::complete(std::move(alphabet), states, static_cast<State>(init),
                                    std::move(finals), std::move(delta), nullptr)};
        out.completed = out.dfa.size() != states;
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed DFA JSON: ") + e.what());
    } catch (const ContractError& e) {
        throw FormatError(std::string("invalid DFA: ") + e.what());
    }
}

LoadedDfa load_dfa(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path.string());
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    return dfa_from_json(j);
}

Json dfa_to_json(const Dfa& d) {
    Json j;
    j["alphabet"] = d.alphabet().tokens();
    j["states"] = d.size();
    j["init"] = d.init();
    Json finals = Json::array();
    for (State q = 0; q < d.size(); ++q) {
        if (d.is_final(q)) finals.push_back(q);
    }
    j["finals"] = std::move(finals);
    Json delta = Json::object();
    for (State q = 0; q < d.size(); ++q) {
        Json row = Json::object();
        for (Symbol a = 0; a < d.alphabet().size(); ++a) row[d.alphabet().token(a)] = d.next(q, a);
        delta[std::to_string(q)] = std::move(row);
    }
    j["delta"] = std::move(delta);
    return j;
}

}  // namespace tal
