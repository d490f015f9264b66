#include "tal/semigroup.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "tal/error.hpp"

namespace tal {

Transformation compose(const Transformation& s, const Transformation& t) {
    Transformation out(s.size());
    for (std::size_t q = 0; q < s.size(); ++q) out[q] = t[s[q]];
    return out;
}

std::size_t Semigroup::Hash::operator()(const Transformation& t) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (State q : t) h = (h ^ q) * 0x100000001b3ULL;
    return h;
}

Semigroup Semigroup::of(const Dfa& d, std::size_t budget) {
    Semigroup sg;
    sg.states_ = d.size();
    sg.sigma_ = d.alphabet().size();
    auto intern = [&](Transformation t, const Word& w) {
        auto [it, fresh] = sg.index_.emplace(std::move(t), sg.elements_.size());
        if (fresh) {
            if (sg.elements_.size() >= budget)
                throw ResourceError("transition semigroup exceeds the element budget of " +
                                    std::to_string(budget));
            sg.elements_.push_back(it->first);
            sg.witnesses_.push_back(w);
        }
        return it->second;
    };

    std::vector<Transformation> gens(sg.sigma_, Transformation(sg.states_));
    for (Symbol a = 0; a < sg.sigma_; ++a) {
        for (State q = 0; q < sg.states_; ++q) gens[a][q] = d.next(q, a);
        sg.generators_.push_back(intern(gens[a], Word{a}));
    }
    for (std::size_t i = 0; i < sg.elements_.size(); ++i) {
        for (Symbol a = 0; a < sg.sigma_; ++a) {
            Word w = sg.witnesses_[i];
            w.push_back(a);
            const std::size_t j = intern(compose(sg.elements_[i], gens[a]), w);
            sg.right_.push_back(j);
        }
    }
    return sg;
}

std::optional<std::size_t> Semigroup::find(const Transformation& t) const {
    if (auto it = index_.find(t); it != index_.end()) return it->second;
    return std::nullopt;
}

std::size_t Semigroup::product(std::size_t i, std::size_t j) const {
    for (Symbol a : witness(j)) i = right(i, a);
    return i;
}

bool Semigroup::is_idempotent(std::size_t i) const {
    const Transformation& t = element(i);
    for (State q = 0; q < states_; ++q) {
        if (t[t[q]] != t[q]) return false;
    }
    return true;
}

std::vector<std::size_t> Semigroup::idempotents() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i) {
        if (is_idempotent(i)) out.push_back(i);
    }
    return out;
}

DefiniteVerdict is_definite(const Semigroup& sg) {
    for (std::size_t e : sg.idempotents()) {
        const Transformation& te = sg.element(e);
        for (std::size_t s = 0; s < sg.size(); ++s) {
            const Transformation& ts = sg.element(s);
            for (State q = 0; q < sg.states(); ++q) {
                if (te[ts[q]] != te[q]) return {false, s, e};
            }
        }
    }
    return {};
}

PermutationVerdict is_nonpermutational(const Semigroup& sg) {
    const std::size_t n = sg.states();
    for (std::size_t i = 0; i < sg.size(); ++i) {
        // Periodic points are exactly the image of t^n.
        const Transformation& t = sg.element(i);
        std::vector<bool> periodic(n, false);
        for (State q = 0; q < n; ++q) {
            State p = q;
            for (std::size_t k = 0; k < n; ++k) p = t[p];
            periodic[p] = true;
        }
        PermutationVerdict v{false, i, {}};
        for (State q = 0; q < n; ++q) {
            if (periodic[q]) v.subset.push_back(q);
        }
        if (v.subset.size() >= 2) return v;
    }
    return {};
}

std::optional<std::size_t> definiteness_order(const Dfa& d) {
    using Set = std::vector<State>;  // sorted
    using Collection = std::set<Set>;
    Set reach = reachable_states(d);
    std::sort(reach.begin(), reach.end());
    Collection current{reach};
    std::set<Collection> history;
    const std::size_t limit = d.size() >= 63 ? SIZE_MAX : (std::size_t{1} << d.size());
    for (std::size_t m = 0; m <= limit; ++m) {
        const bool uniform = std::all_of(current.begin(), current.end(), [&](const Set& s) {
            return std::all_of(s.begin(), s.end(), [&](State q) { return d.is_final(q) == d.is_final(s.front()); });
        });
        if (uniform) return m;
        if (!history.insert(current).second) return std::nullopt;
        Collection next;
        for (const Set& s : current) {
            for (Symbol a = 0; a < d.alphabet().size(); ++a) {
                Set image;
                for (State q : s) image.push_back(d.next(q, a));
                std::sort(image.begin(), image.end());
                image.erase(std::unique(image.begin(), image.end()), image.end());
                next.insert(std::move(image));
            }
        }
        current = std::move(next);
    }
    return std::nullopt;
}

namespace {

// Strongly connected components of the right Cayley graph, i.e. the
// R-classes of S¹ restricted to S (iterative Tarjan).
std::vector<std::size_t> r_classes(const Semigroup& sg) {
    const std::size_t n = sg.size();
    const std::size_t none = SIZE_MAX;
    std::vector<std::size_t> index(n, none), low(n, 0), comp(n, none);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::size_t counter = 0, components = 0;
    struct Frame {
        std::size_t v;
        Symbol next;
    };
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != none) continue;
        std::vector<Frame> call{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.next < sg.alphabet_size()) {
                const std::size_t w = sg.right(f.v, f.next++);
                if (index[w] == none) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            const std::size_t v = f.v;
            call.pop_back();
            if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
            if (low[v] == index[v]) {
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = components;
                } while (w != v);
                ++components;
            }
        }
    }
    return comp;
}

}  // namespace

RTrivialVerdict is_locally_r_trivial(const Semigroup& sg) {
    // For x, y in eSe, x R y in the monoid eSe iff x R y in S¹: if x = y s
    // then x = x e = y (e s e) since y = y e. So R-classes of S¹ suffice.
    const std::vector<std::size_t> comp = r_classes(sg);
    for (std::size_t e : sg.idempotents()) {
        const Transformation& te = sg.element(e);
        std::unordered_map<std::size_t, std::size_t> seen;  // R-class -> element
        for (std::size_t s = 0; s < sg.size(); ++s) {
            const auto x = sg.find(compose(compose(te, sg.element(s)), te));
            if (!x) throw Error("semigroup is not closed under products");
            auto [it, fresh] = seen.emplace(comp[*x], *x);
            if (!fresh && it->second != *x) {
                const std::size_t a = std::min(it->second, *x), b = std::max(it->second, *x);
                return {false, e, a, b};
            }
        }
    }
    return {};
}

namespace {

// Shortest words between all pairs of states (BFS from every source).
std::vector<std::vector<std::optional<Word>>> all_paths(const Dfa& d) {
    const std::size_t n = d.size();
    std::vector<std::vector<std::optional<Word>>> paths(n, std::vector<std::optional<Word>>(n));
    for (State src = 0; src < n; ++src) {
        std::vector<std::optional<Word>>& row = paths[src];
        std::vector<State> frontier{src};
        std::vector<bool> seen(n, false);
        seen[src] = true;
        std::vector<Word> via(n);
        for (std::size_t i = 0; i < frontier.size(); ++i) {
            const State q = frontier[i];
            for (Symbol a = 0; a < d.alphabet().size(); ++a) {
                const State t = d.next(q, a);
                Word w = via[q];
                w.push_back(a);
                if (!row[t]) row[t] = w;  // non-empty path, also for t == src
                if (!seen[t]) {
                    seen[t] = true;
                    via[t] = std::move(w);
                    frontier.push_back(t);
                }
            }
        }
    }
    return paths;
}

}  // namespace

std::optional<ConfigWitness> find_forbidden_config(const Dfa& input, std::size_t budget) {
    const Dfa minimal = minimize(input);
    const bool already_minimal = minimal.size() == input.size();
    const Dfa& d = already_minimal ? input : minimal;
    const Semigroup sg = Semigroup::of(d, budget);
    const auto paths = all_paths(d);
    for (std::size_t i = 0; i < sg.size(); ++i) {
        const Transformation& t = sg.element(i);
        for (State q = 0; q < d.size(); ++q) {
            if (t[q] != q) continue;
            for (State q2 = q + 1; q2 < d.size(); ++q2) {
                if (t[q2] != q2 || !paths[q][q2] || !paths[q2][q]) continue;
                return ConfigWitness{q, q2, *paths[q][q2], *paths[q2][q], sg.witness(i)};
            }
        }
    }
    return std::nullopt;
}

bool check_config(const Dfa& d, const ConfigWitness& w) {
    if (w.q == w.q2 || w.q >= d.size() || w.q2 >= d.size()) return false;
    if (w.u.empty() || w.v.empty() || w.x.empty()) return false;
    return d.run_from(w.q, w.u) == w.q2 && d.run_from(w.q2, w.v) == w.q &&
           d.run_from(w.q, w.x) == w.q && d.run_from(w.q2, w.x) == w.q2;
}

bool is_aperiodic(const Semigroup& sg) {
    const std::size_t n = sg.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Transformation& s = sg.element(i);
        // s^n by repeated squaring; powers of one element commute.
        Transformation power, base = s;
        bool have = false;
        for (std::size_t k = n; k > 0; k >>= 1) {
            if (k & 1) {
                power = have ? compose(power, base) : base;
                have = true;
            }
            base = compose(base, base);
        }
        if (compose(power, s) != power) return false;
    }
    return true;
}

Json to_json(const Semigroup& sg, const Alphabet& alphabet, std::size_t max_elements) {
    Json j;
    j["size"] = sg.size();
    j["states"] = sg.states();
    Json gens = Json::object();
    for (Symbol a = 0; a < alphabet.size(); ++a) gens[alphabet.token(a)] = sg.generator(a);
    j["generators"] = std::move(gens);
    j["idempotents"] = sg.idempotents();
    Json elements = Json::array();
    for (std::size_t i = 0; i < std::min(sg.size(), max_elements); ++i) {
        elements.push_back({{"index", i},
                            {"witness", alphabet.render(sg.witness(i))},
                            {"map", sg.element(i)},
                            {"idempotent", sg.is_idempotent(i)}});
    }
    j["elements"] = std::move(elements);
    j["truncated"] = sg.size() > max_elements;
    return j;
}

Json to_json(const ConfigWitness& w, const Alphabet& alphabet) {
    return {{"q", w.q},
            {"q_prime", w.q2},
            {"u", alphabet.render(w.u)},
            {"v", alphabet.render(w.v)},
            {"x", alphabet.render(w.x)}};
}

}  // namespace tal
