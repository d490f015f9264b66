#pragma once

// Complete deterministic finite automata and the constructions built on them:
// minimization, equivalence, compilation of past-time formulas, and exact
// counting and uniform sampling of fixed-length slices.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tal/alphabet.hpp"
#include "tal/formula.hpp"
#include "tal/json.hpp"
#include "tal/rng.hpp"

namespace tal {

using State = std::uint32_t;
using BigInt = boost::multiprecision::cpp_int;

/// Marks a missing transition in a partial table passed to complete().
inline constexpr State kNoState = UINT32_MAX;

struct RunResult {
    bool accepted = false;
    std::vector<State> trace;  // q_0 .. q_N
};

/// Complete DFA. States are 0..size()-1; delta is total.
class Dfa {
  public:
    /// delta is row-major: delta[q * alphabet.size() + symbol].
    /// Throws ContractError on out-of-range indices or a wrong table size.
    Dfa(Alphabet alphabet, std::size_t states, State init, std::vector<bool> finals,
        std::vector<State> delta);

    /// Builds a DFA from a table that may contain kNoState entries. Missing
    /// transitions go to a fresh non-accepting absorbing sink, appended as the
    /// last state. `completed` reports whether a sink was added.
    static Dfa complete(Alphabet alphabet, std::size_t states, State init,
                        std::vector<bool> finals, std::vector<State> delta,
                        bool* completed = nullptr);

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::size_t size() const noexcept { return finals_.size(); }
    State init() const noexcept { return init_; }
    bool is_final(State q) const { return finals_.at(q); }
    const std::vector<bool>& finals() const noexcept { return finals_; }
    const std::vector<State>& table() const noexcept { return delta_; }

    State next(State q, Symbol a) const { return delta_[q * alphabet_.size() + a]; }
    State run_from(State q, WordView w) const;
    bool accepts(WordView w) const { return finals_[run_from(init_, w)]; }
    RunResult run(WordView w) const;
    /// Parses w with the alphabet, then runs. Unknown tokens raise ContractError.
    RunResult run(std::string_view w) const { return run(alphabet_.parse_word(w)); }

    friend bool operator==(const Dfa& a, const Dfa& b) = default;

  private:
    Alphabet alphabet_;
    State init_;
    std::vector<bool> finals_;
    std::vector<State> delta_;
};

/// Minimal complete DFA for the same language. States are numbered in BFS
/// order from the initial state, following tokens in alphabet order, so
/// isomorphic minimal automata compare equal.
Dfa minimize(const Dfa& d);

/// Same automaton with accepting and rejecting states swapped.
Dfa complement(const Dfa& d);

/// Reachable states in BFS order from init (alphabet order).
std::vector<State> reachable_states(const Dfa& d);

struct Equivalence {
    bool equal = true;
    /// Shortest string on which the automata disagree (first in BFS order).
    std::optional<Word> counterexample;
};

/// Language equivalence by product-automaton BFS. Throws ContractError when
/// the alphabets differ.
Equivalence equivalent(const Dfa& a, const Dfa& b);

/// DFA accepting exactly the strings w with accepts(f, w). Each state records
/// the truth values of the Y/P/S subformulas at the next position together
/// with that position modulo the lcm of the MOD moduli. Y^k and Ystar are
/// expanded first. Throws ContractError on U and ResourceError when more than
/// state_budget states are reachable. The result is not minimized.
Dfa ltl_to_dfa(const Formula& f, const Alphabet& alphabet, std::size_t state_budget = 1u << 20);

/// |L(d) ∩ Σ^n|.
BigInt count_slice(const Dfa& d, std::size_t n);

/// Exact uniform sampler over the slices L(d) ∩ Σ^n for n ≤ max_len.
/// Precomputes the table of accepted-completion counts once.
class SliceSampler {
  public:
    SliceSampler(const Dfa& d, std::size_t max_len);

    std::size_t max_len() const noexcept { return counts_.size() - 1; }
    /// |L(d) ∩ Σ^n|.
    const BigInt& count(std::size_t n) const;
    /// Uniform member of L(d) ∩ Σ^n. Throws ContractError if the slice is
    /// empty or n > max_len.
    Word sample(std::size_t n, Rng& rng) const;

  private:
    Dfa dfa_;
    // counts_[r][q]: number of words of length r leading from q into F.
    std::vector<std::vector<BigInt>> counts_;
};

/// One uniform draw from L(d) ∩ Σ^n, deterministic in seed.
Word sample_slice(const Dfa& d, std::size_t n, std::uint64_t seed);

/// Uniform in [0, bound) using whole 64-bit draws and rejection.
BigInt uniform_below(Rng& rng, const BigInt& bound);

/// Random complete DFA: uniform transitions, each state accepting with
/// probability 1/2, initial state 0.
Dfa random_dfa(const Alphabet& alphabet, std::size_t states, Rng& rng);

/// Tokens "a", "b", "c", ... of the given size (at most 26).
Alphabet letters(std::size_t size);

/// DFA JSON:
///   {"alphabet": [...], "states": K, "init": i, "finals": [...],
///    "delta": {"<state>": {"<token>": state}}}
/// Missing transitions are completed with a sink.
struct LoadedDfa {
    Dfa dfa;
    bool completed = false;
};
LoadedDfa dfa_from_json(const Json& j);
LoadedDfa load_dfa(const std::filesystem::path& path);
Json dfa_to_json(const Dfa& d);

}  // namespace tal
