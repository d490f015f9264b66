#pragma once

// Transition semigroups of complete DFAs and the algebraic decision
// procedures on them.
//
// A transformation is a total map on the DFA's states. Words act on the
// right: t_{uv} = t_u · t_v, where s · t applies s first and then t. The
// semigroup is generated by the single-token transformations, so the
// identity belongs to it only when some non-empty word induces it. The
// syntactic semigroup of a language is taken to be the transition semigroup
// of its minimal DFA.

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "tal/dfa.hpp"
#include "tal/json.hpp"

namespace tal {

using Transformation = std::vector<State>;

/// s · t: apply s, then t.
Transformation compose(const Transformation& s, const Transformation& t);

inline constexpr std::size_t kDefaultElementBudget = 1'000'000;

class Semigroup {
  public:
    /// Closure of the token transformations of d, in BFS order of shortest
    /// witness words (ties broken by alphabet order). ResourceError when the
    /// closure exceeds budget elements.
    static Semigroup of(const Dfa& d, std::size_t budget = kDefaultElementBudget);

    std::size_t size() const noexcept { return elements_.size(); }
    std::size_t states() const noexcept { return states_; }
    std::size_t alphabet_size() const noexcept { return sigma_; }

    const Transformation& element(std::size_t i) const { return elements_.at(i); }
    /// Shortest word inducing element i.
    const Word& witness(std::size_t i) const { return witnesses_.at(i); }
    /// Index of t_a.
    std::size_t generator(Symbol a) const { return generators_.at(a); }
    /// Index of element(i) · t_a (right Cayley graph).
    std::size_t right(std::size_t i, Symbol a) const { return right_.at(i * sigma_ + a); }
    std::optional<std::size_t> find(const Transformation& t) const;
    /// Index of element(i) · element(j), computed by following the right
    /// Cayley graph along the witness of j. The full table is never stored.
    std::size_t product(std::size_t i, std::size_t j) const;

    bool is_idempotent(std::size_t i) const;
    std::vector<std::size_t> idempotents() const;

  private:
    struct Hash {
        std::size_t operator()(const Transformation& t) const noexcept;
    };

    std::size_t states_ = 0;
    std::size_t sigma_ = 0;
    std::vector<Transformation> elements_;
    std::vector<Word> witnesses_;
    std::vector<std::size_t> generators_;
    std::vector<std::size_t> right_;
    std::unordered_map<Transformation, std::size_t, Hash> index_;
};

/// Every idempotent is a right zero: s · e = e for all s. On failure,
/// (s, e) holds element indices with s · e ≠ e.
struct DefiniteVerdict {
    bool definite = true;
    std::size_t s = 0;
    std::size_t e = 0;
};
DefiniteVerdict is_definite(const Semigroup& sg);

/// No element restricts to a permutation of a subset of two or more states.
/// On failure, `element` is the first offending element in BFS order and
/// `subset` its set of periodic points (on which it acts bijectively).
struct PermutationVerdict {
    bool nonpermutational = true;
    std::size_t element = 0;
    std::vector<State> subset;
};
PermutationVerdict is_nonpermutational(const Semigroup& sg);

/// Smallest m such that every word of length m sends all reachable states
/// to uniformly accepting or uniformly rejecting states, i.e. the language
/// is m-definite. nullopt when no such m exists. Works on the automaton
/// directly, without the semigroup.
std::optional<std::size_t> definiteness_order(const Dfa& d);

/// Every local monoid eSe (identity e) is R-trivial. On failure, e is the
/// idempotent and x ≠ y are R-equivalent elements of eSe.
struct RTrivialVerdict {
    bool locally_r_trivial = true;
    std::size_t e = 0;
    std::size_t x = 0;
    std::size_t y = 0;
};
RTrivialVerdict is_locally_r_trivial(const Semigroup& sg);

/// States q ≠ q' with δ(q,u) = q', δ(q',v) = q, δ(q,x) = q, δ(q',x) = q'.
struct ConfigWitness {
    State q = 0;
    State q2 = 0;
    Word u, v, x;
};
/// Searches the minimal DFA of d (d itself when it is already minimal, so its
/// state numbering is kept). Elements are scanned in BFS order and state
/// pairs in increasing order; u and v are shortest paths.
std::optional<ConfigWitness> find_forbidden_config(const Dfa& d,
                                                   std::size_t budget = kDefaultElementBudget);
/// Re-checks the four equations on d.
bool check_config(const Dfa& d, const ConfigWitness& w);

/// s^n = s^(n+1) for every element, with n = |S|.
bool is_aperiodic(const Semigroup& sg);

Json to_json(const Semigroup& sg, const Alphabet& alphabet, std::size_t max_elements = 1000);
Json to_json(const ConfigWitness& w, const Alphabet& alphabet);

}  // namespace tal
