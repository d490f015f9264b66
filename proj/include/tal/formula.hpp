#pragma once

// Past-time LTL formulas: representation, parsing, printing, evaluation and
// the rewrites between equivalent operator sets.
//
// Positions are 1-based. A string w of length N is evaluated at positions
// 1..N+1; acceptance reads position N+1, one past the last token. No
// position 0 exists, so Y, P and S are false at position 1, and atoms are
// false at N+1.

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "tal/alphabet.hpp"
#include "tal/rng.hpp"

namespace tal {

enum class Op : std::uint8_t {
    Top,
    Bot,
    Atom,
    Not,
    And,
    Or,
    Yesterday,         // Y f
    BoundedYesterday,  // Y^k f: f held within the previous k positions
    StarYesterday,     // Ystar f: f held at some earlier position
    Past,              // P f
    Since,             // f S g
    Until,             // f U g
    Mod,               // MOD(m, r): position ≡ r (mod m)
};

const char* op_name(Op op) noexcept;
bool is_temporal(Op op) noexcept;
bool is_binary(Op op) noexcept;
bool is_unary(Op op) noexcept;

/// Immutable formula tree with structural equality. Copies share nodes.
class Formula {
  public:
    static Formula top();
    static Formula bot();
    static Formula atom(std::string token);
    static Formula negation(Formula f);
    static Formula conjunction(Formula a, Formula b);
    static Formula disjunction(Formula a, Formula b);
    static Formula yesterday(Formula f);
    /// k ≥ 1, else ContractError.
    static Formula bounded_yesterday(int k, Formula f);
    static Formula star_yesterday(Formula f);
    static Formula past(Formula f);
    static Formula since(Formula a, Formula b);
    static Formula until(Formula a, Formula b);
    /// m > 0 and r ≥ 0, else ContractError. r is stored reduced mod m.
    static Formula mod(int m, int r);

    Op op() const noexcept;
    const std::string& token() const noexcept;
    int bound() const noexcept;
    int modulus() const noexcept;
    int residue() const noexcept;

    /// Operand of a unary node, left operand of a binary node.
    const Formula& lhs() const;
    /// Right operand of a binary node.
    const Formula& rhs() const;

    /// Number of nodes in the tree.
    std::size_t size() const noexcept;

    /// Canonical fully-parenthesized form; parse_formula reads it back.
    std::string to_string() const;

    friend bool operator==(const Formula& a, const Formula& b);
    friend bool operator<(const Formula& a, const Formula& b);

    struct Node;

  private:
    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

struct Formula::Node {
    Op op;
    std::string token;
    int bound = 0;
    int modulus = 0;
    int residue = 0;
    std::vector<Formula> children;
    std::size_t size = 1;
};

/// Shorthands for building formulas in code.
namespace ltl {
inline Formula top() { return Formula::top(); }
inline Formula bot() { return Formula::bot(); }
inline Formula atom(std::string t) { return Formula::atom(std::move(t)); }
inline Formula Y(Formula f) { return Formula::yesterday(std::move(f)); }
inline Formula Yk(int k, Formula f) { return Formula::bounded_yesterday(k, std::move(f)); }
inline Formula Ystar(Formula f) { return Formula::star_yesterday(std::move(f)); }
inline Formula P(Formula f) { return Formula::past(std::move(f)); }
inline Formula S(Formula a, Formula b) { return Formula::since(std::move(a), std::move(b)); }
inline Formula U(Formula a, Formula b) { return Formula::until(std::move(a), std::move(b)); }
inline Formula mod(int m, int r) { return Formula::mod(m, r); }
inline Formula operator!(Formula f) { return Formula::negation(std::move(f)); }
inline Formula operator&(Formula a, Formula b) { return Formula::conjunction(std::move(a), std::move(b)); }
inline Formula operator|(Formula a, Formula b) { return Formula::disjunction(std::move(a), std::move(b)); }
}  // namespace ltl

/// Parses the ASCII grammar:
///
///   formula := or-expr [ ("S" | "U") formula ]      right-associative
///   or-expr := and-expr { "|" and-expr }
///   and-expr := unary { "&" unary }
///   unary   := ("!" | "Y" | "Y^" INT | "Ystar" | "P") unary | primary
///   primary := "true" | "false" | IDENT | "MOD(" INT "," INT ")" | "(" formula ")"
///
/// Identifiers are [A-Za-z_][A-Za-z0-9_]*; the keywords above cannot be
/// atoms. With an alphabet, atoms outside it are rejected.
Formula parse_formula(std::string_view text);
Formula parse_formula(std::string_view text, const Alphabet& alphabet);

/// Atom tokens in order of first appearance (left to right).
std::vector<std::string> atoms(const Formula& f);

/// True when some node of f has the given operator.
bool contains(const Formula& f, Op op);

/// Nesting depth of temporal operators. Y^k and Ystar count as one operator;
/// MOD counts as depth 0.
int operator_depth(const Formula& f);

/// Truth of f at a position of w. Precondition 1 ≤ position ≤ |w|+1.
/// Follows the satisfaction relation literally with memoization; this is the
/// reference semantics every other route is checked against.
bool evaluate(const Formula& f, const Alphabet& alphabet, WordView w, std::size_t position);

/// w ⊨ f, i.e. f at position |w|+1.
bool accepts(const Formula& f, const Alphabet& alphabet, WordView w);

/// Reusable evaluator for checking one formula against many words.
class Evaluator {
  public:
    Evaluator(const Formula& f, const Alphabet& alphabet);

    bool at(WordView w, std::size_t position) const;
    bool accepts(WordView w) const { return at(w, w.size() + 1); }

  private:
    struct Node {
        Op op;
        int symbol;  // atom token index, -1 if the token is absent from the alphabet
        int a;
        int b;
        int k;
        int m;
        int r;
    };
    bool eval(std::size_t node, WordView w, std::size_t n, std::vector<std::int8_t>& memo) const;

    std::vector<Node> nodes_;  // children precede parents; the root is last
};

/// Replaces Y^k by the disjunction of Y-chains of lengths 1..k and Ystar by P.
/// The result contains neither operator and defines the same language.
Formula expand_bounded(const Formula& f);

/// Replaces every Y node by
///   OR_{i=1..m} ( MOD(m, i) & Y^k( MOD(m, i-1) & child ) )
/// which expresses Y through Y^k and modular predicates when 2 ≤ k ≤ m.
/// f may not contain S, U or Ystar.
Formula rewrite_with_mod(const Formula& f, int k, int m);

enum class LocalKind { Factor, Prefix, Suffix };

/// Formula for a basic locally testable language over window size m:
///   Factor: u (|u| = m) occurs as a factor;
///   Prefix: the (m-1)-prefix equals u (|u| = m-1);
///   Suffix: the (m-1)-suffix equals u (|u| = m-1).
Formula locally_testable_formula(LocalKind kind, const std::vector<std::string>& u, int m);

/// Bounded exhaustive formula enumeration.
struct EnumerationSpec {
    std::vector<std::string> atoms;
    bool constants = true;               // include true / false
    std::vector<Op> unary;               // e.g. Not, Past, Yesterday, BoundedYesterday
    std::vector<Op> binary;              // e.g. And, Or, Since
    int bounded_k = 2;                   // bound used for BoundedYesterday
    std::size_t max_size = 5;
    int max_depth = 2;
    std::size_t budget = 100000;         // ResourceError beyond this many formulas
};
std::vector<Formula> enumerate_formulas(const EnumerationSpec& spec);

/// Random formula generator for property tests.
struct RandomFormulaSpec {
    std::vector<std::string> atoms;
    std::vector<Op> ops;          // operators allowed at inner nodes
    std::size_t max_size = 8;
    int max_bound = 3;            // for BoundedYesterday
    int max_modulus = 3;          // for Mod leaves; Mod leaves appear only if Op::Mod is in ops
};
Formula random_formula(const RandomFormulaSpec& spec, Rng& rng);

}  // namespace tal
