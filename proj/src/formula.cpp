#include "tal/formula.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>

#include "tal/error.hpp"

namespace tal {

const char* op_name(Op op) noexcept {
    switch (op) {
        case Op::Top: return "true";
        case Op::Bot: return "false";
        case Op::Atom: return "atom";
        case Op::Not: return "!";
        case Op::And: return "&";
        case Op::Or: return "|";
        case Op::Yesterday: return "Y";
        case Op::BoundedYesterday: return "Y^k";
        case Op::StarYesterday: return "Ystar";
        case Op::Past: return "P";
        case Op::Since: return "S";
        case Op::Until: return "U";
        case Op::Mod: return "MOD";
    }
    return "?";
}

bool is_temporal(Op op) noexcept {
    switch (op) {
        case Op::Yesterday:
        case Op::BoundedYesterday:
        case Op::StarYesterday:
        case Op::Past:
        case Op::Since:
        case Op::Until: return true;
        default: return false;
    }
}

bool is_binary(Op op) noexcept {
    return op == Op::And || op == Op::Or || op == Op::Since || op == Op::Until;
}

bool is_unary(Op op) noexcept {
    return op == Op::Not || op == Op::Yesterday || op == Op::BoundedYesterday ||
           op == Op::StarYesterday || op == Op::Past;
}

namespace {

Formula::Node make_node(Op op, std::vector<Formula> children) {
    Formula::Node n{op, {}, 0, 0, 0, std::move(children), 1};
    for (const auto& c : n.children) n.size += c.size();
    return n;
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction

Formula Formula::top() {
    static const Formula f(std::make_shared<const Node>(make_node(Op::Top, {})));
    return f;
}

Formula Formula::bot() {
    static const Formula f(std::make_shared<const Node>(make_node(Op::Bot, {})));
    return f;
}

Formula Formula::atom(std::string token) {
    if (token.empty()) throw ContractError("atom token must be non-empty");
    auto n = make_node(Op::Atom, {});
    n.token = std::move(token);
    return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::negation(Formula f) {
    return Formula(std::make_shared<const Node>(make_node(Op::Not, {std::move(f)})));
}

Formula Formula::conjunction(Formula a, Formula b) {
    return Formula(std::make_shared<const Node>(make_node(Op::And, {std::move(a), std::move(b)})));
}

Formula Formula::disjunction(Formula a, Formula b) {
    return Formula(std::make_shared<const Node>(make_node(Op::Or, {std::move(a), std::move(b)})));
}

Formula Formula::yesterday(Formula f) {
    return Formula(std::make_shared<const Node>(make_node(Op::Yesterday, {std::move(f)})));
}

Formula Formula::bounded_yesterday(int k, Formula f) {
    if (k < 1) throw ContractError("Y^k requires k >= 1, got " + std::to_string(k));
    auto n = make_node(Op::BoundedYesterday, {std::move(f)});
    n.bound = k;
    return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::star_yesterday(Formula f) {
    return Formula(std::make_shared<const Node>(make_node(Op::StarYesterday, {std::move(f)})));
}

Formula Formula::past(Formula f) {
    return Formula(std::make_shared<const Node>(make_node(Op::Past, {std::move(f)})));
}

Formula Formula::since(Formula a, Formula b) {
    return Formula(std::make_shared<const Node>(make_node(Op::Since, {std::move(a), std::move(b)})));
}

Formula Formula::until(Formula a, Formula b) {
    return Formula(std::make_shared<const Node>(make_node(Op::Until, {std::move(a), std::move(b)})));
}

Formula Formula::mod(int m, int r) {
    if (m <= 0) throw ContractError("MOD requires m > 0, got " + std::to_string(m));
    if (r < 0) throw ContractError("MOD requires r >= 0, got " + std::to_string(r));
    auto n = make_node(Op::Mod, {});
    n.modulus = m;
    n.residue = r % m;
    return Formula(std::make_shared<const Node>(std::move(n)));
}

Op Formula::op() const noexcept { return node_->op; }
const std::string& Formula::token() const noexcept { return node_->token; }
int Formula::bound() const noexcept { return node_->bound; }
int Formula::modulus() const noexcept { return node_->modulus; }
int Formula::residue() const noexcept { return node_->residue; }
std::size_t Formula::size() const noexcept { return node_->size; }

const Formula& Formula::lhs() const {
    if (node_->children.empty()) throw ContractError(std::string(op_name(op())) + " has no operand");
    return node_->children[0];
}

const Formula& Formula::rhs() const {
    if (node_->children.size() < 2)
        throw ContractError(std::string(op_name(op())) + " has no right operand");
    return node_->children[1];
}

bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    if (x.op != y.op || x.size != y.size || x.token != y.token || x.bound != y.bound ||
        x.modulus != y.modulus || x.residue != y.residue)
        return false;
    for (std::size_t i = 0; i < x.children.size(); ++i) {
        if (!(x.children[i] == y.children[i])) return false;
    }
    return true;
}

bool operator<(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return false;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    if (x.op != y.op) return x.op < y.op;
    if (x.token != y.token) return x.token < y.token;
    if (x.bound != y.bound) return x.bound < y.bound;
    if (x.modulus != y.modulus) return x.modulus < y.modulus;
    if (x.residue != y.residue) return x.residue < y.residue;
    for (std::size_t i = 0; i < x.children.size(); ++i) {
        if (x.children[i] < y.children[i]) return true;
        if (y.children[i] < x.children[i]) return false;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

void print(const Formula& f, std::string& out) {
    switch (f.op()) {
        case Op::Top: out += "true"; return;
        case Op::Bot: out += "false"; return;
        case Op::Atom: out += f.token(); return;
        case Op::Mod:
            out += "MOD(" + std::to_string(f.modulus()) + "," + std::to_string(f.residue()) + ")";
            return;
        case Op::Not: out += "!"; break;
        case Op::Yesterday: out += "Y "; break;
        case Op::BoundedYesterday: out += "Y^" + std::to_string(f.bound()) + " "; break;
        case Op::StarYesterday: out += "Ystar "; break;
        case Op::Past: out += "P "; break;
        case Op::And:
        case Op::Or:
        case Op::Since:
        case Op::Until:
            out += '(';
            print(f.lhs(), out);
            out += ' ';
            out += op_name(f.op());
            out += ' ';
            print(f.rhs(), out);
            out += ')';
            return;
    }
    print(f.lhs(), out);
}

}  // namespace

std::string Formula::to_string() const {
    std::string out;
    print(*this, out);
    return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

enum class Tok { Ident, Int, Bang, Amp, Bar, Caret, LParen, RParen, Comma, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

class Lexer {
  public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space();
            if (pos_ >= src_.size()) {
                out.push_back({Tok::End, "", line_, col_});
                return out;
            }
            const std::size_t line = line_, col = col_;
            const char c = src_[pos_];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t j = pos_;
                while (j < src_.size() &&
                       (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_'))
                    ++j;
                out.push_back({Tok::Ident, std::string(src_.substr(pos_, j - pos_)), line, col});
                advance(j - pos_);
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                std::size_t j = pos_;
                while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) ++j;
                out.push_back({Tok::Int, std::string(src_.substr(pos_, j - pos_)), line, col});
                advance(j - pos_);
                continue;
            }
            Tok kind;
            switch (c) {
                case '!': kind = Tok::Bang; break;
                case '&': kind = Tok::Amp; break;
                case '|': kind = Tok::Bar; break;
                case '^': kind = Tok::Caret; break;
                case '(': kind = Tok::LParen; break;
                case ')': kind = Tok::RParen; break;
                case ',': kind = Tok::Comma; break;
                default:
                    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
            }
            out.push_back({kind, std::string(1, c), line, col});
            advance(1);
        }
    }

  private:
    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance(1);
    }
    void advance(std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
            if (src_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++pos_;
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

bool is_keyword(std::string_view s) {
    return s == "Y" || s == "Ystar" || s == "P" || s == "S" || s == "U" || s == "true" ||
           s == "false" || s == "MOD";
}

class Parser {
  public:
    Parser(std::vector<Token> toks, const Alphabet* alphabet)
        : toks_(std::move(toks)), alphabet_(alphabet) {}

    Formula parse() {
        Formula f = formula();
        if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
        return f;
    }

  private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& take() { return toks_[pos_++]; }
    bool at_ident(std::string_view s) const { return peek().kind == Tok::Ident && peek().text == s; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, peek().line, peek().column);
    }

    void expect(Tok kind, const char* what) {
        if (peek().kind != kind) fail(std::string("expected ") + what);
        ++pos_;
    }

    int integer(const char* what) {
        if (peek().kind != Tok::Int) fail(std::string("expected ") + what);
        const Token& t = take();
        int v = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc()) throw ParseError("integer out of range", t.line, t.column);
        return v;
    }

    Formula formula() {
        Formula lhs = or_expr();
        if (at_ident("S")) {
            ++pos_;
            return Formula::since(lhs, formula());
        }
        if (at_ident("U")) {
            ++pos_;
            return Formula::until(lhs, formula());
        }
        return lhs;
    }

    Formula or_expr() {
        Formula f = and_expr();
        while (peek().kind == Tok::Bar) {
            ++pos_;
            f = Formula::disjunction(f, and_expr());
        }
        return f;
    }

    Formula and_expr() {
        Formula f = unary();
        while (peek().kind == Tok::Amp) {
            ++pos_;
            f = Formula::conjunction(f, unary());
        }
        return f;
    }

    Formula unary() {
        if (peek().kind == Tok::Bang) {
            ++pos_;
            return Formula::negation(unary());
        }
        if (at_ident("Y")) {
            ++pos_;
            if (peek().kind == Tok::Caret) {
                ++pos_;
                const Token& t = peek();
                const int k = integer("bound after 'Y^'");
                if (k < 1) throw ParseError("Y^k requires k >= 1", t.line, t.column);
                return Formula::bounded_yesterday(k, unary());
            }
            return Formula::yesterday(unary());
        }
        if (at_ident("Ystar")) {
            ++pos_;
            return Formula::star_yesterday(unary());
        }
        if (at_ident("P")) {
            ++pos_;
            return Formula::past(unary());
        }
        return primary();
    }

    Formula primary() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::LParen: {
                ++pos_;
                Formula f = formula();
                expect(Tok::RParen, "')'");
                return f;
            }
            case Tok::Ident: {
                if (t.text == "true") {
                    ++pos_;
                    return Formula::top();
                }
                if (t.text == "false") {
                    ++pos_;
                    return Formula::bot();
                }
                if (t.text == "MOD") {
                    ++pos_;
                    expect(Tok::LParen, "'(' after MOD");
                    const Token& mt = peek();
                    const int m = integer("modulus");
                    if (m < 1) throw ParseError("MOD requires m > 0", mt.line, mt.column);
                    expect(Tok::Comma, "','");
                    const int r = integer("residue");
                    expect(Tok::RParen, "')'");
                    return Formula::mod(m, r);
                }
                if (is_keyword(t.text)) fail("unexpected keyword '" + t.text + "'");
                if (alphabet_ && !alphabet_->find(t.text))
                    fail("unknown atom '" + t.text + "'");
                ++pos_;
                return Formula::atom(t.text);
            }
            case Tok::End: fail("unexpected end of formula");
            default: fail("unexpected '" + t.text + "'");
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    const Alphabet* alphabet_;
};

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(Lexer(text).run(), nullptr).parse(); }

Formula parse_formula(std::string_view text, const Alphabet& alphabet) {
    return Parser(Lexer(text).run(), &alphabet).parse();
}

// ---------------------------------------------------------------------------
// Inspection

namespace {

template <typename Fn>
void visit(const Formula& f, Fn&& fn) {
    fn(f);
    if (is_unary(f.op())) {
        visit(f.lhs(), fn);
    } else if (is_binary(f.op())) {
        visit(f.lhs(), fn);
        visit(f.rhs(), fn);
    }
}

}  // namespace

std::vector<std::string> atoms(const Formula& f) {
    std::vector<std::string> out;
    visit(f, [&](const Formula& g) {
        if (g.op() == Op::Atom && std::find(out.begin(), out.end(), g.token()) == out.end())
            out.push_back(g.token());
    });
    return out;
}

bool contains(const Formula& f, Op op) {
    bool found = false;
    visit(f, [&](const Formula& g) { found = found || g.op() == op; });
    return found;
}

int operator_depth(const Formula& f) {
    switch (f.op()) {
        case Op::Top:
        case Op::Bot:
        case Op::Atom:
        case Op::Mod: return 0;
        case Op::Not: return operator_depth(f.lhs());
        case Op::And:
        case Op::Or: return std::max(operator_depth(f.lhs()), operator_depth(f.rhs()));
        case Op::Yesterday:
        case Op::BoundedYesterday:
        case Op::StarYesterday:
        case Op::Past: return 1 + operator_depth(f.lhs());
        case Op::Since:
        case Op::Until: return 1 + std::max(operator_depth(f.lhs()), operator_depth(f.rhs()));
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Evaluation

Evaluator::Evaluator(const Formula& f, const Alphabet& alphabet) {
    // Post-order flattening; shared subtrees are duplicated, which is fine
    // for the formula sizes this is used with.
    auto flatten = [&](auto&& self, const Formula& g) -> int {
        Node n{g.op(), -1, -1, -1, g.bound(), g.modulus(), g.residue()};
        if (g.op() == Op::Atom) {
            if (auto s = alphabet.find(g.token())) n.symbol = *s;
        }
        if (is_unary(g.op()) || is_binary(g.op())) n.a = self(self, g.lhs());
        if (is_binary(g.op())) n.b = self(self, g.rhs());
        nodes_.push_back(n);
        return static_cast<int>(nodes_.size() - 1);
    };
    flatten(flatten, f);
}

bool Evaluator::at(WordView w, std::size_t position) const {
    if (position < 1 || position > w.size() + 1)
        throw ContractError("evaluation position " + std::to_string(position) +
                            " outside [1, " + std::to_string(w.size() + 1) + "]");
    std::vector<std::int8_t> memo(nodes_.size() * (w.size() + 2), -1);
    return eval(nodes_.size() - 1, w, position, memo);
}

bool Evaluator::eval(std::size_t idx, WordView w, std::size_t n,
                     std::vector<std::int8_t>& memo) const {
    const std::size_t last = w.size() + 1;
    std::int8_t& slot = memo[idx * (last + 1) + n];
    if (slot >= 0) return slot != 0;
    const Node& node = nodes_[idx];
    const auto a = static_cast<std::size_t>(node.a);
    const auto b = static_cast<std::size_t>(node.b);
    bool v = false;
    switch (node.op) {
        case Op::Top: v = true; break;
        case Op::Bot: v = false; break;
        case Op::Atom: v = n >= 1 && n <= w.size() && w[n - 1] == node.symbol; break;
        case Op::Mod: v = static_cast<int>(n % static_cast<std::size_t>(node.m)) == node.r; break;
        case Op::Not: v = !eval(a, w, n, memo); break;
        case Op::And: v = eval(a, w, n, memo) && eval(b, w, n, memo); break;
        case Op::Or: v = eval(a, w, n, memo) || eval(b, w, n, memo); break;
        case Op::Yesterday: v = n >= 2 && eval(a, w, n - 1, memo); break;
        case Op::BoundedYesterday:
            // OR over i = 1..k of Y^i child.
            for (std::size_t i = 1; i <= static_cast<std::size_t>(node.k) && i < n && !v; ++i)
                v = eval(a, w, n - i, memo);
            break;
        case Op::StarYesterday:
            for (std::size_t i = 1; i < n && !v; ++i) v = eval(a, w, n - i, memo);
            break;
        case Op::Past:
            for (std::size_t m = 1; m < n && !v; ++m) v = eval(a, w, m, memo);
            break;
        case Op::Since:
            // exists m < n with rhs at m and lhs at every i in (m, n)
            for (std::size_t m = n; m-- > 1 && !v;) {
                if (eval(b, w, m, memo)) {
                    v = true;
                    for (std::size_t i = m + 1; i < n && v; ++i) v = eval(a, w, i, memo);
                }
            }
            break;
        case Op::Until:
            for (std::size_t m = n + 1; m <= last && !v; ++m) {
                if (eval(b, w, m, memo)) {
                    v = true;
                    for (std::size_t i = n + 1; i < m && v; ++i) v = eval(a, w, i, memo);
                }
            }
            break;
    }
    slot = v ? 1 : 0;
    return v;
}

bool evaluate(const Formula& f, const Alphabet& alphabet, WordView w, std::size_t position) {
    return Evaluator(f, alphabet).at(w, position);
}

bool accepts(const Formula& f, const Alphabet& alphabet, WordView w) {
    return Evaluator(f, alphabet).accepts(w);
}

// ---------------------------------------------------------------------------
// Rewrites

namespace {

Formula rebuild(const Formula& f, const Formula& a) {
    switch (f.op()) {
        case Op::Not: return Formula::negation(a);
        case Op::Yesterday: return Formula::yesterday(a);
        case Op::BoundedYesterday: return Formula::bounded_yesterday(f.bound(), a);
        case Op::StarYesterday: return Formula::star_yesterday(a);
        case Op::Past: return Formula::past(a);
        default: throw ContractError("rebuild: not a unary operator");
    }
}

Formula rebuild(const Formula& f, const Formula& a, const Formula& b) {
    switch (f.op()) {
        case Op::And: return Formula::conjunction(a, b);
        case Op::Or: return Formula::disjunction(a, b);
        case Op::Since: return Formula::since(a, b);
        case Op::Until: return Formula::until(a, b);
        default: throw ContractError("rebuild: not a binary operator");
    }
}

/// Bottom-up map: fn receives the node with already-transformed children.
template <typename Fn>
Formula transform(const Formula& f, Fn&& fn) {
    if (is_unary(f.op())) return fn(rebuild(f, transform(f.lhs(), fn)));
    if (is_binary(f.op())) return fn(rebuild(f, transform(f.lhs(), fn), transform(f.rhs(), fn)));
    return fn(f);
}

Formula big_or(std::vector<Formula> parts) {
    Formula out = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) out = Formula::disjunction(out, parts[i]);
    return out;
}

}  // namespace

Formula expand_bounded(const Formula& f) {
    return transform(f, [](const Formula& g) {
        if (g.op() == Op::StarYesterday) return Formula::past(g.lhs());
        if (g.op() != Op::BoundedYesterday) return g;
        std::vector<Formula> chain;
        Formula step = g.lhs();
        for (int i = 1; i <= g.bound(); ++i) {
            step = Formula::yesterday(step);
            chain.push_back(step);
        }
        return big_or(std::move(chain));
    });
}

Formula rewrite_with_mod(const Formula& f, int k, int m) {
    if (k < 2) throw ContractError("rewrite_with_mod requires k >= 2");
    if (m < k) throw ContractError("rewrite_with_mod requires m >= k");
    for (Op bad : {Op::Since, Op::Until, Op::StarYesterday}) {
        if (contains(f, bad))
            throw ContractError(std::string("rewrite_with_mod: unsupported operator ") + op_name(bad));
    }
    return transform(f, [k, m](const Formula& g) {
        if (g.op() != Op::Yesterday) return g;
        std::vector<Formula> parts;
        for (int i = 1; i <= m; ++i) {
            Formula here = Formula::mod(m, i % m);
            Formula before = Formula::conjunction(Formula::mod(m, (i - 1) % m), g.lhs());
            parts.push_back(Formula::conjunction(here, Formula::bounded_yesterday(k, before)));
        }
        return big_or(std::move(parts));
    });
}

Formula locally_testable_formula(LocalKind kind, const std::vector<std::string>& u, int m) {
    if (m < 1) throw ContractError("window size m must be positive");
    const std::size_t want = kind == LocalKind::Factor ? static_cast<std::size_t>(m)
                                                       : static_cast<std::size_t>(m - 1);
    if (u.size() != want)
        throw ContractError("locally testable word has length " + std::to_string(u.size()) +
                            ", expected " + std::to_string(want));
    if (u.empty()) return Formula::top();  // prefix/suffix with m = 1: every string

    // Innermost conjunct is the first token; each later token wraps it in Y.
    Formula inner = Formula::atom(u.front());
    if (kind == LocalKind::Prefix)
        inner = Formula::conjunction(inner, Formula::negation(Formula::past(Formula::top())));
    for (std::size_t j = 1; j < u.size(); ++j)
        inner = Formula::conjunction(Formula::atom(u[j]), Formula::yesterday(inner));
    return kind == LocalKind::Suffix ? Formula::yesterday(inner) : Formula::past(inner);
}

// ---------------------------------------------------------------------------
// Enumeration and random generation

std::vector<Formula> enumerate_formulas(const EnumerationSpec& spec) {
    // by_size[s] holds every admissible formula with exactly s nodes.
    std::vector<std::vector<std::pair<Formula, int>>> by_size(spec.max_size + 1);
    std::size_t total = 0;
    auto add = [&](std::size_t s, Formula f, int depth) {
        if (depth > spec.max_depth) return;
        if (++total > spec.budget)
            throw ResourceError("formula enumeration exceeded budget of " +
                                std::to_string(spec.budget));
        by_size[s].emplace_back(std::move(f), depth);
    };
    if (spec.max_size >= 1) {
        if (spec.constants) {
            add(1, Formula::top(), 0);
            add(1, Formula::bot(), 0);
        }
        for (const auto& a : spec.atoms) add(1, Formula::atom(a), 0);
    }
    for (std::size_t s = 2; s <= spec.max_size; ++s) {
        for (Op op : spec.unary) {
            for (const auto& [c, d] : by_size[s - 1]) {
                switch (op) {
                    case Op::Not: add(s, Formula::negation(c), d); break;
                    case Op::Yesterday: add(s, Formula::yesterday(c), d + 1); break;
                    case Op::BoundedYesterday:
                        add(s, Formula::bounded_yesterday(spec.bounded_k, c), d + 1);
                        break;
                    case Op::StarYesterday: add(s, Formula::star_yesterday(c), d + 1); break;
                    case Op::Past: add(s, Formula::past(c), d + 1); break;
                    default: throw ContractError("not a unary operator in enumeration spec");
                }
            }
        }
        for (Op op : spec.binary) {
            for (std::size_t ls = 1; ls + 1 < s; ++ls) {
                const std::size_t rs = s - 1 - ls;
                for (const auto& [l, ld] : by_size[ls]) {
                    for (const auto& [r, rd] : by_size[rs]) {
                        const int d = std::max(ld, rd);
                        switch (op) {
                            case Op::And: add(s, Formula::conjunction(l, r), d); break;
                            case Op::Or: add(s, Formula::disjunction(l, r), d); break;
                            case Op::Since: add(s, Formula::since(l, r), d + 1); break;
                            case Op::Until: add(s, Formula::until(l, r), d + 1); break;
                            default: throw ContractError("not a binary operator in enumeration spec");
                        }
                    }
                }
            }
        }
    }
    std::vector<Formula> out;
    out.reserve(total);
    for (auto& level : by_size)
        for (auto& [f, d] : level) out.push_back(std::move(f));
    return out;
}

namespace {

Formula random_leaf(const RandomFormulaSpec& spec, Rng& rng) {
    const bool with_mod = std::find(spec.ops.begin(), spec.ops.end(), Op::Mod) != spec.ops.end();
    const std::uint64_t choices = spec.atoms.size() + 2 + (with_mod ? 1 : 0);
    const std::uint64_t pick = uniform_below(rng, choices);
    if (pick < spec.atoms.size()) return Formula::atom(spec.atoms[pick]);
    if (pick == spec.atoms.size()) return Formula::top();
    if (pick == spec.atoms.size() + 1) return Formula::bot();
    const int m = 2 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(std::max(1, spec.max_modulus - 1))));
    return Formula::mod(m, static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(m))));
}

Formula random_of_size(const RandomFormulaSpec& spec, std::size_t size, Rng& rng) {
    std::vector<Op> unary, binary;
    for (Op op : spec.ops) {
        if (is_unary(op)) unary.push_back(op);
        if (is_binary(op)) binary.push_back(op);
    }
    if (size <= 1 || (unary.empty() && (binary.empty() || size < 3))) return random_leaf(spec, rng);
    const bool use_binary =
        size >= 3 && !binary.empty() && (unary.empty() || uniform_below(rng, 2) == 0);
    if (!use_binary) {
        const Op op = unary[uniform_below(rng, unary.size())];
        Formula c = random_of_size(spec, size - 1, rng);
        switch (op) {
            case Op::Not: return Formula::negation(c);
            case Op::Yesterday: return Formula::yesterday(c);
            case Op::BoundedYesterday:
                return Formula::bounded_yesterday(
                    1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(std::max(1, spec.max_bound)))), c);
            case Op::StarYesterday: return Formula::star_yesterday(c);
            default: return Formula::past(c);
        }
    }
    const Op op = binary[uniform_below(rng, binary.size())];
    const std::size_t left = 1 + uniform_below(rng, size - 2);
    Formula l = random_of_size(spec, left, rng);
    Formula r = random_of_size(spec, size - 1 - left, rng);
    switch (op) {
        case Op::And: return Formula::conjunction(l, r);
        case Op::Or: return Formula::disjunction(l, r);
        case Op::Since: return Formula::since(l, r);
        default: return Formula::until(l, r);
    }
}

}  // namespace

Formula random_formula(const RandomFormulaSpec& spec, Rng& rng) {
    if (spec.atoms.empty()) throw ContractError("random_formula needs at least one atom");
    const std::size_t size = 1 + uniform_below(rng, std::max<std::size_t>(1, spec.max_size));
    return random_of_size(spec, size, rng);
}

}  // namespace tal
