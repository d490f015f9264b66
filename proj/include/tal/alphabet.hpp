#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tal {

/// Index of a token inside its Alphabet.
using Symbol = std::uint16_t;

/// A string over an alphabet, stored as token indices.
using Word = std::vector<Symbol>;
using WordView = std::span<const Symbol>;

/// Finite, non-empty, ordered set of distinct tokens. Iteration order is the
/// declaration order and defines the index of each token.
class Alphabet {
  public:
    explicit Alphabet(std::vector<std::string> tokens);
    Alphabet(std::initializer_list<std::string> tokens)
        : Alphabet(std::vector<std::string>(tokens)) {}

    std::size_t size() const noexcept { return tokens_.size(); }
    const std::vector<std::string>& tokens() const noexcept { return tokens_; }
    const std::string& token(Symbol s) const { return tokens_.at(s); }

    std::optional<Symbol> find(std::string_view token) const;
    /// Throws ContractError for unknown tokens.
    Symbol index(std::string_view token) const;

    /// True when every token is a single character, so words can be written
    /// without separators.
    bool single_char() const noexcept { return single_char_; }

    /// Parses "abba" (single-character alphabets) or "tok1 tok2 ..." into a
    /// word. The empty text is the empty word.
    Word parse_word(std::string_view text) const;
    std::string render(WordView w) const;

    friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.tokens_ == b.tokens_; }

  private:
    std::vector<std::string> tokens_;
    bool single_char_ = true;
};

/// All words of length exactly n, in lexicographic order of token indices.
std::vector<Word> all_words(std::size_t alphabet_size, std::size_t n);

/// Calls fn(word) for every word of length 0..max_len, shortest first.
template <typename Fn>
void for_each_word(std::size_t alphabet_size, std::size_t max_len, Fn&& fn) {
    Word w;
    for (std::size_t n = 0; n <= max_len; ++n) {
        w.assign(n, 0);
        for (;;) {
            fn(static_cast<const Word&>(w));
            std::size_t i = n;
            while (i > 0 && ++w[i - 1] == alphabet_size) {
                w[i - 1] = 0;
                --i;
            }
            if (i == 0) break;
        }
    }
}

}  // namespace tal
