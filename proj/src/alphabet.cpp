#include "tal/alphabet.hpp"

#include <algorithm>
#include <cctype>

#include "tal/error.hpp"

namespace tal {

Alphabet::Alphabet(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
    if (tokens_.empty()) throw ContractError("alphabet must be non-empty");
    if (tokens_.size() > 0xffff) throw ContractError("alphabet too large");
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
        const auto& t = tokens_[i];
        if (t.empty()) throw ContractError("alphabet tokens must be non-empty");
        for (unsigned char c : t) {
            if (!std::isgraph(c)) throw ContractError("alphabet token '" + t + "' is not printable");
        }
        if (std::find(tokens_.begin(), tokens_.begin() + static_cast<std::ptrdiff_t>(i), t) !=
            tokens_.begin() + static_cast<std::ptrdiff_t>(i))
            throw ContractError("duplicate alphabet token '" + t + "'");
        if (t.size() != 1) single_char_ = false;
    }
}

std::optional<Symbol> Alphabet::find(std::string_view token) const {
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
        if (tokens_[i] == token) return static_cast<Symbol>(i);
    }
    return std::nullopt;
}

Symbol Alphabet::index(std::string_view token) const {
    if (auto s = find(token)) return *s;
    throw ContractError("token '" + std::string(token) + "' is not in the alphabet");
}

Word Alphabet::parse_word(std::string_view text) const {
    Word w;
    const bool spaced = std::any_of(text.begin(), text.end(),
                                    [](unsigned char c) { return std::isspace(c) != 0; });
    if (!spaced && single_char_) {
        for (char c : text) w.push_back(index(std::string_view(&c, 1)));
        return w;
    }
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        if (j > i) w.push_back(index(text.substr(i, j - i)));
        i = j;
    }
    return w;
}

std::string Alphabet::render(WordView w) const {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!single_char_ && i > 0) out += ' ';
        out += token(w[i]);
    }
    return out;
}

std::vector<Word> all_words(std::size_t alphabet_size, std::size_t n) {
    std::vector<Word> out;
    for_each_word(alphabet_size, n, [&](const Word& w) {
        if (w.size() == n) out.push_back(w);
    });
    return out;
}

}  // namespace tal
