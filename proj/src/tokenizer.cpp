#include "rdlm/tokenizer.hpp"

namespace rdlm {

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

char to_lower_ascii(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text, const TokenizerOptions& opts) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) ++i;
        std::size_t start = i;
        while (i < text.size() && !is_space(text[i])) ++i;
        if (i > start) {
            std::string tok(text.substr(start, i - start));
            if (opts.lowercase) {
                for (char& c : tok) c = to_lower_ascii(c);
            }
            out.push_back(std::move(tok));
        }
    }
    return out;
}

}  // namespace rdlm
