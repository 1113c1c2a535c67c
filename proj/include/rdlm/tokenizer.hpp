#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rdlm {

struct TokenizerOptions {
    bool lowercase = false;

    friend bool operator==(const TokenizerOptions&, const TokenizerOptions&) = default;
};

// Whitespace-delimited split; consecutive delimiters collapse. Lowercasing is
// ASCII-only so results do not depend on locale.
std::vector<std::string> tokenize(std::string_view text, const TokenizerOptions& opts = {});

}  // namespace rdlm
