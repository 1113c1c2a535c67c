#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rdlm/types.hpp"

namespace rdlm {

// Bidirectional token <-> id map. Ids are dense, 0-based, assigned in first
// occurrence order, which fixes the suffix basis ordering everywhere else.
class Vocabulary {
  public:
    TokenId intern(std::string_view token);
    std::optional<TokenId> find(std::string_view token) const;
    const std::string& token(TokenId id) const;

    std::size_t size() const { return tokens_.size(); }
    const std::vector<std::string>& tokens() const { return tokens_; }

    friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.tokens_ == b.tokens_; }

  private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, TokenId> index_;
};

}  // namespace rdlm
