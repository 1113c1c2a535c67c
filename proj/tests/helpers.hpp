#pragma once

#include <random>
#include <string>
#include <vector>

#include "rdlm/counts.hpp"

namespace rdlm::testing {

// Five length-4 sequences: two kinds of dog bark, the rest run.
extern const std::vector<std::vector<std::string>> kDogCorpus;

// Four adjective-noun pairs; two words share prefixes exactly.
extern const std::vector<std::vector<std::string>> kMountainCorpus;

CountsModel dog_model();
CountsModel mountain_model();

// The mountain pairs with the two positions swapped, so the prefix side of
// the original shows up as the suffix side here.
CountsModel mountain_reversed_model();

std::string corpus_lines(const std::vector<std::vector<std::string>>& corpus);

// Small models for property tests: vocabulary <= 8 tokens, window length
// 2..4, at most 50 windows.
CountsModel random_model(std::mt19937_64& rng);

// Deterministic English-like token stream produced from sentence templates
// with a skewed word draw; around target_tokens tokens.
std::vector<std::string> synthetic_corpus(std::size_t target_tokens, std::uint64_t seed);

}  // namespace rdlm::testing
