#include "helpers.hpp"

#include <cmath>

namespace rdlm::testing {

const std::vector<std::vector<std::string>> kDogCorpus = {
    {"small", "black", "dog", "barks"}, {"small", "white", "dog", "barks"}, {"big", "black", "dog", "runs"},
    {"big", "white", "cat", "runs"},    {"small", "black", "cat", "runs"},
};

const std::vector<std::vector<std::string>> kMountainCorpus = {
    {"big", "mountain"},
    {"tall", "mountain"},
    {"cold", "winter"},
    {"chilly", "winter"},
};

CountsModel dog_model() { return CountsModel::from_sequences(kDogCorpus, 4); }

CountsModel mountain_model() { return CountsModel::from_sequences(kMountainCorpus, 2); }

CountsModel mountain_reversed_model() {
    std::vector<std::vector<std::string>> reversed;
    for (const auto& pair : kMountainCorpus) reversed.push_back({pair[1], pair[0]});
    return CountsModel::from_sequences(reversed, 2);
}

std::string corpus_lines(const std::vector<std::vector<std::string>>& corpus) {
    std::string out;
    for (const auto& seq : corpus) {
        for (std::size_t i = 0; i < seq.size(); ++i) {
            if (i) out += ' ';
            out += seq[i];
        }
        out += '\n';
    }
    return out;
}

CountsModel random_model(std::mt19937_64& rng) {
    std::size_t vocab = 2 + rng() % 7;
    std::uint32_t n = static_cast<std::uint32_t>(2 + rng() % 3);
    std::size_t windows = 1 + rng() % 50;
    std::vector<std::vector<std::string>> sequences;
    sequences.reserve(windows);
    for (std::size_t w = 0; w < windows; ++w) {
        std::vector<std::string> seq;
        for (std::uint32_t i = 0; i < n; ++i) seq.push_back("w" + std::to_string(rng() % vocab));
        sequences.push_back(std::move(seq));
    }
    return CountsModel::from_sequences(sequences, n);
}

namespace {

const std::vector<std::string> kDeterminers = {"the", "a", "this", "that", "every", "some"};
const std::vector<std::string> kAdjectives = {
    "small", "big",    "black",  "white",  "old",    "young", "quick",  "lazy",  "happy", "quiet",
    "loud",  "bright", "dark",   "cold",   "warm",   "tall",  "short",  "clever", "gentle", "fierce",
    "hungry", "sleepy", "brave", "shy",    "curious", "patient", "wild", "tame",  "heavy", "light"};
const std::vector<std::string> kNouns = {
    "dog",     "cat",    "bird",   "horse",  "fox",     "wolf",   "bear",   "rabbit", "mouse",  "owl",
    "farmer",  "child",  "teacher", "sailor", "doctor",  "baker",  "hunter", "painter", "writer", "singer",
    "mountain", "river", "forest", "valley", "village", "garden", "market", "bridge", "harbor", "meadow",
    "winter",  "summer", "morning", "evening", "road",   "house",  "boat",   "tree",   "field",  "storm"};
const std::vector<std::string> kVerbs = {
    "barks", "runs",    "sleeps", "jumps",  "waits", "sings",  "hides", "watches", "wanders", "rests",
    "listens", "dreams", "works", "plays",  "swims", "climbs", "hunts", "falls",   "rises",   "laughs",
    "cries", "whispers", "shouts", "walks", "stands"};
const std::vector<std::string> kAdverbs = {"quickly", "slowly", "quietly", "loudly", "gently",
                                           "bravely", "happily", "sadly",  "often",  "rarely",
                                           "always",  "never",  "soon",   "today",  "tonight"};
const std::vector<std::string> kPrepositions = {"in", "on", "near", "under", "behind", "beyond", "across", "through"};

enum Slot { kDet, kAdj, kNoun, kVerb, kAdv, kPrep };

const std::vector<std::vector<Slot>> kTemplates = {
    {kDet, kAdj, kNoun, kVerb, kAdv},
    {kDet, kNoun, kVerb, kPrep, kDet, kNoun},
    {kDet, kAdj, kAdj, kNoun, kVerb},
    {kDet, kNoun, kVerb},
    {kDet, kNoun, kVerb, kAdv, kPrep, kDet, kAdj, kNoun},
    {kAdv, kDet, kNoun, kVerb},
    {kDet, kAdj, kNoun, kVerb, kPrep, kDet, kNoun},
    {kDet, kNoun, kPrep, kDet, kNoun, kVerb},
};

const std::vector<std::string>& pool(Slot slot) {
    switch (slot) {
        case kDet: return kDeterminers;
        case kAdj: return kAdjectives;
        case kNoun: return kNouns;
        case kVerb: return kVerbs;
        case kAdv: return kAdverbs;
        case kPrep: return kPrepositions;
    }
    return kDeterminers;
}

}  // namespace

std::vector<std::string> synthetic_corpus(std::size_t target_tokens, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    // Skewed index draw: low pool indexes dominate, Zipf-like frequencies.
    auto pick = [&](const std::vector<std::string>& words) {
        double u = unit();
        std::size_t idx = static_cast<std::size_t>(static_cast<double>(words.size()) * u * u);
        return words[std::min(idx, words.size() - 1)];
    };
    std::vector<std::string> tokens;
    tokens.reserve(target_tokens + 8);
    while (tokens.size() < target_tokens) {
        const auto& sentence = kTemplates[rng() % kTemplates.size()];
        for (Slot slot : sentence) tokens.push_back(pick(pool(slot)));
    }
    return tokens;
}

}  // namespace rdlm::testing
