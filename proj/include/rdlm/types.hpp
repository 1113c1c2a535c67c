#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rdlm {

using TokenId = std::uint32_t;
using IdSeq = std::vector<TokenId>;

// Contiguous token-id sequence interpreted right-anchored: it occupies the
// slots immediately left of the suffix slot of a window.
struct Phrase {
    IdSeq ids;

    Phrase() = default;
    explicit Phrase(IdSeq seq) : ids(std::move(seq)) {}
    Phrase(std::initializer_list<TokenId> seq) : ids(seq) {}

    std::size_t size() const { return ids.size(); }
    bool empty() const { return ids.empty(); }

    friend bool operator==(const Phrase&, const Phrase&) = default;
    friend auto operator<=>(const Phrase& a, const Phrase& b) { return a.ids <=> b.ids; }
};

// Exact probability as an integer pair; all corpus-level probabilities share
// the model total as denominator.
struct Prob {
    std::uint64_t count = 0;
    std::uint64_t total = 0;

    double value() const { return total == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(total); }

    friend bool operator==(const Prob&, const Prob&) = default;
};

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Precondition or argument violations (bad n, wrong lengths, id ranges).
struct ValidationError : Error {
    using Error::Error;
};

// Malformed or truncated model files, unsupported versions.
struct FormatError : Error {
    using Error::Error;
};

// A query token that is not present in the model vocabulary.
struct UnknownTokenError : Error {
    using Error::Error;
};

// Normalization requested for a phrase with zero marginal.
struct UndefinedDensityError : Error {
    using Error::Error;
};

// Compensated accumulator. Long sums of window statistics must stay accurate
// to a few ulp so the 1e-12 identity tolerances hold at corpus scale.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double v) {
        double y = v - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

// Shortest-round-trip style formatting shared by file formats and CLI output
// so human and record modes agree byte for byte.
std::string format_double(double v);

}  // namespace rdlm
