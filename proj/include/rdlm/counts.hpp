#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rdlm/tokenizer.hpp"
#include "rdlm/types.hpp"
#include "rdlm/vocabulary.hpp"

namespace rdlm {

// One distinct (prefix, suffix) window together with its multiplicity.
struct WindowRecord {
    IdSeq prefix;  // length n-1
    TokenId suffix = 0;
    std::uint64_t count = 0;

    friend bool operator==(const WindowRecord&, const WindowRecord&) = default;
};

// Empirical joint distribution over length-n windows. Finalized models are
// immutable and safe to share across threads.
//
// Records are kept sorted by (reversed prefix, suffix), so every window whose
// prefix ends with a given phrase occupies one contiguous range. Within such
// a range, records sharing the same free prefix remainder are adjacent, which
// is what the density fast path groups on.
class CountsModel {
  public:
    struct RecordRange {
        std::size_t begin = 0;
        std::size_t end = 0;
        bool empty() const { return begin == end; }
    };

    CountsModel() = default;

    // Sliding windows over one token stream. num_shards > 1 splits the window
    // starts across threads; the merged result is identical to sequential.
    static CountsModel from_tokens(std::span<const std::string> tokens, std::uint32_t n,
                                   const TokenizerOptions& opts = {}, unsigned num_shards = 1);

    // Each listed sequence must have length exactly n and contributes one window.
    static CountsModel from_sequences(const std::vector<std::vector<std::string>>& sequences, std::uint32_t n,
                                      const TokenizerOptions& opts = {});

    // Rebuild from already validated parts (model file loading).
    static CountsModel from_parts(std::uint32_t n, Vocabulary vocab, std::vector<WindowRecord> records,
                                  const TokenizerOptions& opts);

    std::uint32_t window_len() const { return n_; }
    std::uint32_t prefix_len() const { return n_ - 1; }
    const Vocabulary& vocab() const { return vocab_; }
    std::uint64_t total() const { return total_; }
    const TokenizerOptions& tokenizer_options() const { return opts_; }
    const std::vector<WindowRecord>& records() const { return records_; }
    bool empty() const { return records_.empty(); }

    // Exact count/total of a single window; zero when absent.
    Prob joint_prob(const IdSeq& prefix, TokenId suffix) const;

    // Exact probability that a window's prefix ends with s.
    Prob marginal_prob(const Phrase& s) const;

    // Contiguous records whose prefix ends with s. Accepts any phrase length;
    // lengths above n-1 yield an empty range.
    RecordRange anchored_range(const Phrase& s) const;

    // Sum of counts over anchored_range(s), via cumulative sums.
    std::uint64_t anchored_count(const Phrase& s) const;

    // All distinct right-anchored phrases with positive count, lengths 1..n-1,
    // sorted by (length, ids). The object set of every exhaustive check.
    std::vector<Phrase> observed_phrases() const;

    // Distinct suffix ids in ascending id order.
    std::vector<TokenId> observed_suffixes() const;

    // Tokenize with the recorded options and map to ids; throws
    // UnknownTokenError for out-of-vocabulary tokens.
    Phrase parse_phrase(std::string_view text) const;

    std::string phrase_text(const Phrase& s) const;

    friend bool operator==(const CountsModel&, const CountsModel&) = default;

  private:
    void validate_phrase_len(const Phrase& s) const;
    void finalize();  // sort records, build cumulative counts

    std::uint32_t n_ = 0;
    Vocabulary vocab_;
    std::vector<WindowRecord> records_;
    std::vector<std::uint64_t> cum_;  // cum_[i] = sum of counts of records_[0..i)
    std::uint64_t total_ = 0;
    TokenizerOptions opts_;
};

}  // namespace rdlm
