#include "rdlm/counts.hpp"

#include <algorithm>
#include <thread>
#include <unordered_map>

namespace rdlm {

namespace {

struct IdSeqHash {
    std::size_t operator()(const IdSeq& seq) const {
        std::uint64_t h = 1469598103934665603ull;
        for (TokenId id : seq) {
            h ^= id;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

using WindowCounts = std::unordered_map<IdSeq, std::uint64_t, IdSeqHash>;

// Three-way compare of a record's reversed prefix against a reversed phrase
// key, looking at the first key.size() positions only.
int cmp_reversed(const IdSeq& prefix, const IdSeq& rev_key) {
    for (std::size_t i = 0; i < rev_key.size(); ++i) {
        TokenId p = prefix[prefix.size() - 1 - i];
        if (p < rev_key[i]) return -1;
        if (p > rev_key[i]) return 1;
    }
    return 0;
}

// Full anchored order: reversed prefix, then suffix.
bool anchored_less(const WindowRecord& a, const WindowRecord& b) {
    std::size_t len = a.prefix.size();
    for (std::size_t i = 0; i < len; ++i) {
        TokenId x = a.prefix[len - 1 - i];
        TokenId y = b.prefix[len - 1 - i];
        if (x != y) return x < y;
    }
    return a.suffix < b.suffix;
}

std::string normalized(const std::string& token, const TokenizerOptions& opts) {
    if (!opts.lowercase) return token;
    std::string out = token;
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

CountsModel build_from_window_counts(std::uint32_t n, Vocabulary vocab, const WindowCounts& counts,
                                     const TokenizerOptions& opts) {
    std::vector<WindowRecord> records;
    records.reserve(counts.size());
    for (const auto& [window, count] : counts) {
        WindowRecord rec;
        rec.prefix.assign(window.begin(), window.end() - 1);
        rec.suffix = window.back();
        rec.count = count;
        records.push_back(std::move(rec));
    }
    return CountsModel::from_parts(n, std::move(vocab), std::move(records), opts);
}

}  // namespace

CountsModel CountsModel::from_tokens(std::span<const std::string> tokens, std::uint32_t n,
                                     const TokenizerOptions& opts, unsigned num_shards) {
    if (n < 2) throw ValidationError("window length must be at least 2, got " + std::to_string(n));

    Vocabulary vocab;
    IdSeq stream;
    stream.reserve(tokens.size());
    for (const auto& tok : tokens) stream.push_back(vocab.intern(normalized(tok, opts)));

    std::size_t num_windows = stream.size() >= n ? stream.size() - n + 1 : 0;
    if (num_shards == 0) num_shards = 1;
    num_shards = static_cast<unsigned>(std::min<std::size_t>(num_shards, std::max<std::size_t>(num_windows, 1)));

    auto count_range = [&](std::size_t lo, std::size_t hi, WindowCounts& out) {
        IdSeq window(n);
        for (std::size_t w = lo; w < hi; ++w) {
            std::copy(stream.begin() + w, stream.begin() + w + n, window.begin());
            ++out[window];
        }
    };

    WindowCounts merged;
    if (num_shards == 1) {
        count_range(0, num_windows, merged);
    } else {
        std::vector<WindowCounts> partial(num_shards);
        std::vector<std::thread> workers;
        std::size_t chunk = (num_windows + num_shards - 1) / num_shards;
        for (unsigned t = 0; t < num_shards; ++t) {
            std::size_t lo = std::min<std::size_t>(t * chunk, num_windows);
            std::size_t hi = std::min<std::size_t>(lo + chunk, num_windows);
            workers.emplace_back(count_range, lo, hi, std::ref(partial[t]));
        }
        for (auto& w : workers) w.join();
        for (auto& p : partial) {
            for (const auto& [window, count] : p) merged[window] += count;
        }
    }
    return build_from_window_counts(n, std::move(vocab), merged, opts);
}

CountsModel CountsModel::from_sequences(const std::vector<std::vector<std::string>>& sequences, std::uint32_t n,
                                        const TokenizerOptions& opts) {
    if (n < 2) throw ValidationError("window length must be at least 2, got " + std::to_string(n));

    Vocabulary vocab;
    WindowCounts counts;
    IdSeq window;
    for (std::size_t i = 0; i < sequences.size(); ++i) {
        const auto& seq = sequences[i];
        if (seq.size() != n) {
            throw ValidationError("sequence " + std::to_string(i) + " has length " + std::to_string(seq.size()) +
                                  ", expected " + std::to_string(n));
        }
        window.clear();
        for (const auto& tok : seq) window.push_back(vocab.intern(normalized(tok, opts)));
        ++counts[window];
    }
    return build_from_window_counts(n, std::move(vocab), counts, opts);
}

CountsModel CountsModel::from_parts(std::uint32_t n, Vocabulary vocab, std::vector<WindowRecord> records,
                                    const TokenizerOptions& opts) {
    if (n < 2) throw ValidationError("window length must be at least 2, got " + std::to_string(n));
    for (const auto& rec : records) {
        if (rec.prefix.size() != n - 1) throw ValidationError("record prefix length does not match window length");
        if (rec.count == 0) throw ValidationError("record count must be positive");
        if (rec.suffix >= vocab.size()) throw ValidationError("record suffix id out of vocabulary range");
        for (TokenId id : rec.prefix) {
            if (id >= vocab.size()) throw ValidationError("record prefix id out of vocabulary range");
        }
    }
    CountsModel m;
    m.n_ = n;
    m.vocab_ = std::move(vocab);
    m.records_ = std::move(records);
    m.opts_ = opts;
    m.finalize();
    return m;
}

void CountsModel::finalize() {
    std::sort(records_.begin(), records_.end(), anchored_less);
    for (std::size_t i = 1; i < records_.size(); ++i) {
        if (records_[i].prefix == records_[i - 1].prefix && records_[i].suffix == records_[i - 1].suffix) {
            throw ValidationError("duplicate window record");
        }
    }
    cum_.assign(records_.size() + 1, 0);
    for (std::size_t i = 0; i < records_.size(); ++i) cum_[i + 1] = cum_[i] + records_[i].count;
    total_ = cum_.back();
}

Prob CountsModel::joint_prob(const IdSeq& prefix, TokenId suffix) const {
    if (prefix.size() != prefix_len()) {
        throw ValidationError("prefix length " + std::to_string(prefix.size()) + " does not match n-1 = " +
                              std::to_string(prefix_len()));
    }
    WindowRecord key{prefix, suffix, 1};
    auto it = std::lower_bound(records_.begin(), records_.end(), key, anchored_less);
    if (it != records_.end() && it->prefix == prefix && it->suffix == suffix) return {it->count, total_};
    return {0, total_};
}

void CountsModel::validate_phrase_len(const Phrase& s) const {
    if (s.empty() || s.size() > prefix_len()) {
        throw ValidationError("phrase length " + std::to_string(s.size()) + " out of range 1.." +
                              std::to_string(prefix_len()));
    }
}

Prob CountsModel::marginal_prob(const Phrase& s) const {
    validate_phrase_len(s);
    return {anchored_count(s), total_};
}

CountsModel::RecordRange CountsModel::anchored_range(const Phrase& s) const {
    if (s.size() > prefix_len()) return {0, 0};
    IdSeq rev(s.ids.rbegin(), s.ids.rend());
    auto lo = std::partition_point(records_.begin(), records_.end(),
                                   [&](const WindowRecord& r) { return cmp_reversed(r.prefix, rev) < 0; });
    auto hi = std::partition_point(lo, records_.end(),
                                   [&](const WindowRecord& r) { return cmp_reversed(r.prefix, rev) <= 0; });
    return {static_cast<std::size_t>(lo - records_.begin()), static_cast<std::size_t>(hi - records_.begin())};
}

std::uint64_t CountsModel::anchored_count(const Phrase& s) const {
    RecordRange r = anchored_range(s);
    return cum_[r.end] - cum_[r.begin];
}

std::vector<Phrase> CountsModel::observed_phrases() const {
    std::vector<Phrase> out;
    if (n_ < 2) return out;
    std::vector<Phrase> last(prefix_len() + 1);
    for (const auto& rec : records_) {
        for (std::uint32_t k = 1; k <= prefix_len(); ++k) {
            Phrase tail(IdSeq(rec.prefix.end() - k, rec.prefix.end()));
            if (last[k] != tail) {
                last[k] = tail;
                out.push_back(std::move(tail));
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const Phrase& a, const Phrase& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a.ids < b.ids;
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<TokenId> CountsModel::observed_suffixes() const {
    std::vector<bool> seen(vocab_.size(), false);
    for (const auto& rec : records_) seen[rec.suffix] = true;
    std::vector<TokenId> out;
    for (TokenId id = 0; id < seen.size(); ++id) {
        if (seen[id]) out.push_back(id);
    }
    return out;
}

Phrase CountsModel::parse_phrase(std::string_view text) const {
    Phrase s;
    for (const auto& tok : tokenize(text, opts_)) {
        auto id = vocab_.find(tok);
        if (!id) throw UnknownTokenError("token not in model vocabulary: " + tok);
        s.ids.push_back(*id);
    }
    return s;
}

std::string CountsModel::phrase_text(const Phrase& s) const {
    std::string out;
    for (std::size_t i = 0; i < s.ids.size(); ++i) {
        if (i) out += ' ';
        out += vocab_.token(s.ids[i]);
    }
    return out;
}

}  // namespace rdlm
