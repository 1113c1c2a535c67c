#include <doctest.h>

#include <random>
#include <sstream>

#include "helpers.hpp"
#include "rdlm/model_io.hpp"

using namespace rdlm;
using rdlm::testing::dog_model;
using rdlm::testing::random_model;

namespace {

// Independent route to the anchored count: scan every record and compare the
// prefix tail by hand.
std::uint64_t brute_anchored_count(const CountsModel& m, const Phrase& s) {
    std::uint64_t count = 0;
    for (const auto& rec : m.records()) {
        if (s.size() > rec.prefix.size()) continue;
        if (std::equal(s.ids.begin(), s.ids.end(), rec.prefix.end() - s.size())) count += rec.count;
    }
    return count;
}

}  // namespace

TEST_SUITE("corpus") {

TEST_CASE("tokenize splits on whitespace") {
    CHECK(tokenize("Small black DOG barks", {.lowercase = true}) ==
          std::vector<std::string>{"small", "black", "dog", "barks"});
    CHECK(tokenize("Small DOG").size() == 2);
    CHECK(tokenize("Small DOG")[1] == "DOG");
    CHECK(tokenize("").empty());
    CHECK(tokenize("a  b") == std::vector<std::string>{"a", "b"});
    CHECK(tokenize(" \t\n ").empty());
}

TEST_CASE("build from sequences: toy corpus") {
    CountsModel m = dog_model();
    CHECK(m.total() == 5);
    CHECK(m.records().size() == 5);
    for (const auto& rec : m.records()) CHECK(rec.count == 1);
    CHECK(m.vocab().size() == 8);
    // First-occurrence ids are stable.
    CHECK(m.vocab().find("small") == TokenId{0});
    CHECK(m.vocab().find("black") == TokenId{1});
    CHECK(m.vocab().find("dog") == TokenId{2});
    CHECK(m.vocab().find("barks") == TokenId{3});
    CHECK(m.vocab().find("runs") == TokenId{6});
    CHECK(m.vocab().find("cat") == TokenId{7});
}

TEST_CASE("build from token stream: sliding windows") {
    std::vector<std::string> stream = {"a", "b", "a", "b", "a"};
    CountsModel m = CountsModel::from_tokens(stream, 2);
    CHECK(m.total() == 4);
    CHECK(m.records().size() == 2);
    TokenId a = *m.vocab().find("a");
    TokenId b = *m.vocab().find("b");
    CHECK(m.joint_prob({a}, b) == Prob{2, 4});
    CHECK(m.joint_prob({b}, a) == Prob{2, 4});
}

TEST_CASE("single sequence list gives one window") {
    CountsModel m = CountsModel::from_sequences({{"x", "y"}}, 2);
    CHECK(m.total() == 1);
}

TEST_CASE("stream shorter than the window yields an empty model") {
    std::vector<std::string> stream = {"a"};
    CountsModel m = CountsModel::from_tokens(stream, 3);
    CHECK(m.total() == 0);
    CHECK(m.empty());
}

TEST_CASE("build rejects bad arguments") {
    CHECK_THROWS_AS(CountsModel::from_sequences({{"x", "y"}}, 1), ValidationError);
    CHECK_THROWS_AS(CountsModel::from_tokens(std::vector<std::string>{"x"}, 0), ValidationError);
    CHECK_THROWS_AS(CountsModel::from_sequences({{"x", "y", "z"}}, 2), ValidationError);
}

TEST_CASE("sharded ingestion matches sequential") {
    std::mt19937_64 rng(11);
    std::vector<std::string> stream;
    for (int i = 0; i < 5000; ++i) stream.push_back("t" + std::to_string(rng() % 12));
    CountsModel sequential = CountsModel::from_tokens(stream, 3);
    for (unsigned shards : {2u, 3u, 7u}) {
        CountsModel sharded = CountsModel::from_tokens(stream, 3, {}, shards);
        CHECK(sharded == sequential);
    }
}

TEST_CASE("joint probabilities") {
    CountsModel m = dog_model();
    IdSeq small_black_dog = m.parse_phrase("small black dog").ids;
    CHECK(m.joint_prob(small_black_dog, *m.vocab().find("barks")) == Prob{1, 5});
    IdSeq big_black_cat = {*m.vocab().find("big"), *m.vocab().find("black"), *m.vocab().find("cat")};
    CHECK(m.joint_prob(big_black_cat, *m.vocab().find("runs")) == Prob{0, 5});
    CHECK_THROWS_AS(m.joint_prob({0, 1}, 3), ValidationError);

    std::uint64_t sum = 0;
    for (const auto& rec : m.records()) sum += m.joint_prob(rec.prefix, rec.suffix).count;
    CHECK(sum == m.total());  // window probabilities sum to exactly 1
}

TEST_CASE("marginal probabilities") {
    CountsModel m = dog_model();
    CHECK(m.marginal_prob(m.parse_phrase("dog")) == Prob{3, 5});
    CHECK(m.marginal_prob(m.parse_phrase("black dog")) == Prob{2, 5});
    CHECK(m.marginal_prob(m.parse_phrase("barks")) == Prob{0, 5});  // never left of a suffix
    CHECK_THROWS_AS(m.marginal_prob(Phrase{}), ValidationError);
    CHECK_THROWS_AS(m.marginal_prob(Phrase{0, 1, 2, 3}), ValidationError);
}

TEST_CASE("anchored counts match a record scan") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 40; ++trial) {
        CountsModel m = random_model(rng);
        if (m.empty()) continue;
        for (const Phrase& s : m.observed_phrases()) {
            CHECK(m.anchored_count(s) == brute_anchored_count(m, s));
            CHECK(m.anchored_count(s) > 0);
        }
        // Unseen tails must report zero.
        Phrase bogus{static_cast<TokenId>(m.vocab().size() - 1)};
        CHECK(m.anchored_count(bogus) == brute_anchored_count(m, bogus));
    }
}

TEST_CASE("marginal consistency across lengths") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 25; ++trial) {
        CountsModel m = random_model(rng);
        for (const Phrase& s : m.observed_phrases()) {
            if (s.size() >= m.prefix_len()) continue;
            std::uint64_t sum = 0;
            for (TokenId x = 0; x < m.vocab().size(); ++x) {
                Phrase extended;
                extended.ids.push_back(x);
                extended.ids.insert(extended.ids.end(), s.ids.begin(), s.ids.end());
                sum += m.anchored_count(extended);
            }
            CHECK(sum == m.anchored_count(s));
        }
    }
}

TEST_CASE("observed phrases are the distinct anchored tails") {
    CountsModel m = dog_model();
    auto phrases = m.observed_phrases();
    CHECK(phrases.size() == 11);  // 2 words + 4 bigrams + 5 full prefixes
    CHECK(std::count_if(phrases.begin(), phrases.end(), [](const Phrase& p) { return p.size() == 1; }) == 2);
    for (const Phrase& p : phrases) CHECK(m.anchored_count(p) > 0);
}

TEST_CASE("model round trip") {
    CountsModel m = dog_model();
    std::stringstream buf;
    save_model(m, buf);
    CountsModel loaded = load_model(buf);
    CHECK(loaded == m);
    CHECK(loaded.vocab().tokens() == m.vocab().tokens());

    std::stringstream again;
    save_model(loaded, again);
    std::stringstream original;
    save_model(m, original);
    CHECK(again.str() == original.str());  // byte-identical re-serialization
}

TEST_CASE("load rejects malformed input") {
    CountsModel m = dog_model();
    std::stringstream buf;
    save_model(m, buf);
    std::string text = buf.str();

    SUBCASE("truncated file") {
        std::istringstream in(text.substr(0, text.size() / 2));
        CHECK_THROWS_AS(load_model(in), FormatError);
    }
    SUBCASE("bad magic") {
        std::istringstream in("not-a-model 1\n");
        CHECK_THROWS_AS(load_model(in), FormatError);
    }
    SUBCASE("window length below 2") {
        std::istringstream in("rdlm-model 1\nn 1\nlowercase 0\ntotal 1\nvocab 1\na\ncounts 1\n0 1\n");
        CHECK_THROWS_AS(load_model(in), ValidationError);
    }
    SUBCASE("total mismatch") {
        std::string bad = text;
        auto pos = bad.find("total 5");
        bad.replace(pos, 7, "total 6");
        std::istringstream in(bad);
        CHECK_THROWS_AS(load_model(in), FormatError);
    }
    SUBCASE("unsupported version") {
        std::istringstream in("rdlm-model 9\n");
        CHECK_THROWS_AS(load_model(in), FormatError);
    }
}

TEST_CASE("every truncation of a model file fails cleanly") {
    std::stringstream buf;
    save_model(dog_model(), buf);
    std::string text = buf.str();
    // Dropping only the final newline leaves a complete model, so stop short.
    for (std::size_t len = 0; len + 1 < text.size(); ++len) {
        std::istringstream in(text.substr(0, len));
        CHECK_THROWS_AS(load_model(in), Error);
    }
}

TEST_CASE("lowercase option is recorded and applied at query time") {
    CountsModel m = CountsModel::from_sequences({{"Big", "Mountain"}}, 2, {.lowercase = true});
    CHECK(m.vocab().find("big").has_value());
    CHECK(m.parse_phrase("BIG").ids == IdSeq{0});
    std::stringstream buf;
    save_model(m, buf);
    CountsModel loaded = load_model(buf);
    CHECK(loaded.tokenizer_options().lowercase);
    CHECK(loaded.parse_phrase("Big").ids == IdSeq{0});
}

TEST_CASE("unknown token raises") {
    CountsModel m = dog_model();
    CHECK_THROWS_AS(m.parse_phrase("unicorn"), UnknownTokenError);
}

}  // TEST_SUITE
