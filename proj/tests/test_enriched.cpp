#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "helpers.hpp"
#include "rdlm/enriched.hpp"
#include "rdlm/verify.hpp"

using namespace rdlm;
using rdlm::testing::dog_model;
using rdlm::testing::mountain_model;
using rdlm::testing::random_model;

TEST_SUITE("enriched") {

TEST_CASE("phrase homs are conditional probabilities") {
    CountsModel dog = dog_model();
    Phrase d = dog.parse_phrase("dog");
    CHECK(hom_phrase(dog, d, dog.parse_phrase("black dog")).value == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(hom_phrase(dog, d, dog.parse_phrase("white dog")).value == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(hom_phrase(dog, d, dog.parse_phrase("black cat")).value == 0.0);
    CHECK(hom_phrase(dog, d, d).value == 1.0);
    // Unobserved source phrase is not an object; hom degenerates to 0.
    CHECK(hom_phrase(dog, dog.parse_phrase("barks"), dog.parse_phrase("black barks")).value == 0.0);
}

TEST_CASE("density homs are trace ratios") {
    CountsModel dog = dog_model();
    Phrase d = dog.parse_phrase("dog");
    CHECK(hom_density(dog, d, dog.parse_phrase("black dog")).value == doctest::Approx(2.0 / 3).epsilon(1e-12));
    CHECK(hom_density(dog, d, d).value == 1.0);
    CHECK(hom_density(dog, d, dog.parse_phrase("black cat")).value == 0.0);
    CHECK_THROWS_AS(hom_density(dog, dog.parse_phrase("barks"), dog.parse_phrase("black barks")),
                    UndefinedDensityError);
}

TEST_CASE("homs telescope along anchored chains") {
    CountsModel dog = dog_model();
    Phrase d = dog.parse_phrase("dog");
    Phrase bd = dog.parse_phrase("black dog");
    Phrase sbd = dog.parse_phrase("small black dog");
    double lhs = hom_phrase(dog, d, bd).value * hom_phrase(dog, bd, sbd).value;
    double rhs = hom_phrase(dog, d, sbd).value;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-15));
    CHECK(rhs == doctest::Approx(1.0 / 3).epsilon(1e-15));
}

TEST_CASE("identity homs are exactly 1 on every object") {
    std::mt19937_64 rng(66);
    std::vector<CountsModel> models;
    models.push_back(dog_model());
    for (int trial = 0; trial < 5; ++trial) models.push_back(random_model(rng));
    for (const CountsModel& m : models) {
        for (const Phrase& s : m.observed_phrases()) {
            CHECK(hom_phrase(m, s, s).value == 1.0);
            CHECK(hom_density(m, s, s).value == 1.0);
        }
    }
}

TEST_CASE("hom values stay within the unit interval") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 20; ++trial) {
        CountsModel m = random_model(rng);
        auto objects = m.observed_phrases();
        for (const Phrase& s : objects) {
            for (const Phrase& t : objects) {
                double hp = hom_phrase(m, s, t).value;
                double hd = hom_density(m, s, t).value;
                CHECK(hp >= 0.0);
                CHECK(hp <= 1.0);
                CHECK(hd >= 0.0);
                CHECK(hd <= 1.0 + 1e-12);
            }
        }
    }
}

TEST_CASE("category axioms hold exhaustively on the toy corpora") {
    CheckOptions opts;
    for (const CountsModel& m : {dog_model(), mountain_model()}) {
        for (HomSide side : {HomSide::Phrase, HomSide::Density}) {
            AxiomReport report = check_category_axioms(m, side, opts);
            CHECK(report.passed());
            CHECK(report.checked_triples > 0);
            CHECK(report.max_gap <= opts.slack);
        }
    }
}

TEST_CASE("functor condition holds with equality on comparable pairs") {
    CheckOptions opts;
    CountsModel dog = dog_model();
    AxiomReport report = check_functor(dog, opts);
    CHECK(report.passed());
    CHECK(report.checked_pairs == 11 * 11);
    CHECK(report.comparable_pairs > 0);
    CHECK(report.comparable_pairs == report.equal_pairs);
    CHECK(report.max_equality_gap <= 1e-12);

    AxiomReport mountain = check_functor(mountain_model(), opts);
    CHECK(mountain.passed());
    CHECK(mountain.comparable_pairs == mountain.equal_pairs);
}

TEST_CASE("sampled checks are deterministic for a fixed seed") {
    std::mt19937_64 rng(62);
    CountsModel m = random_model(rng);
    CheckOptions opts;
    opts.exhaustive = false;
    opts.seed = 99;
    opts.sample_pairs = 200;
    opts.sample_triples = 200;
    AxiomReport first = check_category_axioms(m, HomSide::Phrase, opts);
    AxiomReport second = check_category_axioms(m, HomSide::Phrase, opts);
    CHECK(first.summary(m) == second.summary(m));
    CHECK(check_functor(m, opts).summary(m) == check_functor(m, opts).summary(m));

    opts.num_workers = 3;  // partitioned run merges to the same report
    CHECK(check_category_axioms(m, HomSide::Phrase, opts).summary(m) == first.summary(m));
}

TEST_CASE("axiom reports format violations") {
    CountsModel dog = dog_model();
    AxiomReport report;
    report.checked_pairs = 3;
    report.violations.push_back({{dog.parse_phrase("dog"), dog.parse_phrase("black dog")}, 1.0, 0.5, 0.5});
    std::string text = report.summary(dog);
    CHECK(text.find("violations 1") != std::string::npos);
    CHECK(text.find("[dog | black dog]") != std::string::npos);
}

TEST_CASE("distance conversion") {
    CHECK(hom_to_distance({1.0}) == 0.0);
    CHECK(std::isinf(hom_to_distance({0.0})));
    CHECK(hom_to_distance({2.0 / 3}) == doctest::Approx(0.4054651081081644).epsilon(1e-15));

    std::mt19937_64 rng(63);
    auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int trial = 0; trial < 1000; ++trial) {
        double h1 = unit(), h2 = unit();
        if (h1 > h2) std::swap(h1, h2);
        CHECK(hom_to_distance({h1}) >= hom_to_distance({h2}));
    }
}

TEST_CASE("unit interval monoidal laws") {
    std::mt19937_64 rng(64);
    auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int trial = 0; trial < 2000; ++trial) {
        double p = unit(), q = unit(), r = unit(), p2 = unit(), q2 = unit();
        if (p > p2) std::swap(p, p2);
        if (q > q2) std::swap(q, q2);
        CHECK(p * q <= p2 * q2);          // monotone in both arguments
        CHECK(1.0 * p == p);              // unit
        CHECK(p * 1.0 == p);
        CHECK(p * q == q * p);            // commutative
        CHECK(std::abs((p * q) * r - p * (q * r)) <= 1e-15);
    }
}

TEST_CASE("verification suites pass on the toy corpora") {
    for (const CountsModel& m : {dog_model(), mountain_model()}) {
        VerifyOptions opts;
        opts.seed = 5;
        std::vector<SuiteResult> results = run_verification(m, opts);
        CHECK(all_passed(results));
        CHECK(results.size() == 12);
        // Report rendering is stable across runs with the same seed.
        CHECK(render_report(results) == render_report(run_verification(m, opts)));
    }
}

TEST_CASE("parallel and sequential verification agree") {
    CountsModel m = dog_model();
    VerifyOptions opts;
    opts.seed = 17;
    opts.parallel = true;
    std::string concurrent = render_report(run_verification(m, opts));
    opts.parallel = false;
    CHECK(concurrent == render_report(run_verification(m, opts)));
}

TEST_CASE("verification suites pass on random models") {
    std::mt19937_64 rng(65);
    VerifyOptions opts;
    opts.parallel = false;
    for (int trial = 0; trial < 6; ++trial) {
        CountsModel m = random_model(rng);
        CHECK(all_passed(run_verification(m, opts)));
    }
}

}  // TEST_SUITE
