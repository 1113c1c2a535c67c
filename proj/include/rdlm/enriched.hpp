#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rdlm/counts.hpp"
#include "rdlm/types.hpp"

namespace rdlm {

// Hom object of the unit-interval enriched structure; a number in [0, 1]
// composed by multiplication with unit 1.
struct HomValue {
    double value = 0.0;
};

// Conditional containment probability: marginal(t)/marginal(s) when t extends
// s on the left (anchored) and s is observed; 0 otherwise. Exact integer
// ratio.
HomValue hom_phrase(const CountsModel& m, const Phrase& s, const Phrase& t);

// Trace ratio of the unnormalized densities when t extends s; 0 otherwise.
// The traces are float accumulations, so agreement with hom_phrase is a
// numerical statement, not an identity of code paths.
HomValue hom_density(const CountsModel& m, const Phrase& s, const Phrase& t);

// -log(value); 0 maps to +infinity. Order-reversing into [0, inf].
double hom_to_distance(HomValue h);

enum class HomSide { Phrase, Density };

struct CheckOptions {
    bool exhaustive = true;
    std::uint64_t seed = 0;
    std::size_t sample_pairs = 2000;
    std::size_t sample_triples = 2000;
    double slack = 1e-12;
    std::size_t num_workers = 1;
};

struct Violation {
    std::vector<Phrase> objects;
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
};

struct AxiomReport {
    std::size_t checked_pairs = 0;
    std::size_t checked_triples = 0;
    std::vector<Violation> violations;
    double max_gap = 0.0;  // largest lhs - rhs seen (<= slack when passing)

    // Functor checks only: where both homs are defined and comparable.
    std::size_t comparable_pairs = 0;
    std::size_t equal_pairs = 0;
    double max_equality_gap = 0.0;

    bool passed() const { return violations.empty(); }
    std::string summary(const CountsModel& m, std::size_t max_violations = 5) const;
};

// Unit law (hom(s, s) >= 1) on every object and composition law
// (hom(s, t) * hom(t, u) <= hom(s, u)) on object triples. Exhaustive mode
// enumerates everything; sample mode draws seeded random triples plus
// anchored chains, which exercise the equality case.
AxiomReport check_category_axioms(const CountsModel& m, HomSide side, const CheckOptions& opts);

// Functor condition hom_phrase(s, t) <= hom_density(s, t) on object pairs,
// recording where equality holds.
AxiomReport check_functor(const CountsModel& m, const CheckOptions& opts);

}  // namespace rdlm
