#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rdlm/density.hpp"
#include "rdlm/types.hpp"

namespace rdlm {

// Outcome of a preorder query. Containment verdicts carry the match offset as
// witness when related; Loewner verdicts carry the most negative eigenvalue
// when not.
struct OrderVerdict {
    bool related = false;
    std::optional<std::size_t> offset;          // containment: start of s inside t
    std::optional<double> min_eigenvalue;       // Loewner failure witness
    double tolerance_used = 0.0;

    // Structured text report {related, witness, tolerance_used}.
    std::string to_record() const;
};

// True iff t ends with s (right-anchored extension).
OrderVerdict phrase_leq_anchored(const Phrase& s, const Phrase& t);

// True iff s occurs as a contiguous block anywhere inside t.
OrderVerdict phrase_leq_general(const Phrase& s, const Phrase& t);

// A >= B in the Loewner sense: A - B is PSD over the union support.
OrderVerdict loewner_geq(const DensityOperator& a, const DensityOperator& b, double tol = 1e-9);

struct ScaledOrderVerdict {
    OrderVerdict verdict;
    double weight = 0.0;  // the conditional probability applied to t's density
};

// Checks the weighted inequality: normalized density of s dominates
// weight * normalized density of t, where weight is the conditional
// probability of t given s. Requires s anchored-below t with positive
// marginals.
ScaledOrderVerdict loewner_geq_scaled(const Phrase& s, const Phrase& t, const CountsModel& m, double tol = 1e-9);

// All observed anchored extensions of s up to max_len, including s itself
// when observed. Empty for unseen phrases.
std::vector<Phrase> upper_closure(const CountsModel& m, const Phrase& s, std::uint32_t max_len);

// True iff the diagonal support of a is contained in the diagonal support of
// b; holds whenever b dominates a in the Loewner order.
bool suffix_support_subset(const DensityOperator& a, const DensityOperator& b, double support_tol = 1e-12);

}  // namespace rdlm
