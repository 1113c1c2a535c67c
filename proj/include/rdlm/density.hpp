#pragma once

#include <Eigen/Dense>
#include <map>
#include <span>
#include <vector>

#include "rdlm/counts.hpp"
#include "rdlm/state.hpp"
#include "rdlm/types.hpp"

namespace rdlm {

// Sparse real symmetric PSD operator on the suffix space, indexed by suffix
// ids. Only the upper triangle (a <= b) is stored; exact zeros are dropped.
class DensityOperator {
  public:
    using Key = std::pair<TokenId, TokenId>;

    DensityOperator() = default;
    static DensityOperator zero(std::uint32_t dim, bool normalized = false);

    std::uint32_t dim() const { return dim_; }
    double trace() const { return trace_; }
    bool normalized() const { return normalized_; }
    const std::map<Key, double>& upper_entries() const { return upper_; }
    bool is_zero() const { return upper_.empty(); }

    double entry(TokenId a, TokenId b) const;

    // Ids touched by any stored entry, ascending.
    std::vector<TokenId> support() const;

    // Ids with a positive diagonal (above tol); the suffix-continuation set.
    std::vector<TokenId> diagonal_support(double tol = 1e-12) const;

    Eigen::MatrixXd dense(std::span<const TokenId> basis) const;

    DensityOperator scaled(double factor, bool normalized) const;

    friend bool operator==(const DensityOperator&, const DensityOperator&) = default;

  private:
    friend class DensityBuilder;
    std::uint32_t dim_ = 0;
    std::map<Key, double> upper_;
    double trace_ = 0.0;
    bool normalized_ = false;
};

// Accumulates entries with compensated summation, then freezes.
class DensityBuilder {
  public:
    explicit DensityBuilder(std::uint32_t dim) : dim_(dim) {}

    void add(TokenId a, TokenId b, double value);

    // this += weight * rho
    void accumulate(double weight, const DensityOperator& rho);

    DensityOperator finish(bool normalized) const;

  private:
    std::uint32_t dim_ = 0;
    std::map<DensityOperator::Key, KahanSum> acc_;
};

double max_abs_diff(const DensityOperator& a, const DensityOperator& b);
double max_abs_diff(const DensityOperator& a, const DenseSuffixOperator& b);

// Re-indexes a dense oracle result into the sparse operator type, e.g. to
// export it in the matrix text format.
DensityOperator to_density_operator(const DenseSuffixOperator& dense, std::uint32_t dim, bool normalized);

// Eigenvalues of the dense support submatrix, ascending. Zero operator -> {}.
std::vector<double> support_spectrum(const DensityOperator& rho);

struct PsdCheck {
    bool psd = true;
    double min_eigenvalue = 0.0;
    double max_abs_eigenvalue = 0.0;
    double tolerance = 0.0;  // the threshold actually applied
};

// PSD within tolerance: min support eigenvalue >= -tol * max(1, |lambda|_max).
PsdCheck check_psd(const DensityOperator& rho, double tol = 1e-9);

int numerical_rank(const DensityOperator& rho, double tol = 1e-9);

// Probability map over suffix ids.
struct SuffixDistribution {
    std::map<TokenId, double> probs;

    double sum() const;
};

// Export format: header {dim, trace, normalized}, then "i j value" records
// for the upper triangle in row-major id order.
void write_matrix(std::ostream& out, const DensityOperator& rho);

// --- construction from counts (the fast path) ------------------------------

// Suffix-space reduced density of the whole model; unit trace.
DensityOperator reduced_density_suffix(const CountsModel& m);

// Unnormalized reduced density for a right-anchored phrase. Entry (a, b)
// accumulates sqrt(c_a * c_b) / total within each free-prefix group; the
// trace equals the phrase marginal. Zero-marginal phrases give the zero
// operator.
DensityOperator phrase_density(const CountsModel& m, const Phrase& s);

// Trace of phrase_density without building the matrix.
double phrase_density_trace(const CountsModel& m, const Phrase& s);

// phrase_density / marginal; throws UndefinedDensityError on zero marginal.
DensityOperator phrase_density_normalized(const CountsModel& m, const Phrase& s);

// Exact conditional continuation distribution; diagonal of the normalized
// density.
SuffixDistribution conditional_suffix_distribution(const CountsModel& m, const Phrase& s);

// One-step sum decomposition: extender id -> unnormalized density of the
// extended phrase. The values sum to phrase_density(m, s) entrywise.
std::map<TokenId, DensityOperator> decompose_one_step(const CountsModel& m, const Phrase& s);

struct WeightedTerm {
    double weight = 0.0;
    DensityOperator density;
};

// Depth-step weighted decomposition into normalized densities of extensions,
// weighted by conditional probabilities. Weights sum to 1 and the weighted
// sum reconstructs the normalized density of s.
std::map<Phrase, WeightedTerm> decompose_weighted(const CountsModel& m, const Phrase& s, std::uint32_t depth);

// Column y of rho: the image of the basis vector for y.
std::vector<double> ambiance_vector(const DensityOperator& rho, TokenId y);

// True iff the two suffixes occur with identical counts after every prefix.
bool same_suffix_environment(const CountsModel& m, TokenId y_c, TokenId y_d);

// Prefix-side analogue: identical suffix counts after the two full prefixes.
bool same_prefix_environment(const CountsModel& m, const IdSeq& p_c, const IdSeq& p_d);

// Overlap sum(sqrt(p*q)) of two distributions over the same index set; both
// must sum to 1.
double bhattacharyya(const SuffixDistribution& p, const SuffixDistribution& q);
double hellinger(const SuffixDistribution& p, const SuffixDistribution& q);

struct OffdiagReport {
    std::size_t pairs_checked = 0;
    double max_abs_deviation = 0.0;
};

// Checks entry (a,b) of the suffix reduced density against
// sqrt(marginal_a * marginal_b) * bhattacharyya of the prefix conditionals,
// with the prefix flattened to one composite site.
OffdiagReport offdiag_identity_check(const CountsModel& m);

}  // namespace rdlm
