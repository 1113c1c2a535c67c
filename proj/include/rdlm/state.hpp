#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "rdlm/counts.hpp"
#include "rdlm/types.hpp"

namespace rdlm {

// Composite basis for the oracle's dense tensors. Each window site keeps only
// the ids that actually occur there (sorted ascending), with explicit
// id <-> position maps, so tiny corpora over large vocabularies stay cheap.
class OracleSpace {
  public:
    OracleSpace() = default;
    static OracleSpace from_model(const CountsModel& m);

    std::size_t num_sites() const { return bases_.size(); }
    const std::vector<TokenId>& site_basis(std::size_t site) const { return bases_[site]; }

    std::size_t dim() const { return dim_; }
    std::size_t prefix_dim() const;  // product over all sites but the last
    std::size_t suffix_dim() const { return bases_.back().size(); }

    // Row-major composite index of a fully specified window; throws
    // ValidationError when some id does not occur at its site.
    std::size_t index_of(const IdSeq& window) const;
    IdSeq window_at(std::size_t index) const;

    // Position of an id within one site's basis, or npos.
    std::size_t site_pos(std::size_t site, TokenId id) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    friend bool operator==(const OracleSpace&, const OracleSpace&) = default;

  private:
    std::vector<std::vector<TokenId>> bases_;
    std::vector<std::size_t> strides_;
    std::size_t dim_ = 0;
};

// Sparse unit vector with one amplitude per observed window.
struct StateVector {
    OracleSpace space;
    std::vector<IdSeq> windows;     // in model record order
    std::vector<double> amplitudes; // sqrt(count/total)

    double norm_squared() const;
};

// Dense rank-1 projector over the composite window space.
struct ProjectionOperator {
    OracleSpace space;
    Eigen::MatrixXd mat;
};

// Dense operator on the suffix site, with the sub-basis it is expressed in.
struct DenseSuffixOperator {
    std::vector<TokenId> basis;
    Eigen::MatrixXd mat;
};

// Dense operator on the composite prefix system.
struct DensePrefixOperator {
    std::vector<std::vector<TokenId>> site_bases;
    Eigen::MatrixXd mat;
};

struct OracleOptions {
    // Reject dense work when the composite dimension exceeds this (the dense
    // matrix then has max_dim^2 scalars).
    std::size_t max_dim = 10000;
};

StateVector build_psi(const CountsModel& m);

ProjectionOperator full_projection(const StateVector& psi, const OracleOptions& opts = {});

// Diagonal of a full-space density in the window basis, one entry per
// composite index.
std::vector<std::pair<IdSeq, double>> born_distribution(const ProjectionOperator& rho, const CountsModel& m);

// Literal partial traces of the dense projector.
DenseSuffixOperator partial_trace_prefix(const ProjectionOperator& p);
DensePrefixOperator partial_trace_suffix(const ProjectionOperator& p);

// Brute-force route to a phrase's reduced density: contract the anchored
// slots of psi with the phrase, form the dense projector onto the modified
// vector, then trace out the remaining prefix sites.
DenseSuffixOperator oracle_phrase_density(const StateVector& psi, const Phrase& s, const OracleOptions& opts = {});

}  // namespace rdlm
