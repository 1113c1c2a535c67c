#include "rdlm/state.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace rdlm {

OracleSpace OracleSpace::from_model(const CountsModel& m) {
    if (m.empty()) throw ValidationError("cannot build oracle space from an empty model");
    std::size_t sites = m.window_len();
    std::vector<std::set<TokenId>> occupied(sites);
    for (const auto& rec : m.records()) {
        for (std::size_t i = 0; i + 1 < sites; ++i) occupied[i].insert(rec.prefix[i]);
        occupied[sites - 1].insert(rec.suffix);
    }
    OracleSpace space;
    space.bases_.reserve(sites);
    for (const auto& ids : occupied) space.bases_.emplace_back(ids.begin(), ids.end());
    space.strides_.assign(sites, 1);
    for (std::size_t i = sites; i-- > 1;) space.strides_[i - 1] = space.strides_[i] * space.bases_[i].size();
    space.dim_ = space.strides_[0] * space.bases_[0].size();
    return space;
}

std::size_t OracleSpace::prefix_dim() const {
    std::size_t d = 1;
    for (std::size_t i = 0; i + 1 < bases_.size(); ++i) d *= bases_[i].size();
    return d;
}

std::size_t OracleSpace::site_pos(std::size_t site, TokenId id) const {
    const auto& basis = bases_[site];
    auto it = std::lower_bound(basis.begin(), basis.end(), id);
    if (it == basis.end() || *it != id) return npos;
    return static_cast<std::size_t>(it - basis.begin());
}

std::size_t OracleSpace::index_of(const IdSeq& window) const {
    if (window.size() != bases_.size()) throw ValidationError("window length does not match oracle space");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < window.size(); ++i) {
        std::size_t pos = site_pos(i, window[i]);
        if (pos == npos) throw ValidationError("window id does not occur at this site");
        idx += pos * strides_[i];
    }
    return idx;
}

IdSeq OracleSpace::window_at(std::size_t index) const {
    IdSeq window(bases_.size());
    for (std::size_t i = 0; i < bases_.size(); ++i) {
        window[i] = bases_[i][(index / strides_[i]) % bases_[i].size()];
    }
    return window;
}

double StateVector::norm_squared() const {
    KahanSum sum;
    for (double a : amplitudes) sum.add(a * a);
    return sum.value();
}

StateVector build_psi(const CountsModel& m) {
    if (m.empty() || m.total() == 0) throw ValidationError("cannot build state vector from an empty model");
    StateVector psi;
    psi.space = OracleSpace::from_model(m);
    psi.windows.reserve(m.records().size());
    psi.amplitudes.reserve(m.records().size());
    double total = static_cast<double>(m.total());
    for (const auto& rec : m.records()) {
        IdSeq window = rec.prefix;
        window.push_back(rec.suffix);
        psi.windows.push_back(std::move(window));
        psi.amplitudes.push_back(std::sqrt(static_cast<double>(rec.count) / total));
    }
    return psi;
}

ProjectionOperator full_projection(const StateVector& psi, const OracleOptions& opts) {
    std::size_t dim = psi.space.dim();
    if (dim > opts.max_dim) {
        throw ValidationError("oracle size guard exceeded: composite dimension " + std::to_string(dim) + " > " +
                              std::to_string(opts.max_dim));
    }
    Eigen::VectorXd dense = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < psi.windows.size(); ++i) {
        dense[static_cast<Eigen::Index>(psi.space.index_of(psi.windows[i]))] = psi.amplitudes[i];
    }
    ProjectionOperator p;
    p.space = psi.space;
    p.mat = dense * dense.transpose();
    return p;
}

std::vector<std::pair<IdSeq, double>> born_distribution(const ProjectionOperator& rho, const CountsModel& m) {
    if (rho.space != OracleSpace::from_model(m)) {
        throw ValidationError("operator space does not match the model's window basis");
    }
    std::vector<std::pair<IdSeq, double>> diag;
    diag.reserve(rho.space.dim());
    for (std::size_t i = 0; i < rho.space.dim(); ++i) {
        diag.emplace_back(rho.space.window_at(i), rho.mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)));
    }
    return diag;
}

DenseSuffixOperator partial_trace_prefix(const ProjectionOperator& p) {
    std::size_t pd = p.space.prefix_dim();
    std::size_t sd = p.space.suffix_dim();
    std::vector<KahanSum> acc(sd * sd);
    for (std::size_t pre = 0; pre < pd; ++pre) {
        std::size_t base = pre * sd;
        for (std::size_t a = 0; a < sd; ++a) {
            for (std::size_t b = 0; b < sd; ++b) {
                acc[a * sd + b].add(p.mat(static_cast<Eigen::Index>(base + a), static_cast<Eigen::Index>(base + b)));
            }
        }
    }
    DenseSuffixOperator out;
    out.basis = p.space.site_basis(p.space.num_sites() - 1);
    out.mat.resize(static_cast<Eigen::Index>(sd), static_cast<Eigen::Index>(sd));
    for (std::size_t a = 0; a < sd; ++a) {
        for (std::size_t b = 0; b < sd; ++b) {
            out.mat(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = acc[a * sd + b].value();
        }
    }
    return out;
}

DensePrefixOperator partial_trace_suffix(const ProjectionOperator& p) {
    std::size_t pd = p.space.prefix_dim();
    std::size_t sd = p.space.suffix_dim();
    std::vector<KahanSum> acc(pd * pd);
    for (std::size_t a = 0; a < sd; ++a) {
        for (std::size_t i = 0; i < pd; ++i) {
            for (std::size_t j = 0; j < pd; ++j) {
                acc[i * pd + j].add(
                    p.mat(static_cast<Eigen::Index>(i * sd + a), static_cast<Eigen::Index>(j * sd + a)));
            }
        }
    }
    DensePrefixOperator out;
    for (std::size_t site = 0; site + 1 < p.space.num_sites(); ++site) out.site_bases.push_back(p.space.site_basis(site));
    out.mat.resize(static_cast<Eigen::Index>(pd), static_cast<Eigen::Index>(pd));
    for (std::size_t i = 0; i < pd; ++i) {
        for (std::size_t j = 0; j < pd; ++j) {
            out.mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc[i * pd + j].value();
        }
    }
    return out;
}

DenseSuffixOperator oracle_phrase_density(const StateVector& psi, const Phrase& s, const OracleOptions& opts) {
    std::size_t sites = psi.space.num_sites();
    if (s.empty() || s.size() > sites - 1) {
        throw ValidationError("phrase length " + std::to_string(s.size()) + " out of range 1.." +
                              std::to_string(sites - 1));
    }
    std::size_t free_sites = sites - 1 - s.size();

    // Composite space over the free prefix sites followed by the suffix site.
    std::size_t free_dim = 1;
    for (std::size_t i = 0; i < free_sites; ++i) free_dim *= psi.space.site_basis(i).size();
    std::size_t sd = psi.space.suffix_dim();
    std::size_t dim = free_dim * sd;
    if (dim > opts.max_dim) {
        throw ValidationError("oracle size guard exceeded: composite dimension " + std::to_string(dim) + " > " +
                              std::to_string(opts.max_dim));
    }

    // Contract the anchored slots with the phrase.
    Eigen::VectorXd contracted = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
    for (std::size_t w = 0; w < psi.windows.size(); ++w) {
        const IdSeq& window = psi.windows[w];
        bool match = true;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (window[free_sites + i] != s.ids[i]) {
                match = false;
                break;
            }
        }
        if (!match) continue;
        std::size_t idx = 0;
        for (std::size_t i = 0; i < free_sites; ++i) {
            idx = idx * psi.space.site_basis(i).size() + psi.space.site_pos(i, window[i]);
        }
        idx = idx * sd + psi.space.site_pos(sites - 1, window.back());
        contracted[static_cast<Eigen::Index>(idx)] = psi.amplitudes[w];
    }

    // Projector onto the modified vector, then trace out the free sites.
    Eigen::MatrixXd proj = contracted * contracted.transpose();
    std::vector<KahanSum> acc(sd * sd);
    for (std::size_t f = 0; f < free_dim; ++f) {
        std::size_t base = f * sd;
        for (std::size_t a = 0; a < sd; ++a) {
            for (std::size_t b = 0; b < sd; ++b) {
                acc[a * sd + b].add(proj(static_cast<Eigen::Index>(base + a), static_cast<Eigen::Index>(base + b)));
            }
        }
    }
    DenseSuffixOperator out;
    out.basis = psi.space.site_basis(sites - 1);
    out.mat.resize(static_cast<Eigen::Index>(sd), static_cast<Eigen::Index>(sd));
    for (std::size_t a = 0; a < sd; ++a) {
        for (std::size_t b = 0; b < sd; ++b) {
            out.mat(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = acc[a * sd + b].value();
        }
    }
    return out;
}

}  // namespace rdlm
