#include "rdlm/density.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace rdlm {

namespace {

// Calls fn(first, last) for each maximal run of records in [range.begin,
// range.end) sharing the same first free_len prefix ids. Records inside a run
// share the whole prefix when free_len spans it, and are suffix-sorted.
template <typename Fn>
void for_each_free_prefix_group(const std::vector<WindowRecord>& records, CountsModel::RecordRange range,
                                std::size_t free_len, Fn&& fn) {
    std::size_t i = range.begin;
    while (i < range.end) {
        std::size_t j = i + 1;
        while (j < range.end &&
               std::equal(records[j].prefix.begin(), records[j].prefix.begin() + free_len, records[i].prefix.begin())) {
            ++j;
        }
        fn(i, j);
        i = j;
    }
}

DensityOperator density_from_range(const CountsModel& m, CountsModel::RecordRange range, std::size_t free_len,
                                   bool normalized) {
    const auto& records = m.records();
    double total = static_cast<double>(m.total());
    DensityBuilder builder(static_cast<std::uint32_t>(m.vocab().size()));
    for_each_free_prefix_group(records, range, free_len, [&](std::size_t first, std::size_t last) {
        for (std::size_t i = first; i < last; ++i) {
            for (std::size_t j = i; j < last; ++j) {
                double value =
                    std::sqrt(static_cast<double>(records[i].count) * static_cast<double>(records[j].count)) / total;
                builder.add(records[i].suffix, records[j].suffix, value);
            }
        }
    });
    return builder.finish(normalized);
}

void validate_distribution(const SuffixDistribution& d, const char* which) {
    double sum = 0.0;
    for (const auto& [id, p] : d.probs) {
        if (p < -1e-15) throw ValidationError(std::string(which) + " distribution has a negative probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw ValidationError(std::string(which) + " distribution does not sum to 1 (got " + format_double(sum) + ")");
    }
}

}  // namespace

DensityOperator DensityOperator::zero(std::uint32_t dim, bool normalized) {
    DensityOperator rho;
    rho.dim_ = dim;
    rho.normalized_ = normalized;
    return rho;
}

double DensityOperator::entry(TokenId a, TokenId b) const {
    if (a > b) std::swap(a, b);
    auto it = upper_.find({a, b});
    return it == upper_.end() ? 0.0 : it->second;
}

std::vector<TokenId> DensityOperator::support() const {
    std::vector<bool> seen(dim_, false);
    for (const auto& [key, value] : upper_) {
        if (value != 0.0) {
            seen[key.first] = true;
            seen[key.second] = true;
        }
    }
    std::vector<TokenId> out;
    for (TokenId id = 0; id < dim_; ++id) {
        if (seen[id]) out.push_back(id);
    }
    return out;
}

std::vector<TokenId> DensityOperator::diagonal_support(double tol) const {
    std::vector<TokenId> out;
    for (const auto& [key, value] : upper_) {
        if (key.first == key.second && value > tol) out.push_back(key.first);
    }
    return out;
}

Eigen::MatrixXd DensityOperator::dense(std::span<const TokenId> basis) const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(basis.size()),
                                                static_cast<Eigen::Index>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = i; j < basis.size(); ++j) {
            double v = entry(basis[i], basis[j]);
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            out(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
        }
    }
    return out;
}

DensityOperator DensityOperator::scaled(double factor, bool normalized) const {
    DensityOperator out;
    out.dim_ = dim_;
    out.normalized_ = normalized;
    out.trace_ = trace_ * factor;
    for (const auto& [key, value] : upper_) {
        double v = value * factor;
        if (v != 0.0) out.upper_.emplace(key, v);
    }
    return out;
}

void DensityBuilder::add(TokenId a, TokenId b, double value) {
    if (a >= dim_ || b >= dim_) throw ValidationError("density entry id out of range");
    if (a > b) std::swap(a, b);
    acc_[{a, b}].add(value);
}

void DensityBuilder::accumulate(double weight, const DensityOperator& rho) {
    if (rho.dim() != dim_) throw ValidationError("density dimension mismatch");
    for (const auto& [key, value] : rho.upper_entries()) acc_[key].add(weight * value);
}

DensityOperator DensityBuilder::finish(bool normalized) const {
    DensityOperator rho;
    rho.dim_ = dim_;
    rho.normalized_ = normalized;
    KahanSum trace;
    for (const auto& [key, sum] : acc_) {
        double v = sum.value();
        if (v == 0.0) continue;
        rho.upper_.emplace(key, v);
        if (key.first == key.second) trace.add(v);
    }
    rho.trace_ = trace.value();
    return rho;
}

double max_abs_diff(const DensityOperator& a, const DensityOperator& b) {
    double diff = 0.0;
    for (const auto& [key, value] : a.upper_entries()) diff = std::max(diff, std::abs(value - b.entry(key.first, key.second)));
    for (const auto& [key, value] : b.upper_entries()) diff = std::max(diff, std::abs(value - a.entry(key.first, key.second)));
    return diff;
}

double max_abs_diff(const DensityOperator& a, const DenseSuffixOperator& b) {
    double diff = 0.0;
    for (std::size_t i = 0; i < b.basis.size(); ++i) {
        for (std::size_t j = i; j < b.basis.size(); ++j) {
            diff = std::max(diff, std::abs(a.entry(b.basis[i], b.basis[j]) -
                                           b.mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
        }
    }
    // Entries outside the dense basis have no counterpart and compare to 0.
    for (const auto& [key, value] : a.upper_entries()) {
        bool in_basis = std::binary_search(b.basis.begin(), b.basis.end(), key.first) &&
                        std::binary_search(b.basis.begin(), b.basis.end(), key.second);
        if (!in_basis) diff = std::max(diff, std::abs(value));
    }
    return diff;
}

DensityOperator to_density_operator(const DenseSuffixOperator& dense, std::uint32_t dim, bool normalized) {
    DensityBuilder builder(dim);
    for (std::size_t i = 0; i < dense.basis.size(); ++i) {
        for (std::size_t j = i; j < dense.basis.size(); ++j) {
            double v = dense.mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (v != 0.0) builder.add(dense.basis[i], dense.basis[j], v);
        }
    }
    return builder.finish(normalized);
}

std::vector<double> support_spectrum(const DensityOperator& rho) {
    std::vector<TokenId> basis = rho.support();
    if (basis.empty()) return {};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(rho.dense(basis), Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    return std::vector<double>(ev.data(), ev.data() + ev.size());
}

PsdCheck check_psd(const DensityOperator& rho, double tol) {
    std::vector<double> spectrum = support_spectrum(rho);
    PsdCheck out;
    if (spectrum.empty()) {
        out.tolerance = tol;
        return out;
    }
    out.min_eigenvalue = spectrum.front();
    out.max_abs_eigenvalue = std::max(std::abs(spectrum.front()), std::abs(spectrum.back()));
    out.tolerance = tol * std::max(1.0, out.max_abs_eigenvalue);
    out.psd = out.min_eigenvalue >= -out.tolerance;
    return out;
}

int numerical_rank(const DensityOperator& rho, double tol) {
    std::vector<double> spectrum = support_spectrum(rho);
    if (spectrum.empty() || spectrum.back() <= 0.0) return 0;
    double threshold = tol * spectrum.back();
    int rank = 0;
    for (double ev : spectrum) {
        if (ev > threshold) ++rank;
    }
    return rank;
}

double SuffixDistribution::sum() const {
    KahanSum s;
    for (const auto& [id, p] : probs) s.add(p);
    return s.value();
}

void write_matrix(std::ostream& out, const DensityOperator& rho) {
    out << "dim " << rho.dim() << '\n';
    out << "trace " << format_double(rho.trace()) << '\n';
    out << "normalized " << (rho.normalized() ? 1 : 0) << '\n';
    out << "entries " << rho.upper_entries().size() << '\n';
    for (const auto& [key, value] : rho.upper_entries()) {
        out << key.first << ' ' << key.second << ' ' << format_double(value) << '\n';
    }
}

DensityOperator reduced_density_suffix(const CountsModel& m) {
    if (m.empty()) throw ValidationError("cannot build a reduced density from an empty model");
    CountsModel::RecordRange all{0, m.records().size()};
    return density_from_range(m, all, m.prefix_len(), /*normalized=*/true);
}

DensityOperator phrase_density(const CountsModel& m, const Phrase& s) {
    if (m.empty()) throw ValidationError("cannot build a reduced density from an empty model");
    m.marginal_prob(s);  // validates the phrase length
    CountsModel::RecordRange range = m.anchored_range(s);
    return density_from_range(m, range, m.prefix_len() - s.size(), /*normalized=*/false);
}

double phrase_density_trace(const CountsModel& m, const Phrase& s) {
    m.marginal_prob(s);
    CountsModel::RecordRange range = m.anchored_range(s);
    double total = static_cast<double>(m.total());
    KahanSum trace;
    for (std::size_t i = range.begin; i < range.end; ++i) {
        trace.add(static_cast<double>(m.records()[i].count) / total);
    }
    return trace.value();
}

DensityOperator phrase_density_normalized(const CountsModel& m, const Phrase& s) {
    Prob marginal = m.marginal_prob(s);
    if (marginal.count == 0) {
        throw UndefinedDensityError("normalized density undefined: phrase has zero marginal");
    }
    return phrase_density(m, s).scaled(1.0 / marginal.value(), /*normalized=*/true);
}

SuffixDistribution conditional_suffix_distribution(const CountsModel& m, const Phrase& s) {
    Prob marginal = m.marginal_prob(s);
    if (marginal.count == 0) {
        throw UndefinedDensityError("conditional distribution undefined: phrase has zero marginal");
    }
    CountsModel::RecordRange range = m.anchored_range(s);
    std::map<TokenId, std::uint64_t> counts;
    for (std::size_t i = range.begin; i < range.end; ++i) {
        counts[m.records()[i].suffix] += m.records()[i].count;
    }
    SuffixDistribution out;
    for (const auto& [id, c] : counts) {
        out.probs[id] = static_cast<double>(c) / static_cast<double>(marginal.count);
    }
    return out;
}

std::map<TokenId, DensityOperator> decompose_one_step(const CountsModel& m, const Phrase& s) {
    m.marginal_prob(s);
    if (s.size() >= m.prefix_len()) {
        throw ValidationError("phrase already has maximal length; no extenders exist");
    }
    CountsModel::RecordRange range = m.anchored_range(s);
    std::size_t extender_slot = m.prefix_len() - s.size() - 1;
    std::map<TokenId, DensityOperator> out;
    for (std::size_t i = range.begin; i < range.end; ++i) {
        TokenId x = m.records()[i].prefix[extender_slot];
        if (out.contains(x)) continue;
        Phrase extended;
        extended.ids.reserve(s.size() + 1);
        extended.ids.push_back(x);
        extended.ids.insert(extended.ids.end(), s.ids.begin(), s.ids.end());
        out.emplace(x, phrase_density(m, extended));
    }
    return out;
}

std::map<Phrase, WeightedTerm> decompose_weighted(const CountsModel& m, const Phrase& s, std::uint32_t depth) {
    Prob marginal = m.marginal_prob(s);
    if (marginal.count == 0) {
        throw UndefinedDensityError("weighted decomposition undefined: phrase has zero marginal");
    }
    if (s.size() + depth > m.prefix_len()) {
        throw ValidationError("decomposition depth exceeds the available prefix length");
    }
    std::map<Phrase, WeightedTerm> out;
    if (depth == 0) {
        out.emplace(s, WeightedTerm{1.0, phrase_density_normalized(m, s)});
        return out;
    }
    CountsModel::RecordRange range = m.anchored_range(s);
    std::size_t ext_len = s.size() + depth;
    for (std::size_t i = range.begin; i < range.end; ++i) {
        const IdSeq& prefix = m.records()[i].prefix;
        Phrase extended(IdSeq(prefix.end() - ext_len, prefix.end()));
        if (out.contains(extended)) continue;
        double weight = static_cast<double>(m.anchored_count(extended)) / static_cast<double>(marginal.count);
        DensityOperator rho = phrase_density_normalized(m, extended);
        out.emplace(std::move(extended), WeightedTerm{weight, std::move(rho)});
    }
    return out;
}

std::vector<double> ambiance_vector(const DensityOperator& rho, TokenId y) {
    if (y >= rho.dim()) throw ValidationError("suffix id out of range: " + std::to_string(y));
    std::vector<double> column(rho.dim(), 0.0);
    for (const auto& [key, value] : rho.upper_entries()) {
        if (key.second == y) column[key.first] = value;
        if (key.first == y) column[key.second] = value;
    }
    return column;
}

bool same_suffix_environment(const CountsModel& m, TokenId y_c, TokenId y_d) {
    if (y_c >= m.vocab().size() || y_d >= m.vocab().size()) throw ValidationError("suffix id out of range");
    if (y_c == y_d) return true;
    for (const auto& rec : m.records()) {
        if (rec.suffix == y_c && m.joint_prob(rec.prefix, y_d).count != rec.count) return false;
        if (rec.suffix == y_d && m.joint_prob(rec.prefix, y_c).count != rec.count) return false;
    }
    return true;
}

bool same_prefix_environment(const CountsModel& m, const IdSeq& p_c, const IdSeq& p_d) {
    if (p_c.size() != m.prefix_len() || p_d.size() != m.prefix_len()) {
        throw ValidationError("prefix length does not match n-1");
    }
    if (p_c == p_d) return true;
    CountsModel::RecordRange rc = m.anchored_range(Phrase(p_c));
    CountsModel::RecordRange rd = m.anchored_range(Phrase(p_d));
    if (rc.end - rc.begin != rd.end - rd.begin) return false;
    for (std::size_t i = 0; i < rc.end - rc.begin; ++i) {
        const WindowRecord& a = m.records()[rc.begin + i];
        const WindowRecord& b = m.records()[rd.begin + i];
        if (a.suffix != b.suffix || a.count != b.count) return false;
    }
    return true;
}

double bhattacharyya(const SuffixDistribution& p, const SuffixDistribution& q) {
    validate_distribution(p, "first");
    validate_distribution(q, "second");
    KahanSum overlap;
    for (const auto& [id, pv] : p.probs) {
        auto it = q.probs.find(id);
        if (it == q.probs.end()) continue;
        overlap.add(std::sqrt(pv * it->second));
    }
    return std::clamp(overlap.value(), 0.0, 1.0);
}

double hellinger(const SuffixDistribution& p, const SuffixDistribution& q) {
    return std::sqrt(1.0 - bhattacharyya(p, q));
}

OffdiagReport offdiag_identity_check(const CountsModel& m) {
    if (m.empty()) throw ValidationError("cannot run the off-diagonal check on an empty model");
    DensityOperator direct = reduced_density_suffix(m);

    // Flatten the prefix to one composite site: per-suffix (prefix, count)
    // lists in plain lexicographic prefix order, plus suffix totals.
    std::map<TokenId, std::vector<std::pair<IdSeq, std::uint64_t>>> by_suffix;
    std::map<TokenId, std::uint64_t> suffix_totals;
    for (const auto& rec : m.records()) {
        by_suffix[rec.suffix].emplace_back(rec.prefix, rec.count);
        suffix_totals[rec.suffix] += rec.count;
    }
    for (auto& [id, list] : by_suffix) std::sort(list.begin(), list.end());

    double total = static_cast<double>(m.total());
    OffdiagReport report;
    for (auto a = by_suffix.begin(); a != by_suffix.end(); ++a) {
        for (auto b = a; b != by_suffix.end(); ++b) {
            double cnt_a = static_cast<double>(suffix_totals[a->first]);
            double cnt_b = static_cast<double>(suffix_totals[b->first]);
            KahanSum overlap;
            auto ia = a->second.begin();
            auto ib = b->second.begin();
            while (ia != a->second.end() && ib != b->second.end()) {
                if (ia->first < ib->first) {
                    ++ia;
                } else if (ib->first < ia->first) {
                    ++ib;
                } else {
                    overlap.add(std::sqrt((static_cast<double>(ia->second) / cnt_a) *
                                          (static_cast<double>(ib->second) / cnt_b)));
                    ++ia;
                    ++ib;
                }
            }
            double formula = std::sqrt((cnt_a / total) * (cnt_b / total)) * overlap.value();
            double deviation = std::abs(direct.entry(a->first, b->first) - formula);
            report.max_abs_deviation = std::max(report.max_abs_deviation, deviation);
            ++report.pairs_checked;
        }
    }
    return report;
}

}  // namespace rdlm
