#include "rdlm/order.hpp"

#include <algorithm>

namespace rdlm {

std::string OrderVerdict::to_record() const {
    std::string out = "related ";
    out += related ? "true" : "false";
    out += "\nwitness ";
    if (offset) {
        out += "offset " + std::to_string(*offset);
    } else if (min_eigenvalue) {
        out += "min_eigenvalue " + format_double(*min_eigenvalue);
    } else {
        out += "none";
    }
    out += "\ntolerance_used " + format_double(tolerance_used) + "\n";
    return out;
}

OrderVerdict phrase_leq_anchored(const Phrase& s, const Phrase& t) {
    OrderVerdict v;
    if (s.empty() || t.empty()) throw ValidationError("phrases must be nonempty");
    if (s.size() > t.size()) return v;
    if (std::equal(s.ids.begin(), s.ids.end(), t.ids.end() - s.size())) {
        v.related = true;
        v.offset = t.size() - s.size();
    }
    return v;
}

OrderVerdict phrase_leq_general(const Phrase& s, const Phrase& t) {
    OrderVerdict v;
    if (s.empty() || t.empty()) throw ValidationError("phrases must be nonempty");
    if (s.size() > t.size()) return v;
    auto it = std::search(t.ids.begin(), t.ids.end(), s.ids.begin(), s.ids.end());
    if (it != t.ids.end()) {
        v.related = true;
        v.offset = static_cast<std::size_t>(it - t.ids.begin());
    }
    return v;
}

OrderVerdict loewner_geq(const DensityOperator& a, const DensityOperator& b, double tol) {
    if (a.dim() != b.dim()) throw ValidationError("operator dimension mismatch");
    DensityBuilder builder(a.dim());
    builder.accumulate(1.0, a);
    builder.accumulate(-1.0, b);
    PsdCheck check = check_psd(builder.finish(false), tol);
    OrderVerdict v;
    v.related = check.psd;
    v.tolerance_used = check.tolerance;
    if (!check.psd) v.min_eigenvalue = check.min_eigenvalue;
    return v;
}

ScaledOrderVerdict loewner_geq_scaled(const Phrase& s, const Phrase& t, const CountsModel& m, double tol) {
    if (!phrase_leq_anchored(s, t).related) {
        throw ValidationError("phrases are not comparable: the second must extend the first on the left");
    }
    Prob ms = m.marginal_prob(s);
    Prob mt = m.marginal_prob(t);
    if (ms.count == 0 || mt.count == 0) {
        throw UndefinedDensityError("scaled comparison undefined for zero-marginal phrases");
    }
    ScaledOrderVerdict out;
    out.weight = static_cast<double>(mt.count) / static_cast<double>(ms.count);
    DensityOperator rho_t = phrase_density_normalized(m, t).scaled(out.weight, false);
    out.verdict = loewner_geq(phrase_density_normalized(m, s), rho_t, tol);
    return out;
}

std::vector<Phrase> upper_closure(const CountsModel& m, const Phrase& s, std::uint32_t max_len) {
    if (max_len > m.prefix_len()) throw ValidationError("max_len exceeds n-1");
    if (s.empty()) throw ValidationError("phrases must be nonempty");
    std::vector<Phrase> out;
    if (s.size() > max_len) return out;
    CountsModel::RecordRange range = m.anchored_range(s);
    if (range.empty()) return out;
    std::vector<Phrase> last(max_len + 1);
    for (std::size_t i = range.begin; i < range.end; ++i) {
        const IdSeq& prefix = m.records()[i].prefix;
        for (std::uint32_t k = static_cast<std::uint32_t>(s.size()); k <= max_len; ++k) {
            Phrase tail(IdSeq(prefix.end() - k, prefix.end()));
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

bool suffix_support_subset(const DensityOperator& a, const DensityOperator& b, double support_tol) {
    if (a.dim() != b.dim()) throw ValidationError("operator dimension mismatch");
    std::vector<TokenId> sa = a.diagonal_support(support_tol);
    std::vector<TokenId> sb = b.diagonal_support(support_tol);
    return std::includes(sb.begin(), sb.end(), sa.begin(), sa.end());
}

}  // namespace rdlm
