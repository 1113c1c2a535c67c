#include "rdlm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <random>
#include <sstream>

#include "rdlm/density.hpp"
#include "rdlm/enriched.hpp"
#include "rdlm/order.hpp"
#include "rdlm/state.hpp"

namespace rdlm {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, const std::string& name) {
    std::uint64_t h = 1469598103934665603ull ^ seed;
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

// Deterministic subset of the observed phrases: everything in exhaustive
// mode, otherwise a seeded draw (duplicates removed, input order kept).
std::vector<Phrase> pick_phrases(const std::vector<Phrase>& objects, bool exhaustive, std::size_t budget,
                                 std::uint64_t seed) {
    if (exhaustive || objects.size() <= budget || objects.empty()) return objects;
    std::mt19937_64 rng(seed);
    std::vector<bool> taken(objects.size(), false);
    std::vector<Phrase> out;
    out.reserve(budget);
    for (std::size_t i = 0; i < budget; ++i) {
        std::size_t idx = static_cast<std::size_t>(rng() % objects.size());
        if (!taken[idx]) {
            taken[idx] = true;
            out.push_back(objects[idx]);
        }
    }
    return out;
}

// Anchored (shorter, longer) phrase pairs: all observed containments in
// exhaustive mode, otherwise seeded chains drawn from records.
std::vector<std::pair<Phrase, Phrase>> anchored_pairs(const CountsModel& m, const std::vector<Phrase>& objects,
                                                      bool exhaustive, std::size_t budget, std::uint64_t seed) {
    std::vector<std::pair<Phrase, Phrase>> out;
    if (exhaustive) {
        for (const Phrase& s : objects) {
            for (const Phrase& t : objects) {
                if (s.size() < t.size() && phrase_leq_anchored(s, t).related) out.emplace_back(s, t);
            }
        }
        return out;
    }
    std::mt19937_64 rng(seed);
    std::size_t plen = m.prefix_len();
    for (std::size_t i = 0; i < budget; ++i) {
        const WindowRecord& rec = m.records()[rng() % m.records().size()];
        std::size_t k1 = 1 + static_cast<std::size_t>(rng() % plen);
        std::size_t k2 = 1 + static_cast<std::size_t>(rng() % plen);
        if (k1 > k2) std::swap(k1, k2);
        out.emplace_back(Phrase(IdSeq(rec.prefix.end() - k1, rec.prefix.end())),
                         Phrase(IdSeq(rec.prefix.end() - k2, rec.prefix.end())));
    }
    return out;
}

// Ordered object pairs for the support-containment suite: everything in
// exhaustive mode, otherwise seeded free draws mixed with anchored chains.
std::vector<std::pair<Phrase, Phrase>> mixed_pairs(const CountsModel& m, const std::vector<Phrase>& objects,
                                                   bool exhaustive, std::size_t budget, std::uint64_t seed) {
    std::vector<std::pair<Phrase, Phrase>> out;
    if (exhaustive) {
        for (const Phrase& s : objects) {
            for (const Phrase& t : objects) out.emplace_back(s, t);
        }
        return out;
    }
    std::mt19937_64 rng(seed);
    std::size_t plen = m.prefix_len();
    for (std::size_t i = 0; i < budget; ++i) {
        if (i % 2 == 0) {
            out.emplace_back(objects[rng() % objects.size()], objects[rng() % objects.size()]);
        } else {
            const WindowRecord& rec = m.records()[rng() % m.records().size()];
            std::size_t k1 = 1 + static_cast<std::size_t>(rng() % plen);
            std::size_t k2 = 1 + static_cast<std::size_t>(rng() % plen);
            if (k1 > k2) std::swap(k1, k2);
            out.emplace_back(Phrase(IdSeq(rec.prefix.end() - k1, rec.prefix.end())),
                             Phrase(IdSeq(rec.prefix.end() - k2, rec.prefix.end())));
        }
    }
    return out;
}

SuiteResult suite_psi_norm(const CountsModel& m, const VerifyOptions& opts) {
    SuiteResult r;
    r.name = "psi_norm";
    double gap = std::abs(build_psi(m).norm_squared() - 1.0);
    r.checks = 1;
    r.max_gap = gap;
    r.passed = gap <= opts.tol_eq;
    if (!r.passed) r.detail = "state vector norm deviates by " + format_double(gap);
    return r;
}

SuiteResult suite_trace_marginal(const CountsModel& m, const VerifyOptions& opts, const std::vector<Phrase>& phrases) {
    SuiteResult r;
    r.name = "trace_marginal";
    for (const Phrase& s : phrases) {
        double marginal = m.marginal_prob(s).value();
        double g1 = std::abs(phrase_density(m, s).trace() - marginal);
        double g2 = std::abs(phrase_density_trace(m, s) - marginal);
        r.max_gap = std::max({r.max_gap, g1, g2});
        r.checks += 2;
    }
    r.passed = r.max_gap <= opts.tol_eq;
    if (!r.passed) r.detail = "trace deviates from marginal by " + format_double(r.max_gap);
    return r;
}

SuiteResult suite_extension_sum(const CountsModel& m, const VerifyOptions& opts, const std::vector<Phrase>& phrases) {
    SuiteResult r;
    r.name = "extension_sum";
    for (const Phrase& s : phrases) {
        DensityBuilder sum(static_cast<std::uint32_t>(m.vocab().size()));
        for (const auto& [extender, rho] : decompose_one_step(m, s)) sum.accumulate(1.0, rho);
        double gap = max_abs_diff(phrase_density(m, s), sum.finish(false));
        r.max_gap = std::max(r.max_gap, gap);
        ++r.checks;
    }
    r.passed = r.max_gap <= opts.tol_eq;
    if (!r.passed) r.detail = "one-step sum deviates by " + format_double(r.max_gap);
    return r;
}

SuiteResult suite_weighted_decomposition(const CountsModel& m, const VerifyOptions& opts,
                                         const std::vector<Phrase>& phrases) {
    SuiteResult r;
    r.name = "weighted_decomposition";
    for (const Phrase& s : phrases) {
        DensityOperator rho_s = phrase_density_normalized(m, s);
        for (std::uint32_t depth = 0; s.size() + depth <= m.prefix_len(); ++depth) {
            auto terms = decompose_weighted(m, s, depth);
            KahanSum weight_sum;
            DensityBuilder sum(static_cast<std::uint32_t>(m.vocab().size()));
            for (const auto& [ext, term] : terms) {
                weight_sum.add(term.weight);
                sum.accumulate(term.weight, term.density);
            }
            double gap = std::max(std::abs(weight_sum.value() - 1.0), max_abs_diff(rho_s, sum.finish(false)));
            r.max_gap = std::max(r.max_gap, gap);
            ++r.checks;
        }
    }
    r.passed = r.max_gap <= opts.tol_eq;
    if (!r.passed) r.detail = "weighted reconstruction deviates by " + format_double(r.max_gap);
    return r;
}

SuiteResult suite_psd_operators(const CountsModel& m, const VerifyOptions& opts, const std::vector<Phrase>& phrases,
                                std::size_t budget) {
    SuiteResult r;
    r.name = "psd_operators";
    double worst = 0.0;  // most negative scaled eigenvalue
    auto inspect = [&](const DensityOperator& rho) {
        PsdCheck check = check_psd(rho, opts.tol_psd);
        if (!check.psd) worst = std::min(worst, check.min_eigenvalue);
        r.max_gap = std::max(r.max_gap, -check.min_eigenvalue);
        ++r.checks;
        return check.psd;
    };
    bool ok = inspect(reduced_density_suffix(m));
    for (std::size_t i = 0; i < phrases.size() && i < budget; ++i) {
        ok = inspect(phrase_density(m, phrases[i])) && ok;
    }
    r.passed = ok;
    if (!r.passed) r.detail = "negative eigenvalue " + format_double(worst);
    return r;
}

SuiteResult suite_order_reversal(const CountsModel& m, const VerifyOptions& opts,
                                 const std::vector<std::pair<Phrase, Phrase>>& pairs) {
    SuiteResult r;
    r.name = "order_reversal";
    double worst = 0.0;
    for (const auto& [s, t] : pairs) {
        OrderVerdict v = loewner_geq(phrase_density(m, s), phrase_density(m, t), opts.tol_psd);
        ++r.checks;
        if (!v.related) {
            worst = std::min(worst, *v.min_eigenvalue);
            r.max_gap = std::max(r.max_gap, -*v.min_eigenvalue);
        }
    }
    r.passed = r.checks == 0 || worst == 0.0;
    if (!r.passed) r.detail = "containment pair with negative difference eigenvalue " + format_double(worst);
    return r;
}

SuiteResult suite_suffix_support(const CountsModel& m, const VerifyOptions& opts,
                                 const std::vector<std::pair<Phrase, Phrase>>& pairs) {
    SuiteResult r;
    r.name = "suffix_support";
    std::size_t failures = 0;
    for (const auto& [s, t] : pairs) {
        DensityOperator rho_s = phrase_density(m, s);
        DensityOperator rho_t = phrase_density(m, t);
        if (!loewner_geq(rho_s, rho_t, opts.tol_psd).related) continue;
        ++r.checks;
        if (!suffix_support_subset(rho_t, rho_s)) ++failures;
    }
    r.passed = failures == 0;
    r.max_gap = static_cast<double>(failures);
    if (!r.passed) r.detail = std::to_string(failures) + " dominated operators with new suffix support";
    return r;
}

SuiteResult suite_category(const CountsModel& m, const VerifyOptions& opts, HomSide side, bool exhaustive,
                           const std::string& name) {
    SuiteResult r;
    r.name = name;
    CheckOptions copts;
    copts.exhaustive = exhaustive;
    copts.seed = mix_seed(opts.seed, name);
    copts.sample_triples = opts.sample_triples;
    copts.slack = opts.tol_eq;
    copts.num_workers = opts.parallel ? 4 : 1;
    AxiomReport report = check_category_axioms(m, side, copts);
    r.checks = report.checked_pairs + report.checked_triples;
    r.max_gap = report.max_gap;
    r.passed = report.passed();
    if (!r.passed) r.detail = report.summary(m, 3);
    return r;
}

SuiteResult suite_functor(const CountsModel& m, const VerifyOptions& opts, bool exhaustive) {
    SuiteResult r;
    r.name = "functor";
    CheckOptions copts;
    copts.exhaustive = exhaustive;
    copts.seed = mix_seed(opts.seed, r.name);
    copts.sample_pairs = opts.sample_pairs;
    copts.slack = opts.tol_eq;
    copts.num_workers = opts.parallel ? 4 : 1;
    AxiomReport report = check_functor(m, copts);
    r.checks = report.checked_pairs;
    r.max_gap = std::max(report.max_gap, report.max_equality_gap);
    r.passed = report.passed() && report.max_equality_gap <= opts.tol_eq;
    if (!r.passed) r.detail = report.summary(m, 3);
    return r;
}

SuiteResult suite_offdiag_identity(const CountsModel& m, const VerifyOptions& opts) {
    SuiteResult r;
    r.name = "offdiag_identity";
    OffdiagReport report = offdiag_identity_check(m);
    r.checks = report.pairs_checked;
    r.max_gap = report.max_abs_deviation;
    r.passed = r.max_gap <= opts.tol_eq;
    if (!r.passed) r.detail = "factored form deviates by " + format_double(r.max_gap);
    return r;
}

SuiteResult suite_oracle_equivalence(const CountsModel& m, const VerifyOptions& opts,
                                     const std::vector<Phrase>& phrases) {
    SuiteResult r;
    r.name = "oracle_equivalence";
    StateVector psi = build_psi(m);
    OracleOptions oopts{.max_dim = opts.oracle_max_dim};
    if (psi.space.dim() > oopts.max_dim) {
        r.passed = true;
        r.detail = "skipped: composite dimension " + std::to_string(psi.space.dim()) + " exceeds the oracle guard";
        return r;
    }
    double gap = max_abs_diff(reduced_density_suffix(m), partial_trace_prefix(full_projection(psi, oopts)));
    r.max_gap = gap;
    ++r.checks;
    for (const Phrase& s : phrases) {
        r.max_gap = std::max(r.max_gap, max_abs_diff(phrase_density(m, s), oracle_phrase_density(psi, s, oopts)));
        ++r.checks;
    }
    r.passed = r.max_gap <= opts.tol_eq;
    if (!r.passed) r.detail = "fast path deviates from the dense route by " + format_double(r.max_gap);
    return r;
}

}  // namespace

std::vector<SuiteResult> run_verification(const CountsModel& m, const VerifyOptions& opts) {
    if (m.empty()) throw ValidationError("cannot verify an empty model");
    std::vector<Phrase> objects = m.observed_phrases();
    bool exhaustive = opts.mode == VerifyMode::Exhaustive ||
                      (opts.mode == VerifyMode::Auto && objects.size() <= opts.exhaustive_threshold);

    auto phrases_for = [&](const char* suite) {
        return pick_phrases(objects, exhaustive, opts.sample_phrases, mix_seed(opts.seed, suite));
    };
    // The one-step identity only applies below the maximal phrase length, so
    // that suite samples from the eligible subset.
    std::vector<Phrase> extendable;
    for (const Phrase& s : objects) {
        if (s.size() < m.prefix_len()) extendable.push_back(s);
    }
    auto extendable_for = [&](const char* suite) {
        return pick_phrases(extendable, exhaustive, opts.sample_phrases, mix_seed(opts.seed, suite));
    };

    std::vector<std::function<SuiteResult()>> suites;
    suites.emplace_back([&] { return suite_psi_norm(m, opts); });
    suites.emplace_back([&] { return suite_trace_marginal(m, opts, phrases_for("trace_marginal")); });
    suites.emplace_back([&] { return suite_extension_sum(m, opts, extendable_for("extension_sum")); });
    suites.emplace_back([&] { return suite_weighted_decomposition(m, opts, phrases_for("weighted_decomposition")); });
    suites.emplace_back([&] { return suite_psd_operators(m, opts, phrases_for("psd_operators"), opts.loewner_pairs); });
    suites.emplace_back([&] {
        return suite_order_reversal(
            m, opts, anchored_pairs(m, objects, exhaustive, opts.loewner_pairs, mix_seed(opts.seed, "order_reversal")));
    });
    suites.emplace_back([&] {
        return suite_suffix_support(
            m, opts, mixed_pairs(m, objects, exhaustive, opts.loewner_pairs, mix_seed(opts.seed, "suffix_support")));
    });
    suites.emplace_back([&] { return suite_category(m, opts, HomSide::Phrase, exhaustive, "category_phrase"); });
    suites.emplace_back([&] { return suite_category(m, opts, HomSide::Density, exhaustive, "category_density"); });
    suites.emplace_back([&] { return suite_functor(m, opts, exhaustive); });
    suites.emplace_back([&] { return suite_offdiag_identity(m, opts); });
    suites.emplace_back([&] { return suite_oracle_equivalence(m, opts, phrases_for("oracle_equivalence")); });

    std::vector<SuiteResult> results;
    if (opts.parallel) {
        std::vector<std::future<SuiteResult>> futures;
        for (auto& suite : suites) futures.push_back(std::async(std::launch::async, suite));
        for (auto& f : futures) results.push_back(f.get());
    } else {
        for (auto& suite : suites) results.push_back(suite());
    }
    std::sort(results.begin(), results.end(), [](const SuiteResult& a, const SuiteResult& b) { return a.name < b.name; });
    return results;
}

bool all_passed(const std::vector<SuiteResult>& results) {
    return std::all_of(results.begin(), results.end(), [](const SuiteResult& r) { return r.passed; });
}

std::string render_report(const std::vector<SuiteResult>& results) {
    std::ostringstream out;
    for (const auto& r : results) {
        out << (r.passed ? "PASS" : "FAIL") << ' ' << r.name << " checks=" << r.checks
            << " max_gap=" << format_double(r.max_gap);
        if (!r.detail.empty()) out << " (" << r.detail << ')';
        out << '\n';
    }
    return out.str();
}

}  // namespace rdlm
