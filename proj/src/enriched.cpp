#include "rdlm/enriched.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <sstream>

#include "rdlm/density.hpp"
#include "rdlm/order.hpp"

namespace rdlm {

namespace {

constexpr std::size_t kMaxStoredViolations = 1000;

void add_violation(AxiomReport& report, Violation v) {
    if (report.violations.size() < kMaxStoredViolations) report.violations.push_back(std::move(v));
}

void merge_into(AxiomReport& into, const AxiomReport& part) {
    into.checked_pairs += part.checked_pairs;
    into.checked_triples += part.checked_triples;
    into.comparable_pairs += part.comparable_pairs;
    into.equal_pairs += part.equal_pairs;
    into.max_gap = std::max(into.max_gap, part.max_gap);
    into.max_equality_gap = std::max(into.max_equality_gap, part.max_equality_gap);
    for (const auto& v : part.violations) add_violation(into, v);
}

HomValue hom(const CountsModel& m, HomSide side, const Phrase& s, const Phrase& t) {
    return side == HomSide::Phrase ? hom_phrase(m, s, t) : hom_density(m, s, t);
}

// Deterministic sampled index streams. Plain modulo keeps the draw sequence
// identical across standard library implementations.
struct Sampler {
    std::mt19937_64 rng;
    explicit Sampler(std::uint64_t seed) : rng(seed) {}
    std::size_t next(std::size_t bound) { return static_cast<std::size_t>(rng() % bound); }
};

Phrase record_tail(const WindowRecord& rec, std::size_t k) {
    return Phrase(IdSeq(rec.prefix.end() - static_cast<std::ptrdiff_t>(k), rec.prefix.end()));
}

// Half independent object draws, half anchored chains from one record; the
// chains exercise the equality case of the composition and functor laws.
std::vector<std::array<Phrase, 3>> sample_triples(const CountsModel& m, const std::vector<Phrase>& objects,
                                                  std::size_t count, std::uint64_t seed) {
    Sampler sampler(seed);
    std::vector<std::array<Phrase, 3>> out;
    out.reserve(count);
    std::size_t plen = m.prefix_len();
    for (std::size_t i = 0; i < count; ++i) {
        if (i % 2 == 0 || m.records().empty()) {
            out.push_back({objects[sampler.next(objects.size())], objects[sampler.next(objects.size())],
                           objects[sampler.next(objects.size())]});
        } else {
            const WindowRecord& rec = m.records()[sampler.next(m.records().size())];
            std::array<std::size_t, 3> ks{1 + sampler.next(plen), 1 + sampler.next(plen), 1 + sampler.next(plen)};
            std::sort(ks.begin(), ks.end());
            out.push_back({record_tail(rec, ks[0]), record_tail(rec, ks[1]), record_tail(rec, ks[2])});
        }
    }
    return out;
}

std::vector<std::array<Phrase, 2>> sample_pairs(const CountsModel& m, const std::vector<Phrase>& objects,
                                                std::size_t count, std::uint64_t seed) {
    Sampler sampler(seed);
    std::vector<std::array<Phrase, 2>> out;
    out.reserve(count);
    std::size_t plen = m.prefix_len();
    for (std::size_t i = 0; i < count; ++i) {
        if (i % 2 == 0 || m.records().empty()) {
            out.push_back({objects[sampler.next(objects.size())], objects[sampler.next(objects.size())]});
        } else {
            const WindowRecord& rec = m.records()[sampler.next(m.records().size())];
            std::array<std::size_t, 2> ks{1 + sampler.next(plen), 1 + sampler.next(plen)};
            std::sort(ks.begin(), ks.end());
            out.push_back({record_tail(rec, ks[0]), record_tail(rec, ks[1])});
        }
    }
    return out;
}

// Runs fn(lo, hi, report) over [0, count) split across workers; partial
// reports merge in worker order, so results do not depend on scheduling.
template <typename Fn>
AxiomReport run_partitioned(std::size_t count, std::size_t num_workers, Fn&& fn) {
    if (num_workers <= 1 || count < 2 * num_workers) {
        AxiomReport report;
        fn(0, count, report);
        return report;
    }
    std::size_t chunk = (count + num_workers - 1) / num_workers;
    std::vector<std::future<AxiomReport>> parts;
    for (std::size_t w = 0; w < num_workers; ++w) {
        std::size_t lo = std::min(w * chunk, count);
        std::size_t hi = std::min(lo + chunk, count);
        parts.push_back(std::async(std::launch::async, [lo, hi, &fn] {
            AxiomReport part;
            fn(lo, hi, part);
            return part;
        }));
    }
    AxiomReport report;
    for (auto& p : parts) merge_into(report, p.get());
    return report;
}

}  // namespace

HomValue hom_phrase(const CountsModel& m, const Phrase& s, const Phrase& t) {
    if (!phrase_leq_anchored(s, t).related) return {0.0};
    std::uint64_t cs = m.anchored_count(s);
    if (cs == 0) return {0.0};
    std::uint64_t ct = m.anchored_count(t);
    return {static_cast<double>(ct) / static_cast<double>(cs)};
}

HomValue hom_density(const CountsModel& m, const Phrase& s, const Phrase& t) {
    if (!phrase_leq_anchored(s, t).related) return {0.0};
    if (s.size() > m.prefix_len() || t.size() > m.prefix_len()) return {0.0};
    double trace_s = phrase_density_trace(m, s);
    if (trace_s == 0.0) throw UndefinedDensityError("hom undefined: denominator density has zero trace");
    return {phrase_density_trace(m, t) / trace_s};
}

double hom_to_distance(HomValue h) {
    if (h.value <= 0.0) return std::numeric_limits<double>::infinity();
    if (h.value >= 1.0) return 0.0;
    return -std::log(h.value);
}

std::string AxiomReport::summary(const CountsModel& m, std::size_t max_violations) const {
    std::ostringstream out;
    out << "checked_pairs " << checked_pairs << '\n';
    out << "checked_triples " << checked_triples << '\n';
    out << "violations " << violations.size() << '\n';
    out << "max_gap " << format_double(max_gap) << '\n';
    if (comparable_pairs > 0) {
        out << "comparable_pairs " << comparable_pairs << '\n';
        out << "equal_pairs " << equal_pairs << '\n';
        out << "max_equality_gap " << format_double(max_equality_gap) << '\n';
    }
    for (std::size_t i = 0; i < violations.size() && i < max_violations; ++i) {
        const Violation& v = violations[i];
        out << "violation [";
        for (std::size_t j = 0; j < v.objects.size(); ++j) {
            if (j) out << " | ";
            out << m.phrase_text(v.objects[j]);
        }
        out << "] lhs " << format_double(v.lhs) << " rhs " << format_double(v.rhs) << " gap " << format_double(v.gap)
            << '\n';
    }
    return out.str();
}

AxiomReport check_category_axioms(const CountsModel& m, HomSide side, const CheckOptions& opts) {
    std::vector<Phrase> objects = m.observed_phrases();
    AxiomReport report;
    if (objects.empty()) return report;

    // Unit law on every object: 1 <= hom(s, s).
    for (const Phrase& s : objects) {
        double h = hom(m, side, s, s).value;
        ++report.checked_pairs;
        if (h < 1.0 - opts.slack) {
            add_violation(report, {{s, s}, 1.0, h, 1.0 - h});
        }
    }

    auto check_triple = [&](const Phrase& s, const Phrase& t, const Phrase& u, AxiomReport& r) {
        double lhs = hom(m, side, s, t).value * hom(m, side, t, u).value;
        double rhs = hom(m, side, s, u).value;
        ++r.checked_triples;
        r.max_gap = std::max(r.max_gap, lhs - rhs);
        if (lhs > rhs + opts.slack) add_violation(r, {{s, t, u}, lhs, rhs, lhs - rhs});
    };

    AxiomReport triples;
    if (opts.exhaustive) {
        triples = run_partitioned(objects.size(), opts.num_workers, [&](std::size_t lo, std::size_t hi, AxiomReport& r) {
            for (std::size_t i = lo; i < hi; ++i) {
                for (const Phrase& t : objects) {
                    for (const Phrase& u : objects) check_triple(objects[i], t, u, r);
                }
            }
        });
    } else {
        auto sampled = sample_triples(m, objects, opts.sample_triples, opts.seed);
        triples = run_partitioned(sampled.size(), opts.num_workers, [&](std::size_t lo, std::size_t hi, AxiomReport& r) {
            for (std::size_t i = lo; i < hi; ++i) check_triple(sampled[i][0], sampled[i][1], sampled[i][2], r);
        });
    }
    merge_into(report, triples);
    return report;
}

AxiomReport check_functor(const CountsModel& m, const CheckOptions& opts) {
    std::vector<Phrase> objects = m.observed_phrases();
    AxiomReport report;
    if (objects.empty()) return report;

    auto check_pair = [&](const Phrase& s, const Phrase& t, AxiomReport& r) {
        double lhs = hom_phrase(m, s, t).value;
        double rhs = hom_density(m, s, t).value;
        ++r.checked_pairs;
        r.max_gap = std::max(r.max_gap, lhs - rhs);
        if (lhs > rhs + opts.slack) add_violation(r, {{s, t}, lhs, rhs, lhs - rhs});
        if (phrase_leq_anchored(s, t).related) {
            ++r.comparable_pairs;
            double gap = std::abs(lhs - rhs);
            r.max_equality_gap = std::max(r.max_equality_gap, gap);
            if (gap <= opts.slack) ++r.equal_pairs;
        }
    };

    AxiomReport pairs;
    if (opts.exhaustive) {
        pairs = run_partitioned(objects.size(), opts.num_workers, [&](std::size_t lo, std::size_t hi, AxiomReport& r) {
            for (std::size_t i = lo; i < hi; ++i) {
                for (const Phrase& t : objects) check_pair(objects[i], t, r);
            }
        });
    } else {
        auto sampled = sample_pairs(m, objects, opts.sample_pairs, opts.seed);
        pairs = run_partitioned(sampled.size(), opts.num_workers, [&](std::size_t lo, std::size_t hi, AxiomReport& r) {
            for (std::size_t i = lo; i < hi; ++i) check_pair(sampled[i][0], sampled[i][1], r);
        });
    }
    merge_into(report, pairs);
    return report;
}

}  // namespace rdlm
