#include "rdlm/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <ostream>
#include <sstream>

#include "rdlm/density.hpp"
#include "rdlm/enriched.hpp"
#include "rdlm/model_io.hpp"
#include "rdlm/order.hpp"
#include "rdlm/tokenizer.hpp"
#include "rdlm/verify.hpp"

namespace rdlm {

namespace {

struct CliConfig {
    std::string model_path;
    std::string input_path;
    std::string out_path;
    std::uint32_t n = 2;
    bool lines = false;
    bool lowercase = false;
    unsigned shards = 1;
    std::string phrase_text;
    std::string s_text;
    std::string t_text;
    bool normalized = false;
    double tol_psd = 1e-9;
    double tol_eq = 1e-12;
    std::uint64_t seed = 0;
    std::string format = "human";
    std::string mode = "auto";
    std::uint32_t max_len = 0;
};

bool human(const CliConfig& cfg) { return cfg.format == "human"; }

CountsModel load_or_fail(const CliConfig& cfg) {
    if (cfg.model_path.empty()) {
        throw ValidationError("no model path given (use --model or the RDLM_MODEL environment variable)");
    }
    return load_model(std::filesystem::path(cfg.model_path));
}

Phrase parse_nonempty_phrase(const CountsModel& m, const std::string& text) {
    Phrase s = m.parse_phrase(text);
    if (s.empty()) throw ValidationError("phrase must contain at least one token");
    if (s.size() > m.prefix_len()) {
        throw ValidationError("phrase length " + std::to_string(s.size()) + " exceeds n-1 = " +
                              std::to_string(m.prefix_len()));
    }
    return s;
}

int cmd_ingest(const CliConfig& cfg, std::ostream& out) {
    std::ifstream in(cfg.input_path, std::ios::binary);
    if (!in) throw Error("cannot open input file: " + cfg.input_path);
    TokenizerOptions topts{.lowercase = cfg.lowercase};

    CountsModel m;
    if (cfg.lines) {
        std::vector<std::vector<std::string>> sequences;
        std::string line;
        while (std::getline(in, line)) {
            auto tokens = tokenize(line, topts);
            if (!tokens.empty()) sequences.push_back(std::move(tokens));
        }
        m = CountsModel::from_sequences(sequences, cfg.n, topts);
    } else {
        std::stringstream buffer;
        buffer << in.rdbuf();
        m = CountsModel::from_tokens(tokenize(buffer.str(), topts), cfg.n, topts, cfg.shards);
    }
    if (m.total() == 0) throw ValidationError("input produced no windows of length " + std::to_string(cfg.n));

    save_model(m, std::filesystem::path(cfg.out_path));
    out << "vocab " << m.vocab().size() << '\n';
    out << "windows " << m.records().size() << '\n';
    out << "total " << m.total() << '\n';
    return kExitOk;
}

int cmd_density(const CliConfig& cfg, std::ostream& out) {
    CountsModel m = load_or_fail(cfg);
    Phrase s = parse_nonempty_phrase(m, cfg.phrase_text);
    DensityOperator rho = cfg.normalized ? phrase_density_normalized(m, s) : phrase_density(m, s);
    Prob marginal = m.marginal_prob(s);

    if (human(cfg)) {
        out << "phrase: " << m.phrase_text(s) << '\n';
        out << "marginal: " << marginal.count << '/' << marginal.total << " = " << format_double(marginal.value())
            << '\n';
        out << "matrix:" << '\n';
        write_matrix(out, rho);
        std::vector<TokenId> support = rho.support();
        if (!support.empty()) {
            out << "suffix ids:";
            for (TokenId id : support) out << ' ' << id << '=' << m.vocab().token(id);
            out << '\n';
        }
    } else {
        out << "phrase " << m.phrase_text(s) << '\n';
        out << "marginal " << marginal.count << '/' << marginal.total << '\n';
        write_matrix(out, rho);
    }
    return kExitOk;
}

int cmd_entail(const CliConfig& cfg, std::ostream& out) {
    CountsModel m = load_or_fail(cfg);
    Phrase s = parse_nonempty_phrase(m, cfg.s_text);
    Phrase t = parse_nonempty_phrase(m, cfg.t_text);

    OrderVerdict contained = phrase_leq_anchored(s, t);
    OrderVerdict loewner = loewner_geq(phrase_density(m, s), phrase_density(m, t), cfg.tol_psd);
    HomValue hl = hom_phrase(m, s, t);
    HomValue hd = hom_density(m, s, t);
    double distance = hom_to_distance(hl);

    const char* sep = human(cfg) ? ": " : " ";
    auto key = [&](const char* h, const char* r) { return human(cfg) ? h : r; };
    out << key("s", "s") << sep << m.phrase_text(s) << '\n';
    out << key("t", "t") << sep << m.phrase_text(t) << '\n';
    out << key("anchored containment", "contained") << sep << (contained.related ? "true" : "false") << '\n';
    out << key("loewner (unnormalized s >= t)", "loewner") << sep << (loewner.related ? "true" : "false") << '\n';
    if (!loewner.related) {
        out << key("loewner min eigenvalue", "loewner_min_eigenvalue") << sep << format_double(*loewner.min_eigenvalue)
            << '\n';
    }
    out << key("loewner tolerance", "loewner_tolerance") << sep << format_double(loewner.tolerance_used) << '\n';
    out << key("hom_phrase", "hom_phrase") << sep << format_double(hl.value) << '\n';
    out << key("hom_density", "hom_density") << sep << format_double(hd.value) << '\n';
    out << key("distance (-log hom_phrase)", "distance") << sep << format_double(distance) << '\n';
    return kExitOk;
}

int cmd_closure(const CliConfig& cfg, std::ostream& out) {
    CountsModel m = load_or_fail(cfg);
    Phrase s = parse_nonempty_phrase(m, cfg.phrase_text);
    std::uint32_t max_len = cfg.max_len == 0 ? m.prefix_len() : cfg.max_len;
    std::vector<Phrase> closure = upper_closure(m, s, max_len);
    if (human(cfg)) {
        out << "upper closure of '" << m.phrase_text(s) << "' up to length " << max_len << " (" << closure.size()
            << " phrases):\n";
        for (const Phrase& p : closure) out << "  " << m.phrase_text(p) << '\n';
    } else {
        out << "count " << closure.size() << '\n';
        for (const Phrase& p : closure) out << "phrase " << m.phrase_text(p) << '\n';
    }
    return kExitOk;
}

int cmd_verify(const CliConfig& cfg, std::ostream& out) {
    CountsModel m = load_or_fail(cfg);
    VerifyOptions vopts;
    vopts.seed = cfg.seed;
    vopts.tol_eq = cfg.tol_eq;
    vopts.tol_psd = cfg.tol_psd;
    if (cfg.mode == "exhaustive") vopts.mode = VerifyMode::Exhaustive;
    if (cfg.mode == "sample") vopts.mode = VerifyMode::Sample;

    std::vector<SuiteResult> results = run_verification(m, vopts);
    out << render_report(results);
    bool ok = all_passed(results);
    out << "result " << (ok ? "PASS" : "FAIL") << '\n';
    return ok ? kExitOk : kExitVerifyFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CliConfig cfg;
    CLI::App app{"Corpus statistics, reduced density operators, and entailment checks"};
    app.require_subcommand(1);

    auto add_model = [&](CLI::App* cmd) {
        cmd->add_option("--model", cfg.model_path, "Model file path")->envname("RDLM_MODEL");
    };
    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"human", "records"}));
    };

    CLI::App* ingest = app.add_subcommand("ingest", "Build a model file from a text corpus");
    ingest->add_option("input", cfg.input_path, "Input text file")->required();
    ingest->add_option("--n", cfg.n, "Window length (>= 2)")->required();
    ingest->add_option("--out", cfg.out_path, "Output model path")->required();
    ingest->add_flag("--lines", cfg.lines, "Treat each input line as one window of exactly n tokens");
    ingest->add_flag("--lowercase", cfg.lowercase, "Lowercase tokens (ASCII)");
    ingest->add_option("--shards", cfg.shards, "Worker shards for window counting")->check(CLI::PositiveNumber);

    CLI::App* density = app.add_subcommand("density", "Print the reduced density operator of a phrase");
    density->add_option("phrase", cfg.phrase_text, "Right-anchored phrase")->required();
    density->add_flag("--normalized", cfg.normalized, "Divide by the phrase marginal");
    add_model(density);
    add_format(density);

    CLI::App* entail = app.add_subcommand("entail", "Compare two phrases in both preorders");
    entail->add_option("s", cfg.s_text, "Candidate more-general phrase")->required();
    entail->add_option("t", cfg.t_text, "Candidate more-specific phrase")->required();
    entail->add_option("--tol-psd", cfg.tol_psd, "PSD tolerance")->check(CLI::PositiveNumber);
    add_model(entail);
    add_format(entail);

    CLI::App* closure = app.add_subcommand("closure", "List observed anchored extensions of a phrase");
    closure->add_option("phrase", cfg.phrase_text, "Right-anchored phrase")->required();
    closure->add_option("--max-len", cfg.max_len, "Maximum phrase length (default n-1)")->check(CLI::PositiveNumber);
    add_model(closure);
    add_format(closure);

    CLI::App* verify = app.add_subcommand("verify", "Run every structural suite against a model");
    verify->add_option("--mode", cfg.mode, "Enumeration mode")->check(CLI::IsMember({"auto", "exhaustive", "sample"}));
    verify->add_option("--seed", cfg.seed, "Sampling seed");
    verify->add_option("--tol-psd", cfg.tol_psd, "PSD tolerance")->check(CLI::PositiveNumber);
    verify->add_option("--tol-eq", cfg.tol_eq, "Identity tolerance")->check(CLI::PositiveNumber);
    add_model(verify);
    add_format(verify);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (ingest->parsed()) return cmd_ingest(cfg, out);
        if (density->parsed()) return cmd_density(cfg, out);
        if (entail->parsed()) return cmd_entail(cfg, out);
        if (closure->parsed()) return cmd_closure(cfg, out);
        if (verify->parsed()) return cmd_verify(cfg, out);
        err << "error: no command given\n";
        return kExitUsage;
    } catch (const UnknownTokenError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUnknownToken;
    } catch (const UndefinedDensityError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUndefinedDensity;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

}  // namespace rdlm
