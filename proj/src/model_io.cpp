#include "rdlm/model_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace rdlm {

namespace {

constexpr std::uint32_t kFormatVersion = 1;
constexpr const char* kMagic = "rdlm-model";

std::string read_line(std::istream& in, const char* what) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError(std::string("unexpected end of file reading ") + what);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

std::uint64_t parse_u64(const std::string& text, const char* what) {
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
        throw FormatError(std::string("invalid integer for ") + what + ": '" + text + "'");
    }
    try {
        return std::stoull(text);
    } catch (const std::exception&) {
        throw FormatError(std::string("integer out of range for ") + what + ": '" + text + "'");
    }
}

std::uint64_t read_field(std::istream& in, const std::string& key) {
    std::istringstream line(read_line(in, key.c_str()));
    std::string name, value, extra;
    line >> name >> value;
    if (name != key || (line >> extra)) throw FormatError("expected '" + key + " <integer>' record");
    return parse_u64(value, key.c_str());
}

}  // namespace

void save_model(const CountsModel& m, std::ostream& out) {
    out << kMagic << ' ' << kFormatVersion << '\n';
    out << "n " << m.window_len() << '\n';
    out << "lowercase " << (m.tokenizer_options().lowercase ? 1 : 0) << '\n';
    out << "total " << m.total() << '\n';
    out << "vocab " << m.vocab().size() << '\n';
    for (const auto& tok : m.vocab().tokens()) out << tok << '\n';

    std::vector<WindowRecord> sorted = m.records();
    std::sort(sorted.begin(), sorted.end(), [](const WindowRecord& a, const WindowRecord& b) {
        if (a.prefix != b.prefix) return a.prefix < b.prefix;
        return a.suffix < b.suffix;
    });
    out << "counts " << sorted.size() << '\n';
    for (const auto& rec : sorted) {
        for (TokenId id : rec.prefix) out << id << ' ';
        out << rec.suffix << ' ' << rec.count << '\n';
    }
    if (!out) throw Error("write failure while saving model");
}

void save_model(const CountsModel& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open model file for writing: " + path.string());
    save_model(m, out);
    out.flush();
    if (!out) throw Error("write failure while saving model: " + path.string());
}

CountsModel load_model(std::istream& in) {
    {
        std::istringstream header(read_line(in, "header"));
        std::string magic, version, extra;
        header >> magic >> version;
        if (magic != kMagic) throw FormatError("not a model file (bad magic)");
        if (header >> extra) throw FormatError("malformed header line");
        if (parse_u64(version, "format_version") != kFormatVersion) {
            throw FormatError("unsupported model format version " + version);
        }
    }
    std::uint64_t n = read_field(in, "n");
    if (n < 2) throw ValidationError("model window length must be at least 2, got " + std::to_string(n));
    std::uint64_t lowercase = read_field(in, "lowercase");
    if (lowercase > 1) throw FormatError("lowercase flag must be 0 or 1");
    std::uint64_t total = read_field(in, "total");
    std::uint64_t vocab_size = read_field(in, "vocab");

    Vocabulary vocab;
    for (std::uint64_t i = 0; i < vocab_size; ++i) {
        std::string tok = read_line(in, "vocabulary entry");
        if (tok.empty()) throw FormatError("empty vocabulary entry");
        if (vocab.intern(tok) != i) throw FormatError("duplicate vocabulary entry: " + tok);
    }

    std::uint64_t num_records = read_field(in, "counts");
    std::vector<WindowRecord> records;
    records.reserve(num_records);
    std::uint64_t sum = 0;
    for (std::uint64_t i = 0; i < num_records; ++i) {
        std::istringstream line(read_line(in, "count record"));
        WindowRecord rec;
        std::string field;
        for (std::uint64_t j = 0; j + 1 < n; ++j) {
            if (!(line >> field)) throw FormatError("truncated count record");
            rec.prefix.push_back(static_cast<TokenId>(parse_u64(field, "prefix id")));
        }
        if (!(line >> field)) throw FormatError("truncated count record");
        rec.suffix = static_cast<TokenId>(parse_u64(field, "suffix id"));
        if (!(line >> field)) throw FormatError("truncated count record");
        rec.count = parse_u64(field, "count");
        if (line >> field) throw FormatError("trailing data in count record");
        sum += rec.count;
        records.push_back(std::move(rec));
    }
    if (sum != total) throw FormatError("total does not match sum of counts");

    TokenizerOptions opts{.lowercase = lowercase == 1};
    return CountsModel::from_parts(static_cast<std::uint32_t>(n), std::move(vocab), std::move(records), opts);
}

CountsModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open model file: " + path.string());
    return load_model(in);
}

}  // namespace rdlm
