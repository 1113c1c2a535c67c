#pragma once

#include <filesystem>
#include <iosfwd>

#include "rdlm/counts.hpp"

namespace rdlm {

// Versioned text format, integers only. Count records are written in plain
// lexicographic (prefix ids, suffix id) order so identical models serialize
// byte-identically.
void save_model(const CountsModel& m, std::ostream& out);
void save_model(const CountsModel& m, const std::filesystem::path& path);

CountsModel load_model(std::istream& in);
CountsModel load_model(const std::filesystem::path& path);

}  // namespace rdlm
