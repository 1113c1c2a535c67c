#include "rdlm/types.hpp"

#include <cstdio>

namespace rdlm {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace rdlm
