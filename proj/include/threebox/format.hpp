#pragma once

#include <cstdio>
#include <string>

namespace threebox {

// All emitted floating-point values go through this single formatter so that
// identical inputs give byte-identical CSV/JSON output.
inline std::string fmt_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12e", x);
    return buf;
}

}  // namespace threebox
