#pragma once

#include <cstdio>
#include <string>

namespace clonesim {

// Every number written to reports, CSV files and the console uses 12
// significant digits.
inline std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

}  // namespace clonesim
