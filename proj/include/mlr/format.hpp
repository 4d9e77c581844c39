#ifndef MLR_FORMAT_HPP
#define MLR_FORMAT_HPP

#include <cstdio>
#include <string>
#include <vector>

namespace mlr {

// All floats in reports and CSV are emitted with 9 significant digits.
inline std::string fmt9(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline std::string fmt9_list(const std::vector<double>& vs, const char* sep = ",") {
    std::string out;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) out += sep;
        out += fmt9(vs[i]);
    }
    return out;
}

}  // namespace mlr

#endif
